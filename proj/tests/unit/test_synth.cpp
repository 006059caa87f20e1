#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "groove/analysis.h"
#include "groove/dfa.h"
#include "groove/error.h"
#include "groove/metric.h"
#include "groove/synth.h"
#include "helpers.h"
#include "oracles/ramp.h"

using namespace groove;

TEST_CASE("tempo map inverts and matches the RK4 oracle") {
  TempoMap flat(84.0);
  CHECK(flat.pulses_at(1.0) == doctest::Approx(8.4));
  CHECK(flat.time_at_pulse(8.4) == doctest::Approx(1.0));

  std::vector<TempoKnot> knots{{0.0, 84.0}, {40.0, 86.0}, {60.0, 80.0}};
  TempoMap ramp(knots);
  CHECK(ramp.bpm_at(20.0) == doctest::Approx(85.0));
  CHECK(ramp.bpm_at(100.0) == doctest::Approx(80.0));
  for (double t : {0.0, 3.3, 39.9, 40.0, 52.0, 75.0}) CHECK(ramp.time_at_pulse(ramp.pulses_at(t)) == doctest::Approx(t));

  auto rk4 = oracle::pulse_times({{0.0, 84.0}, {40.0, 86.0}, {60.0, 80.0}}, 800);
  for (int k = 0; k <= 800; k += 37) CHECK(std::abs(ramp.time_at_pulse(k) - rk4[k]) < 1e-9);

  CHECK_THROWS_AS(TempoMap(std::vector<TempoKnot>{{0, 84}, {0, 85}}), ParameterError);
  CHECK_THROWS_AS(TempoMap(std::vector<TempoKnot>{}), ParameterError);
  CHECK_THROWS_AS(TempoMap(-1.0), ParameterError);
}

TEST_CASE("one noiseless bar alternates double and single exactly") {
  GrooveSpec spec;
  spec.bars = 1;
  spec.swing_ratio = 2.0;
  auto g = gen_shuffle_onsets(spec, 1);
  REQUIRE(g.onsets.size() == 8);
  const double u = 60.0 / (6 * 84.0);
  for (std::size_t i = 1; i < 8; ++i) {
    double tau = g.onsets[i].time_s - g.onsets[i - 1].time_s;
    CHECK(tau == doctest::Approx(i % 2 == 1 ? 2 * u : u).epsilon(1e-12));
  }
  CHECK(g.onsets[0].time_s == doctest::Approx(spec.start_s));
  CHECK(g.nominal_times == onset_times(g.onsets));
  for (const auto& o : g.onsets) CHECK(o.label == OnsetLabel::kHihat);
}

TEST_CASE("swing 1.79 grid geometry") {
  GrooveSpec spec;
  spec.bars = 2;
  spec.swing_ratio = 1.79;
  auto g = gen_shuffle_onsets(spec, 1);
  REQUIRE(g.onsets.size() == 16);
  double y = g.onsets[1].time_s - g.onsets[0].time_s;
  double x = g.onsets[2].time_s - g.onsets[1].time_s;
  CHECK(y / x == doctest::Approx(1.79));
  CHECK(x + y == doctest::Approx(3 * 60.0 / (6 * 84.0)));
}

TEST_CASE("generator is deterministic and seed dependent") {
  GrooveSpec spec;
  spec.bars = 8;
  spec.jitter_sigma_ms = 5;
  spec.lrc_beta = 1.0;
  spec.lrc_sigma_ms = 3;
  spec.amplitude_noise = 0.1;
  spec.ghost_probability = 0.3;
  auto a = gen_shuffle_onsets(spec, 42);
  auto b = gen_shuffle_onsets(spec, 42);
  auto c = gen_shuffle_onsets(spec, 43);
  CHECK(a.onsets == b.onsets);
  CHECK(a.nominal_times == b.nominal_times);
  CHECK_FALSE(a.onsets == c.onsets);
  for (std::size_t i = 1; i < a.onsets.size(); ++i) CHECK(a.onsets[i].time_s > a.onsets[i - 1].time_s);
  for (const auto& o : a.onsets) CHECK((o.amplitude >= 0.0 && o.amplitude <= 1.0));
}

TEST_CASE("jitter has the programmed spread") {
  GrooveSpec spec;
  spec.jitter_sigma_ms = 5;
  auto g = gen_shuffle_onsets(spec, 7);
  double ss = 0.0;
  for (std::size_t i = 0; i < g.onsets.size(); ++i) ss += std::pow(g.onsets[i].time_s - g.nominal_times[i], 2);
  CHECK(std::sqrt(ss / g.onsets.size()) == doctest::Approx(0.005).epsilon(0.1));
}

TEST_CASE("ghost notes sit inside the triplet and are excluded from swing") {
  GrooveSpec spec;
  spec.swing_ratio = 1.79;
  spec.ghost_probability = 0.5;
  auto g = gen_shuffle_onsets(spec, 3);
  std::size_t ghosts = 0;
  for (std::size_t i = 0; i < g.onsets.size(); ++i) {
    if (g.onsets[i].label != OnsetLabel::kGhost) continue;
    ++ghosts;
    CHECK(g.onsets[i].amplitude == doctest::Approx(spec.ghost_amplitude));
    CHECK(g.onsets[i - 1].label == OnsetLabel::kHihat);
    CHECK(g.onsets[i + 1].label == OnsetLabel::kHihat);
  }
  CHECK(ghosts > 80);
  CHECK(ghosts < 160);
  auto iv = classify_intervals(intervals(g.onsets), 60.0 / (6 * 84.0));
  auto r = swing_ratio(iv, g.onsets);
  CHECK(r.n_intra_triplet_excluded == 2 * ghosts);
  CHECK(r.swing_ratio == doctest::Approx(1.79).epsilon(1e-9));
}

TEST_CASE("amplitude pattern follows phrase positions") {
  GrooveSpec spec;
  spec.bars = 4;
  spec.amplitude_pattern = {0.6, 0.3};
  auto g = gen_shuffle_onsets(spec, 1);
  for (std::size_t i = 0; i < g.onsets.size(); ++i) CHECK(g.onsets[i].amplitude == (i % 2 == 0 ? 0.6 : 0.3));
  CHECK(default_amplitude_pattern().size() == 16);
}

TEST_CASE("spec validation") {
  auto bad = [](auto mutate) {
    GrooveSpec s;
    mutate(s);
    return s;
  };
  CHECK_THROWS_AS(gen_shuffle_onsets(bad([](GrooveSpec& s) { s.bpm = 0; }), 1), ParameterError);
  CHECK_THROWS_AS(gen_shuffle_onsets(bad([](GrooveSpec& s) { s.swing_ratio = -1; }), 1), ParameterError);
  CHECK_THROWS_AS(gen_shuffle_onsets(bad([](GrooveSpec& s) { s.bars = 0; }), 1), ParameterError);
  CHECK_THROWS_AS(gen_shuffle_onsets(bad([](GrooveSpec& s) { s.jitter_sigma_ms = -1; }), 1), ParameterError);
  CHECK_THROWS_AS(gen_shuffle_onsets(bad([](GrooveSpec& s) { s.lrc_beta = 4; }), 1), ParameterError);
  CHECK_THROWS_AS(gen_shuffle_onsets(bad([](GrooveSpec& s) { s.amplitude_pattern = {1.5}; }), 1), ParameterError);
}

TEST_CASE("power-law noise is normalized and deterministic") {
  auto x = gen_powerlaw_noise(1.0, 1000, 5);
  CHECK(x.size() == 1000);
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  CHECK(std::abs(mean) < 1e-12);
  CHECK(var / x.size() == doctest::Approx(1.0));
  CHECK(gen_powerlaw_noise(1.0, 1000, 5) == x);
  CHECK_FALSE(gen_powerlaw_noise(1.0, 1000, 6) == x);
  CHECK(gen_powerlaw_noise(0.5, 777, 1).size() == 777);
  CHECK_THROWS_AS(gen_powerlaw_noise(-0.1, 100, 1), ParameterError);
  CHECK_THROWS_AS(gen_powerlaw_noise(3.5, 100, 1), ParameterError);
  CHECK_THROWS_AS(gen_powerlaw_noise(1.0, 1, 1), ParameterError);
}

TEST_CASE("power-law noise exponents") {
  for (double beta : {0.0, 1.0, 2.0}) {
    double sum = 0.0;
    for (int seed = 0; seed < 8; ++seed) {
      auto x = gen_powerlaw_noise(beta, 8192, 100 + seed);
      auto r = dfa_fluctuation(x, dfa_scales(x.size()));
      sum += fit_alpha(r, 4, 2048).alpha;
    }
    CAPTURE(beta);
    CHECK(std::abs(sum / 8 - (beta + 1) / 2) <= 0.1);
  }
}

TEST_CASE("crossover series") {
  auto pattern = default_crossover_pattern();
  CHECK(pattern.size() == 24);

  auto pure = gen_crossover_series(4096, pattern, 1.4, 0.0, 1);
  auto r = dfa_fluctuation(pure, dfa_scales(pure.size()));
  CHECK(std::abs(fit_alpha(r, 24, 1024).alpha) < 0.2);  // bounded integrated deviations

  // Noise only: no crossover, local exponent flat within 0.15 of its mean (seed average).
  std::vector<double> acc;
  for (int seed = 0; seed < 20; ++seed) {
    auto x = gen_crossover_series(4096, pattern, 1.0, 1.0, 200 + seed);
    auto la = local_alpha(dfa_fluctuation(x, dfa_scales(x.size(), 4, 400)));
    acc.resize(la.size(), 0.0);
    for (std::size_t i = 0; i < la.size(); ++i) acc[i] += la[i].alpha / 20;
  }
  double mean = std::accumulate(acc.begin(), acc.end(), 0.0) / acc.size();
  for (double a : acc) CHECK(std::abs(a - mean) <= 0.15);

  CHECK_THROWS_AS(gen_crossover_series(4096, {1.0}, 1.0, 0.5, 1), ParameterError);
  CHECK_THROWS_AS(gen_crossover_series(4096, {1.0, 1.0}, 1.0, 0.5, 1), ParameterError);
  CHECK_THROWS_AS(gen_crossover_series(4096, pattern, 1.0, 1.5, 1), ParameterError);
  CHECK_THROWS_AS(gen_crossover_series(50, pattern, 1.0, 0.5, 1), LengthError);
  CHECK(gen_crossover_series(4096, pattern, 1.4, 0.5, 9) == gen_crossover_series(4096, pattern, 1.4, 0.5, 9));
}

TEST_CASE("render clicks") {
  auto empty = render_clicks({});
  CHECK(empty.samples.size() == 44100);
  CHECK(std::all_of(empty.samples.begin(), empty.samples.end(), [](double v) { return v == 0.0; }));

  OnsetSeries one(1);
  one[0].time_s = 0.5;
  one[0].amplitude = 0.8;
  auto clip = render_clicks(one);
  auto found = detect_audio_onsets(clip);
  REQUIRE(found.size() == 1);
  CHECK(std::abs(found[0].time_s - 0.5) <= 0.002);

  RenderOptions noisy;
  noisy.noise_db = -30.0;
  CHECK(render_clicks(one, noisy, 3).samples == render_clicks(one, noisy, 3).samples);
  CHECK_FALSE(render_clicks(one, noisy, 3).samples == render_clicks(one, noisy, 4).samples);
  RenderOptions low;
  low.sample_rate = 4000;
  CHECK_THROWS_AS(render_clicks(one, low), ParameterError);
}

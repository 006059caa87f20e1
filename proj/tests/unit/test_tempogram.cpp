#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "groove/error.h"
#include "groove/synth.h"
#include "groove/tempogram.h"
#include "helpers.h"

using namespace groove;

namespace {

AudioClip click_train(double bpm, double seconds, double start = 0.5) {
  OnsetSeries onsets;
  for (double t = start; t < seconds - 0.2; t += 60.0 / bpm) {
    Onset o;
    o.time_s = t;
    o.amplitude = 1.0;
    onsets.push_back(o);
  }
  RenderOptions ro;
  ro.min_duration_s = seconds;
  ro.tail_s = 0.0;
  return render_clicks(onsets, ro);
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST_CASE("silence gives zero novelty and zero tempogram") {
  AudioClip clip;
  clip.sample_rate = 44100;
  clip.samples.assign(44100 * 14, 0.0);
  auto nov = novelty_curve(clip);
  CHECK(nov.rate_hz == doctest::Approx(44100.0 / 512));
  CHECK(std::all_of(nov.values.begin(), nov.values.end(), [](double v) { return v == 0.0; }));
  auto tg = fourier_tempogram(nov);
  for (const auto& row : tg.magnitude) {
    CHECK(std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; }));
  }
}

TEST_CASE("isolated click gives one dominant novelty peak within a hop") {
  OnsetSeries one(1);
  one[0].time_s = 1.0;
  one[0].amplitude = 1.0;
  RenderOptions ro;
  ro.min_duration_s = 2.0;
  auto nov = novelty_curve(render_clicks(one, ro));
  std::size_t k = argmax(nov.values);
  CHECK(std::abs(k / nov.rate_hz - 1.0) <= 1.0 / nov.rate_hz);
  auto sorted = nov.values;
  std::sort(sorted.rbegin(), sorted.rend());
  CHECK(sorted[0] > 1.5 * sorted[1]);
}

TEST_CASE("novelty of periodic clicks repeats at the beat period") {
  auto nov = novelty_curve(click_train(84.0, 20.0));
  const auto& v = nov.values;
  const double period = 60.0 / 84.0 * nov.rate_hz;  // about 61.5 frames
  std::vector<double> ac(200, 0.0);
  for (std::size_t lag = 20; lag < ac.size(); ++lag) {
    for (std::size_t i = 0; i + lag < v.size(); ++i) ac[lag] += v[i] * v[i + lag];
  }
  std::size_t best = argmax(ac);
  double ratio = best / period;
  CHECK(std::abs(ratio - std::round(ratio)) * period <= 1.0);
  CHECK(std::round(ratio) >= 1.0);
}

TEST_CASE("tempogram axes and 84 BPM tracking") {
  auto nov = novelty_curve(click_train(84.0, 30.0));
  auto tg = fourier_tempogram(nov);
  REQUIRE_FALSE(tg.tempi_bpm.empty());
  CHECK(tg.tempi_bpm.front() >= 30.0);
  CHECK(tg.tempi_bpm.back() <= 360.0);
  CHECK(tg.magnitude.size() == tg.times_s.size());
  for (const auto& row : tg.magnitude) CHECK(row.size() == tg.tempi_bpm.size());
  const double bin = tg.tempi_bpm[1] - tg.tempi_bpm[0];
  CHECK(bin == doctest::Approx(44100.0 / 512 / 4096 * 60));

  for (double bpm : argmax_track(tg)) CHECK(std::abs(bpm - 84.0) <= bin);

  // Both 84 and its octave carry energy; the weighting selects 84.
  const auto& mid = tg.magnitude[tg.magnitude.size() / 2];
  auto near = [&](double bpm) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < tg.tempi_bpm.size(); ++i) {
      if (std::abs(tg.tempi_bpm[i] - bpm) < std::abs(tg.tempi_bpm[j] - bpm)) j = i;
    }
    double m = 0.0;
    for (std::size_t i = (j > 1 ? j - 1 : 0); i <= std::min(j + 1, mid.size() - 1); ++i) m = std::max(m, mid[i]);
    return m;
  };
  const double m84 = near(84.0), m168 = near(168.0), m120 = near(120.0);
  CHECK(m84 > 5 * m120);
  CHECK(m168 > 5 * m120);
  auto w = tempo_weights(tg);
  CHECK(*std::max_element(w.begin(), w.end()) <= 1.0);
}

TEST_CASE("tempogram columns shift with the audio") {
  AudioClip clip = click_train(90.0, 16.0);
  AudioClip shifted = clip;
  const std::size_t k = 2, samples = k * 64 * 512;
  shifted.samples.insert(shifted.samples.begin(), samples, 0.0);
  auto a = fourier_tempogram(novelty_curve(clip));
  auto b = fourier_tempogram(novelty_curve(shifted));
  REQUIRE(b.magnitude.size() >= a.magnitude.size() + k);
  for (std::size_t m = 0; m < a.magnitude.size(); ++m) {
    for (std::size_t j = 0; j < a.tempi_bpm.size(); ++j) {
      CHECK(std::abs(b.magnitude[m + k][j] - a.magnitude[m][j]) < 1e-9 * (1.0 + a.magnitude[m][j]));
    }
  }
}

TEST_CASE("tempogram errors and cyclic folding") {
  auto nov = novelty_curve(click_train(84.0, 5.0));
  CHECK_THROWS_AS(fourier_tempogram(nov), LengthError);
  TempogramParams bad;
  bad.min_bpm = 200;
  bad.max_bpm = 100;
  CHECK_THROWS_AS(fourier_tempogram(nov, bad), ParameterError);

  auto tg = fourier_tempogram(novelty_curve(click_train(84.0, 16.0)));
  auto cyc = cyclic_tempogram(tg);
  CHECK(cyc.class_offsets.size() == 60);
  for (std::size_t m = 0; m < tg.magnitude.size(); ++m) {
    double a = std::accumulate(tg.magnitude[m].begin(), tg.magnitude[m].end(), 0.0);
    double b = std::accumulate(cyc.magnitude[m].begin(), cyc.magnitude[m].end(), 0.0);
    CHECK(a == doctest::Approx(b));
  }
  // 84 and 168 BPM fold onto class 0.
  const auto& row = cyc.magnitude[cyc.magnitude.size() / 2];
  std::size_t best = argmax(row);
  CHECK((best <= 1 || best >= 59));
}

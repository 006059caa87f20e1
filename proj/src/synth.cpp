#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "fft.h"
#include "groove/dfa.h"
#include "groove/error.h"
#include "groove/synth.h"

namespace groove {
namespace {

constexpr double kPulsesPerBeat = 6.0;
constexpr int kPulsesPerBar = 12;
constexpr int kGroupsPerBar = 4;

std::mt19937_64 engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

void standardize(std::vector<double>& x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double ss = 0.0;
  for (double& v : x) {
    v -= mean;
    ss += v * v;
  }
  const double sd = std::sqrt(ss / x.size());
  if (sd > 0) {
    for (double& v : x) v /= sd;
  }
}

}  // namespace

TempoMap::TempoMap(double constant_bpm) : TempoMap(std::vector<TempoKnot>{{0.0, constant_bpm}}) {}

TempoMap::TempoMap(std::vector<TempoKnot> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw ParameterError("tempo map needs at least one knot");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!(knots_[i].bpm > 0)) throw ParameterError("tempo must be positive");
    if (i > 0 && !(knots_[i].time_s > knots_[i - 1].time_s)) {
      throw ParameterError("tempo knots must have increasing times");
    }
  }
  knot_pulses_.resize(knots_.size());
  knot_pulses_[0] = knots_[0].time_s * knots_[0].bpm * kPulsesPerBeat / 60.0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    double dt = knots_[i].time_s - knots_[i - 1].time_s;
    knot_pulses_[i] = knot_pulses_[i - 1] + dt * 0.5 * (knots_[i].bpm + knots_[i - 1].bpm) * kPulsesPerBeat / 60.0;
  }
}

double TempoMap::bpm_at(double t) const {
  if (t <= knots_.front().time_s) return knots_.front().bpm;
  if (t >= knots_.back().time_s) return knots_.back().bpm;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                             [](double x, const TempoKnot& k) { return x < k.time_s; });
  const TempoKnot& b = *it;
  const TempoKnot& a = *std::prev(it);
  return a.bpm + (b.bpm - a.bpm) * (t - a.time_s) / (b.time_s - a.time_s);
}

double TempoMap::pulses_at(double t) const {
  const double rate = kPulsesPerBeat / 60.0;
  if (t <= knots_.front().time_s) return t * knots_.front().bpm * rate;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                             [](double x, const TempoKnot& k) { return x < k.time_s; });
  std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  double dt = t - knots_[i].time_s;
  return knot_pulses_[i] + dt * 0.5 * (knots_[i].bpm + bpm_at(t)) * rate;
}

double TempoMap::time_at_pulse(double pulses) const {
  const double rate = kPulsesPerBeat / 60.0;
  if (pulses <= knot_pulses_.front()) return pulses / (knots_.front().bpm * rate);
  auto it = std::upper_bound(knot_pulses_.begin(), knot_pulses_.end(), pulses);
  std::size_t i = static_cast<std::size_t>(it - knot_pulses_.begin()) - 1;
  const double b0 = knots_[i].bpm * rate;
  const double slope = i + 1 < knots_.size()
                           ? (knots_[i + 1].bpm - knots_[i].bpm) * rate / (knots_[i + 1].time_s - knots_[i].time_s)
                           : 0.0;
  const double dp = pulses - knot_pulses_[i];
  // Root of slope/2 dt^2 + b0 dt - dp = 0 in a form that is stable for slope -> 0.
  const double dt = 2.0 * dp / (b0 + std::sqrt(b0 * b0 + 2.0 * slope * dp));
  return knots_[i].time_s + dt;
}

void GrooveSpec::validate() const {
  if (!(bpm > 0)) throw ParameterError("bpm must be positive");
  if (!(swing_ratio > 0)) throw ParameterError("swing ratio must be positive");
  if (bars < 1) throw ParameterError("bars must be at least 1");
  if (!(jitter_sigma_ms >= 0)) throw ParameterError("jitter sigma must be non-negative");
  if (!(lrc_sigma_ms >= 0)) throw ParameterError("lrc sigma must be non-negative");
  if (!(lrc_beta >= 0 && lrc_beta <= 3)) throw ParameterError("lrc beta must lie in [0, 3]");
  if (!(amplitude_noise >= 0)) throw ParameterError("amplitude noise must be non-negative");
  if (!(ghost_probability >= 0 && ghost_probability <= 1)) throw ParameterError("ghost probability must lie in [0, 1]");
  for (double a : amplitude_pattern) {
    if (!(a >= 0 && a <= 1)) throw ParameterError("amplitude pattern values must lie in [0, 1]");
  }
}

std::vector<double> default_amplitude_pattern() {
  return {1.0, 0.3, 0.6, 0.3, 0.9, 0.3, 0.6, 0.3, 0.85, 0.3, 0.6, 0.3, 0.9, 0.3, 0.6, 0.35};
}

GeneratedGroove gen_shuffle_onsets(const GrooveSpec& spec, std::uint64_t seed) {
  spec.validate();
  const TempoMap tempo = spec.drift_profile.empty() ? TempoMap(spec.bpm) : TempoMap(spec.drift_profile);
  const auto pattern = spec.amplitude_pattern.empty() ? default_amplitude_pattern() : spec.amplitude_pattern;
  const double last_note = 3.0 * spec.swing_ratio / (1.0 + spec.swing_ratio);

  auto ghost_rng = engine(seed, 1);
  auto jitter_rng = engine(seed, 2);
  auto amp_rng = engine(seed, 3);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  struct Note {
    double pulse;
    bool ghost;
    std::size_t position;
  };
  std::vector<Note> notes;
  std::size_t position = 0;
  for (int bar = 0; bar < spec.bars; ++bar) {
    for (int g = 0; g < kGroupsPerBar; ++g) {
      double group = bar * kPulsesPerBar + 3.0 * g;
      notes.push_back({group, false, position++});
      if (spec.ghost_probability > 0 && coin(ghost_rng) < spec.ghost_probability) {
        notes.push_back({group + 0.5 * last_note, true, 0});
      }
      notes.push_back({group + last_note, false, position++});
    }
  }

  // Correlated component lives on hi-hat to hi-hat intervals.
  const std::size_t hihats = static_cast<std::size_t>(spec.bars) * 2 * kGroupsPerBar;
  std::vector<double> drift(hihats, 0.0);
  if (spec.lrc_sigma_ms > 0 && hihats > 2) {
    auto noise = gen_powerlaw_noise(spec.lrc_beta, hihats - 1, seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = 1; i < hihats; ++i) drift[i] = drift[i - 1] + noise[i - 1] * spec.lrc_sigma_ms * 1e-3;
  }

  GeneratedGroove out;
  std::size_t hihat_index = 0;
  for (const Note& note : notes) {
    const double nominal = spec.start_s + tempo.time_at_pulse(note.pulse);
    // Ghosts inherit the correlated offset of the hi-hat that precedes them.
    const double offset = drift[note.ghost ? hihat_index - 1 : hihat_index];
    double t = nominal + offset + spec.jitter_sigma_ms * 1e-3 * normal(jitter_rng);
    if (!out.onsets.empty()) t = std::max(t, out.onsets.back().time_s + 1e-3);

    Onset o;
    o.time_s = t;
    o.source = OnsetSource::kAuto;
    if (note.ghost) {
      o.label = OnsetLabel::kGhost;
      o.amplitude = spec.ghost_amplitude;
    } else {
      o.label = OnsetLabel::kHihat;
      double base = pattern[note.position % pattern.size()];
      o.amplitude = base * (1.0 + spec.amplitude_noise * normal(amp_rng));
      ++hihat_index;
    }
    o.amplitude = std::clamp(o.amplitude, 0.01, 1.0);
    out.onsets.push_back(o);
    out.nominal_times.push_back(nominal);
    out.nominal_pulses.push_back(note.pulse);
  }
  return out;
}

std::vector<double> gen_powerlaw_noise(double beta, std::size_t n, std::uint64_t seed) {
  if (!(beta >= 0 && beta <= 3)) throw ParameterError("beta must lie in [0, 3]");
  if (n < 2) throw ParameterError("noise length must be at least 2");
  const std::size_t m = 2 * n;
  detail::RealFft fft(m);
  auto rng = engine(seed, 0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  std::vector<std::complex<double>> spec(fft.bins());
  spec[0] = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    double f = static_cast<double>(k) / m;
    double mag = std::pow(f, -beta / 2.0);
    spec[k] = std::polar(mag, phase(rng));
  }
  spec.back() = spec.back().real();  // Nyquist bin is real for even m

  std::vector<double> x;
  fft.inverse(spec, x);
  x.resize(n);
  standardize(x);
  return x;
}

std::vector<double> default_crossover_pattern() {
  std::vector<double> p(24);
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = k % 2 == 0 ? 1.0 : -1.0;
  p[10] += 0.3;
  p[22] += 0.3;
  return p;
}

std::vector<double> gen_crossover_series(std::size_t n, const std::vector<double>& phrase_pattern, double lrc_beta,
                                         double mix, std::uint64_t seed) {
  if (phrase_pattern.size() < 2) throw ParameterError("phrase pattern needs at least 2 steps");
  if (!(mix >= 0 && mix <= 1)) throw ParameterError("mix must lie in [0, 1]");

  std::vector<double> pattern = phrase_pattern;
  standardize(pattern);
  if (std::all_of(pattern.begin(), pattern.end(), [](double v) { return v == 0.0; })) {
    throw ParameterError("phrase pattern must not be constant");
  }
  const int period = std::max(4, static_cast<int>(pattern.size()));
  if (n < 4 * static_cast<std::size_t>(period)) {
    throw LengthError("crossover series needs at least " + std::to_string(4 * period) + " samples");
  }

  std::vector<double> tiled(n);
  for (std::size_t i = 0; i < n; ++i) tiled[i] = pattern[i % pattern.size()];
  std::vector<double> noise = gen_powerlaw_noise(lrc_beta, n, seed);

  const int scale[] = {period};
  const double f_pattern = dfa_fluctuation(tiled, scale).F[0];
  const double f_noise = dfa_fluctuation(noise, scale).F[0];
  const double gain = f_noise > 0 && f_pattern > 0 ? f_pattern / f_noise : 1.0;

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (1.0 - mix) * tiled[i] + mix * gain * noise[i];
  return x;
}

AudioClip render_clicks(const OnsetSeries& onsets, const RenderOptions& options, std::uint64_t seed) {
  if (!(options.sample_rate >= 8000)) throw ParameterError("render sample rate must be at least 8 kHz");
  if (!(options.click_ms > 0)) throw ParameterError("click length must be positive");

  AudioClip clip;
  clip.sample_rate = options.sample_rate;
  double duration = options.min_duration_s;
  double loudest = 0.0;
  for (const auto& o : onsets) {
    duration = std::max(duration, o.time_s + options.tail_s);
    loudest = std::max(loudest, o.amplitude);
  }
  clip.samples.assign(static_cast<std::size_t>(std::ceil(duration * options.sample_rate)), 0.0);

  const double freq = std::min(options.click_hz, 0.4 * options.sample_rate);
  const long length = static_cast<long>(std::lround(options.click_ms * 1e-3 * options.sample_rate)) | 1L;
  const long half = length / 2;
  std::vector<double> burst(static_cast<std::size_t>(length));
  for (long j = 0; j < length; ++j) {
    double window = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * j / (length - 1));
    burst[j] = window * std::sin(2.0 * std::numbers::pi * freq * (j - half) / options.sample_rate);
  }

  const long total = static_cast<long>(clip.samples.size());
  for (const auto& o : onsets) {
    const long centre = std::lround(o.time_s * options.sample_rate);
    for (long j = 0; j < length; ++j) {
      long idx = centre - half + j;
      if (idx >= 0 && idx < total) clip.samples[idx] += o.amplitude * burst[j];
    }
  }

  if (options.noise_db) {
    auto rng = engine(seed, 7);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sigma = std::pow(10.0, *options.noise_db / 20.0) * (loudest > 0 ? loudest : 1.0);
    for (double& s : clip.samples) s += sigma * normal(rng);
  }
  return clip;
}

}  // namespace groove

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "groove/audio.h"
#include "groove/onsets.h"

namespace groove {

struct TempoKnot {
  double time_s = 0.0;  // relative to the first onset
  double bpm = 84.0;
};

/// Piecewise-linear tempo in time. Constant before the first and after the last knot.
class TempoMap {
 public:
  explicit TempoMap(double constant_bpm);
  explicit TempoMap(std::vector<TempoKnot> knots);

  double bpm_at(double t) const;
  /// Elapsed triplet pulses (6 per beat) after `t` seconds.
  double pulses_at(double t) const;
  /// Inverse of pulses_at.
  double time_at_pulse(double pulses) const;

 private:
  std::vector<TempoKnot> knots_;
  std::vector<double> knot_pulses_;
};

struct GrooveSpec {
  double bpm = 84.0;
  double swing_ratio = 2.0;  // double / single within each triplet group
  int bars = 60;
  double jitter_sigma_ms = 0.0;  // white noise on onset times
  double lrc_beta = 0.0;         // spectral exponent of the correlated interval noise
  double lrc_sigma_ms = 0.0;     // std of the correlated interval noise
  std::vector<double> amplitude_pattern;  // per phrase position; empty = default shuffle dynamics
  double amplitude_noise = 0.0;           // relative std of multiplicative amplitude noise
  std::vector<TempoKnot> drift_profile;   // empty = constant bpm
  double ghost_probability = 0.0;         // chance of a snare ghost note inside each triplet
  double ghost_amplitude = 0.15;
  double start_s = 0.5;

  /// Throws ParameterError on invalid values.
  void validate() const;
};

/// Default two-bar dynamics: accented bass/snare positions, first triplet notes
/// roughly twice as loud as last ones.
std::vector<double> default_amplitude_pattern();

struct GeneratedGroove {
  OnsetSeries onsets;                 // noisy
  std::vector<double> nominal_times;  // exact grid time of each onset
  std::vector<double> nominal_pulses; // grid position of each onset in triplet pulses
};

/// Half-time shuffle with hi-hats on triplet notes 1 and 3: eight per bar at
/// 12 pulses per bar. Timing noise is white jitter on onset times plus
/// power-law noise on intervals (cumulated into the times).
GeneratedGroove gen_shuffle_onsets(const GrooveSpec& spec, std::uint64_t seed);

/// Spectral synthesis of 1/f^beta noise: random phases, magnitude f^(-beta/2),
/// synthesized at length 2n and truncated to n, normalized to zero mean and unit variance.
std::vector<double> gen_powerlaw_noise(double beta, std::size_t n, std::uint64_t seed);

/// Repeating pattern (normalized to zero mean, unit variance) mixed with
/// power-law noise rescaled to match the pattern's DFA fluctuation at the
/// pattern period: x = (1 - mix) * pattern + mix * noise.
std::vector<double> gen_crossover_series(std::size_t n, const std::vector<double>& phrase_pattern,
                                         double lrc_beta, double mix, std::uint64_t seed);

/// Default phrase pattern for crossover series: a 24-step zig-zag with two
/// lengthened steps.
std::vector<double> default_crossover_pattern();

struct RenderOptions {
  double sample_rate = 44100.0;
  double click_ms = 8.0;
  double click_hz = 5000.0;            // limited to 0.4 * sample_rate
  std::optional<double> noise_db;      // broadband noise RMS relative to the loudest click peak
  double tail_s = 0.5;
  double min_duration_s = 1.0;
};

/// Hann-windowed tone burst per onset, centered on the onset time and scaled
/// by its amplitude; overlapping bursts are summed.
AudioClip render_clicks(const OnsetSeries& onsets, const RenderOptions& options = {}, std::uint64_t seed = 0);

}  // namespace groove

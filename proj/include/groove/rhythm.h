#pragma once

#include <optional>
#include <string>
#include <vector>

#include "groove/metric.h"
#include "groove/onsets.h"

namespace groove {

// --- Tempo drift ------------------------------------------------------------

enum class DriftMode {
  /// Each valid interval advances the metronome by its class multiple; d is
  /// the performed time minus the metronome time, in seconds.
  kElapsed,
  /// Each valid interval contributes tau / multiple - <tau> (one pulse per interval).
  kNormalized,
};

struct DriftPoint {
  std::size_t index = 0;  // 1-based interval count
  double time_s = 0.0;    // time of the onset closing the interval
  double d_s = 0.0;
  bool gap = false;
};

struct DriftSeries {
  std::vector<DriftPoint> points;
  double base_s = 0.0;
  DriftMode mode = DriftMode::kElapsed;

  double max_abs_s() const;
  double final_s() const;
  std::size_t gap_count() const;
};

/// Cumulative deviation from an imaginary metronome with pulse `base`. A
/// discarded interval emits a gap point with d = 0 and restarts accumulation.
/// Throws ParameterError for an unclassified series or base <= 0.
DriftSeries compute_drift(const IntervalSeries& series, double base, DriftMode mode = DriftMode::kElapsed);

// --- Swing ------------------------------------------------------------------

struct SwingReport {
  double swing_ratio = 0.0;
  double mean_inter_triplet_single_s = 0.0;
  double mean_double_s = 0.0;
  std::optional<double> mean_triple_s;
  double double_to_single = 0.0;
  std::optional<double> triple_to_single;
  std::size_t n_singles_used = 0;
  std::size_t n_doubles_used = 0;
  std::size_t n_intra_triplet_excluded = 0;
};

/// Mean double over mean inter-triplet single. Singles touching a ghost-labeled
/// onset are intra-triplet splits and are excluded. Throws UndefinedRatioError
/// when either class is empty.
SwingReport swing_ratio(const IntervalSeries& series, const OnsetSeries& onsets);

// --- Two-bar phrase profiles -----------------------------------------------

/// Hi-hat positions within a phrase, in triplet-pulse units from the phrase start.
struct PhraseTemplate {
  int phrase_units = 24;
  std::vector<int> position_units;

  std::size_t size() const { return position_units.size(); }

  /// Two-bar half-time shuffle: triplet notes 1 and 3 of each beat group, 16 positions.
  static PhraseTemplate shuffle(int positions = 16);
};

struct GridPosition {
  std::size_t onset_index = 0;
  long phrase = 0;
  int position = -1;  // index into the template, -1 when off-template
  long unit = 0;      // pulse count from the segment start
  int segment = 0;
};

/// Grid positions of the non-ghost onsets. Each segment (a section, or the
/// whole series when no sections are given) starts at its first onset, which
/// becomes position 0; later onsets advance by round(gap / base) pulses.
struct PhraseAlignment {
  std::vector<GridPosition> positions;
  PhraseTemplate phrase_template;
};

/// Sections tagged A2-prechorus are skipped unless `include_prechorus`.
PhraseAlignment align_phrases(const OnsetSeries& onsets, double base, const PhraseTemplate& phrase_template,
                              const SectionMap& sections = {}, bool include_prechorus = false);

enum class ProfileKind { kInterval, kAmplitude };

struct PositionStats {
  int position = 0;
  int multiple = 0;  // interval profiles: pulses to the next position
  std::optional<double> mean;
  std::optional<double> stddev;
  std::size_t n = 0;
  std::optional<double> deviation_pct;  // interval profiles only
};

struct PhraseProfile {
  ProfileKind kind = ProfileKind::kInterval;
  std::size_t template_length = 0;
  std::vector<PositionStats> positions;
  std::size_t complete_phrases = 0;
  std::optional<double> phrase_base_s;  // mean pulse over complete phrases
};

/// Per-position interval statistics over phrases with every template onset
/// present (and the next phrase's first onset, closing the last interval).
PhraseProfile phrase_interval_profile(const OnsetSeries& onsets, const PhraseAlignment& alignment);

/// Per-position amplitude statistics over every aligned onset; incomplete phrases count.
PhraseProfile phrase_amplitude_profile(const OnsetSeries& onsets, const PhraseAlignment& alignment);

}  // namespace groove

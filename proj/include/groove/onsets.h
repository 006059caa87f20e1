#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "groove/audio.h"

namespace groove {

enum class OnsetLabel { kHihat, kSnare, kGhost, kUnknown };
enum class OnsetSource { kAuto, kManualAdd, kManualMove };

std::string_view to_string(OnsetLabel label);
std::string_view to_string(OnsetSource source);
OnsetLabel parse_label(std::string_view text);
OnsetSource parse_source(std::string_view text);

struct Onset {
  double time_s = 0.0;
  double amplitude = 0.0;  // normalized envelope units, [0, 1]
  OnsetLabel label = OnsetLabel::kUnknown;
  OnsetSource source = OnsetSource::kAuto;
  double uncertainty_ms = 0.0;

  friend bool operator==(const Onset&, const Onset&) = default;
};

/// Onset list ordered by strictly increasing time.
using OnsetSeries = std::vector<Onset>;

std::vector<double> onset_times(const OnsetSeries& series);
std::vector<double> onset_amplitudes(const OnsetSeries& series);

struct DetectionParams {
  double threshold = 0.1;         // fraction of envelope peak
  double refractory_ms = 50.0;
  double max_uncertainty_ms = 5.0;
};

/// Peak picking on a normalized envelope. Every local maximum at or above
/// `threshold * peak` is a candidate; candidates are accepted in order of
/// decreasing height unless an accepted peak lies closer than the refractory
/// period. Uncertainty is half the width of the region around the peak that
/// stays at or above 90% of its height; peaks wider than `max_uncertainty_ms`
/// are dropped. A silent envelope yields an empty series.
OnsetSeries detect_onsets(const EnvelopeSignal& env, const DetectionParams& params = {});

/// Collapses every run of onsets whose consecutive gaps are below `window_ms`
/// into its first member, keeping the run's maximum amplitude.
OnsetSeries merge_close_onsets(const OnsetSeries& series, double window_ms = 3.0);

enum class EditKind { kAdd, kRemove, kMove, kRelabel };

std::string_view to_string(EditKind kind);

struct AnnotationEdit {
  EditKind kind = EditKind::kAdd;
  double target_time_s = 0.0;
  std::optional<double> new_time_s;  // move only
  std::optional<OnsetLabel> label;

  friend bool operator==(const AnnotationEdit&, const AnnotationEdit&) = default;
};

/// Tolerance used when an edit refers to an existing onset.
inline constexpr double kEditMatchWindowS = 0.005;

/// Applies edits in order and re-sorts. Added onsets read their amplitude
/// from `env` when given, else amplitude 0. Throws EditError naming the edit
/// index when a target cannot be resolved or the result has duplicate times.
OnsetSeries apply_edits(const OnsetSeries& series, const std::vector<AnnotationEdit>& edits,
                        const EnvelopeSignal* env = nullptr);

// Annotation CSV: index,time_s,amplitude,label,source
std::string format_annotations(const OnsetSeries& series);
OnsetSeries parse_annotations(std::string_view text);
OnsetSeries read_annotations(const std::filesystem::path& path);
void write_annotations(const std::filesystem::path& path, const OnsetSeries& series);

// Edits CSV: kind,target_time_s,new_time_s,label
std::string format_edits(const std::vector<AnnotationEdit>& edits);
std::vector<AnnotationEdit> parse_edits(std::string_view text);
std::vector<AnnotationEdit> read_edits(const std::filesystem::path& path);

}  // namespace groove

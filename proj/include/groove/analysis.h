#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "groove/audio.h"
#include "groove/dfa.h"
#include "groove/metric.h"
#include "groove/onsets.h"
#include "groove/rhythm.h"

namespace groove {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr std::size_t kMinAnalysisOnsets = 8;

struct DetectionOptions {
  double cutoff_hz = 1000.0;
  double smoothing_ms = 2.0;
  DetectionParams peaks;
  double merge_ms = 3.0;
};

/// High-pass, envelope, peak picking and double-hit merge.
OnsetSeries detect_audio_onsets(const AudioClip& clip, const DetectionOptions& options = {});

struct AnalysisOptions {
  BaseUnitOptions base;
  double histogram_bin_s = 0.002;
  DriftMode drift_mode = DriftMode::kElapsed;
  SectionMap sections;
  bool include_prechorus = false;
  int phrase_len = 16;
  DfaRanges dfa;
  DfaOptions dfa_options;
  bool dfa_raw_intervals = false;  // all-interval DFA on tau instead of tau / multiple
};

struct NamedDfa {
  std::string name;
  std::size_t length = 0;
  std::optional<DfaSummary> summary;  // empty when the series is too short
};

struct AnalysisResult {
  OnsetSeries onsets;
  IntervalSeries intervals;
  double base_s = 0.0;
  IntervalStats stats;
  std::optional<SwingReport> swing;
  std::optional<std::string> swing_error;
  DriftSeries drift;
  PhraseAlignment alignment;
  PhraseProfile interval_profile;
  PhraseProfile amplitude_profile;
  std::vector<NamedDfa> dfa;  // intervals_all, singles, doubles, triples, amplitudes
};

/// Series fed to each DFA, in the order of AnalysisResult::dfa.
std::vector<std::pair<std::string, std::vector<double>>> dfa_series(const AnalysisResult& result,
                                                                    bool raw_intervals);

/// classify -> stats -> swing -> drift -> phrase -> DFA. Throws EmptyInputError
/// below kMinAnalysisOnsets onsets.
AnalysisResult analyze_onsets(const OnsetSeries& onsets, const AnalysisOptions& options = {});

struct InputDescriptor {
  std::string path;
  std::string kind;  // "audio" or "annotations"
};

nlohmann::ordered_json report_json(const AnalysisResult& result, const AnalysisOptions& options,
                                   const InputDescriptor& input, const nlohmann::ordered_json& extra_parameters = {});

/// Writes report.json and the CSV sidecars into `out_dir` (created if needed).
/// Returns the written file names.
std::vector<std::string> write_analysis(const std::filesystem::path& out_dir, const AnalysisResult& result,
                                        nlohmann::ordered_json report);

// Sidecar formats.
std::string format_intervals_csv(const IntervalSeries& series);
std::string format_drift_csv(const DriftSeries& drift);
std::string format_profile_csv(const PhraseProfile& profile);
std::string format_histogram_csv(const ClassStats& stats, double bin_width_s);
std::string format_dfa_csv(const DfaSummary& summary);
nlohmann::ordered_json dfa_summary_json(const DfaSummary& summary, const DfaRanges& ranges);

}  // namespace groove

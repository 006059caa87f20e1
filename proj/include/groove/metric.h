#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "groove/onsets.h"

namespace groove {

/// Interval class in units of the eighth-note-triplet pulse.
enum class BeatClass { kUnclassified, kSingle, kDouble, kTriple, kDiscarded };

std::string_view to_string(BeatClass klass);

/// Grid multiple of a valid class (1, 2, 3); 0 for unclassified or discarded.
int multiple(BeatClass klass);

struct Interval {
  double tau_s = 0.0;
  std::size_t start_index = 0;  // index of the onset that opens the interval
  double start_time_s = 0.0;
  BeatClass klass = BeatClass::kUnclassified;
  double normalized_tau_s = 0.0;
  bool valid = false;
};

using IntervalSeries = std::vector<Interval>;

/// tau(i) = f(i+1) - f(i), unclassified. Throws EmptyInputError for fewer than two onsets.
IntervalSeries intervals(const OnsetSeries& onsets);

struct BaseUnitOptions {
  std::optional<double> hint_bpm;
  double max_multiple = 3.5;
  double tolerance_s = 1e-4;
  int max_iterations = 50;
};

/// Fixed-point estimate of the triplet pulse <tau>. Starting from the hint
/// (60 / (6 bpm)) or the shortest interval cluster, each interval is rounded
/// to a multiple in {1, 2, 3} and <tau> is re-estimated as the mean of
/// tau / multiple over intervals not beyond `max_multiple`. Iterates until the
/// assignment is stable and the change is below `tolerance_s`.
/// Throws EstimationError after `max_iterations`.
double estimate_base_unit(const IntervalSeries& series, const BaseUnitOptions& options = {});

/// Band rule on r = tau / base: r < 1.5 single, [1.5, 2.5) double,
/// [2.5, max_multiple] triple, beyond that discarded.
IntervalSeries classify_intervals(const IntervalSeries& series, double base, double max_multiple = 3.5);

/// Valid intervals over all intervals; 0 for an empty series.
double detection_rate(const IntervalSeries& series);

struct HistogramBin {
  double lower_s;
  std::size_t count;
};

struct ClassStats {
  std::size_t count = 0;
  std::optional<double> mean_s;
  std::optional<double> std_s;  // sample standard deviation (n - 1); 0 for a single value
  std::vector<HistogramBin> histogram;
};

struct IntervalStats {
  ClassStats single, dbl, triple;
  double bin_width_s = 0.002;

  const ClassStats& of(BeatClass klass) const;
};

IntervalStats interval_stats(const IntervalSeries& series, double bin_width_s = 0.002);

enum class SectionTag { kVerse, kPrechorus, kChorus, kOther };

std::string_view to_string(SectionTag tag);
SectionTag parse_section_tag(std::string_view text);

struct Section {
  double start_s = 0.0;
  double end_s = 0.0;
  SectionTag tag = SectionTag::kOther;
};

/// Ordered, non-overlapping sections.
using SectionMap = std::vector<Section>;

/// Parses `start_s,end_s,tag`; throws FormatError for overlapping or unordered sections.
SectionMap parse_sections(std::string_view text);
SectionMap read_sections(const std::filesystem::path& path);

}  // namespace groove

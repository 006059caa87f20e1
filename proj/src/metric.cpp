#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "groove/error.h"
#include "groove/io.h"
#include "groove/metric.h"

namespace groove {

std::string_view to_string(BeatClass klass) {
  switch (klass) {
    case BeatClass::kUnclassified: return "unclassified";
    case BeatClass::kSingle: return "single";
    case BeatClass::kDouble: return "double";
    case BeatClass::kTriple: return "triple";
    case BeatClass::kDiscarded: return "discarded";
  }
  return "unclassified";
}

int multiple(BeatClass klass) {
  switch (klass) {
    case BeatClass::kSingle: return 1;
    case BeatClass::kDouble: return 2;
    case BeatClass::kTriple: return 3;
    default: return 0;
  }
}

IntervalSeries intervals(const OnsetSeries& onsets) {
  if (onsets.size() < 2) throw EmptyInputError("at least two onsets are needed to form intervals");
  IntervalSeries out;
  out.reserve(onsets.size() - 1);
  for (std::size_t i = 0; i + 1 < onsets.size(); ++i) {
    Interval iv;
    iv.tau_s = onsets[i + 1].time_s - onsets[i].time_s;
    if (!(iv.tau_s > 0)) throw ParameterError("onset times must be strictly increasing");
    iv.start_index = i;
    iv.start_time_s = onsets[i].time_s;
    out.push_back(iv);
  }
  return out;
}

namespace {

BeatClass band(double ratio, double max_multiple) {
  if (ratio > max_multiple) return BeatClass::kDiscarded;
  if (ratio < 1.5) return BeatClass::kSingle;
  if (ratio < 2.5) return BeatClass::kDouble;
  return BeatClass::kTriple;
}

// Median of the shortest interval cluster: intervals within +-30% of the 10th percentile.
double shortest_cluster(const IntervalSeries& series) {
  std::vector<double> taus;
  taus.reserve(series.size());
  for (const auto& iv : series) taus.push_back(iv.tau_s);
  std::sort(taus.begin(), taus.end());
  const double p10 = taus[taus.size() / 10];
  std::vector<double> cluster;
  for (double t : taus) {
    if (t >= 0.7 * p10 && t <= 1.3 * p10) cluster.push_back(t);
  }
  return cluster[cluster.size() / 2];
}

}  // namespace

double estimate_base_unit(const IntervalSeries& series, const BaseUnitOptions& options) {
  if (series.empty()) throw EmptyInputError("cannot estimate the base unit of an empty series");
  double base;
  if (options.hint_bpm) {
    if (!(*options.hint_bpm > 0)) throw ParameterError("bpm hint must be positive");
    base = 60.0 / (*options.hint_bpm * 6.0);
  } else {
    base = shortest_cluster(series);
  }

  std::vector<BeatClass> previous(series.size(), BeatClass::kUnclassified);
  std::vector<BeatClass> current(series.size());
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      current[i] = band(series[i].tau_s / base, options.max_multiple);
      int k = multiple(current[i]);
      if (k == 0) continue;
      sum += series[i].tau_s / k;
      ++n;
    }
    if (n == 0) throw EstimationError("every interval exceeds the discard cutoff");
    const double next = sum / static_cast<double>(n);
    const bool stable = current == previous;
    if (stable && std::abs(next - base) < options.tolerance_s) return next;
    previous.swap(current);
    base = next;
  }
  throw EstimationError("base unit did not converge in " + std::to_string(options.max_iterations) +
                        " iterations");
}

IntervalSeries classify_intervals(const IntervalSeries& series, double base, double max_multiple) {
  if (!(base > 0)) throw ParameterError("base unit must be positive");
  if (!(max_multiple >= 2.5)) throw ParameterError("max_multiple must be at least 2.5");
  IntervalSeries out = series;
  for (auto& iv : out) {
    iv.klass = band(iv.tau_s / base, max_multiple);
    int k = multiple(iv.klass);
    iv.valid = k > 0;
    iv.normalized_tau_s = iv.valid ? iv.tau_s / k : 0.0;
  }
  return out;
}

double detection_rate(const IntervalSeries& series) {
  if (series.empty()) return 0.0;
  auto valid = std::count_if(series.begin(), series.end(), [](const Interval& iv) { return iv.valid; });
  return static_cast<double>(valid) / static_cast<double>(series.size());
}

const ClassStats& IntervalStats::of(BeatClass klass) const {
  switch (klass) {
    case BeatClass::kSingle: return single;
    case BeatClass::kDouble: return dbl;
    case BeatClass::kTriple: return triple;
    default: throw ParameterError("statistics exist only for single, double and triple");
  }
}

namespace {

ClassStats stats_for(const IntervalSeries& series, BeatClass klass, double bin_width) {
  std::vector<double> taus;
  for (const auto& iv : series) {
    if (iv.valid && iv.klass == klass) taus.push_back(iv.tau_s);
  }
  ClassStats s;
  s.count = taus.size();
  if (taus.empty()) return s;
  const double mean = std::accumulate(taus.begin(), taus.end(), 0.0) / taus.size();
  double ss = 0.0;
  for (double t : taus) ss += (t - mean) * (t - mean);
  s.mean_s = mean;
  s.std_s = taus.size() > 1 ? std::sqrt(ss / (taus.size() - 1)) : 0.0;

  std::map<long long, std::size_t> bins;
  for (double t : taus) ++bins[static_cast<long long>(std::floor(t / bin_width))];
  const long long lo = bins.begin()->first, hi = bins.rbegin()->first;
  for (long long b = lo; b <= hi; ++b) {
    auto it = bins.find(b);
    s.histogram.push_back({b * bin_width, it == bins.end() ? 0 : it->second});
  }
  return s;
}

}  // namespace

IntervalStats interval_stats(const IntervalSeries& series, double bin_width_s) {
  if (!(bin_width_s > 0)) throw ParameterError("histogram bin width must be positive");
  IntervalStats out;
  out.bin_width_s = bin_width_s;
  out.single = stats_for(series, BeatClass::kSingle, bin_width_s);
  out.dbl = stats_for(series, BeatClass::kDouble, bin_width_s);
  out.triple = stats_for(series, BeatClass::kTriple, bin_width_s);
  return out;
}

std::string_view to_string(SectionTag tag) {
  switch (tag) {
    case SectionTag::kVerse: return "A1-verse";
    case SectionTag::kPrechorus: return "A2-prechorus";
    case SectionTag::kChorus: return "B-chorus";
    case SectionTag::kOther: return "other";
  }
  return "other";
}

SectionTag parse_section_tag(std::string_view text) {
  if (text == "A1-verse") return SectionTag::kVerse;
  if (text == "A2-prechorus") return SectionTag::kPrechorus;
  if (text == "B-chorus") return SectionTag::kChorus;
  if (text == "other") return SectionTag::kOther;
  throw FormatError("unknown section tag '" + std::string(text) + "'");
}

SectionMap parse_sections(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const std::size_t c_start = table.column("start_s");
  const std::size_t c_end = table.column("end_s");
  const std::size_t c_tag = table.column("tag");
  SectionMap out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string ctx = "section row " + std::to_string(r + 1);
    Section s;
    s.start_s = parse_double(table.rows[r][c_start], ctx);
    s.end_s = parse_double(table.rows[r][c_end], ctx);
    s.tag = parse_section_tag(table.rows[r][c_tag]);
    if (!(s.end_s > s.start_s)) throw FormatError(ctx + ": end_s must exceed start_s");
    if (!out.empty() && s.start_s < out.back().end_s) {
      throw FormatError(ctx + ": sections must be increasing and non-overlapping");
    }
    out.push_back(s);
  }
  return out;
}

SectionMap read_sections(const std::filesystem::path& path) { return parse_sections(read_text(path)); }

}  // namespace groove

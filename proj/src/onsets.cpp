#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "groove/error.h"
#include "groove/io.h"
#include "groove/onsets.h"

namespace groove {

std::string_view to_string(OnsetLabel label) {
  switch (label) {
    case OnsetLabel::kHihat: return "hihat";
    case OnsetLabel::kSnare: return "snare";
    case OnsetLabel::kGhost: return "ghost";
    case OnsetLabel::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(OnsetSource source) {
  switch (source) {
    case OnsetSource::kAuto: return "auto";
    case OnsetSource::kManualAdd: return "manual-add";
    case OnsetSource::kManualMove: return "manual-move";
  }
  return "auto";
}

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::kAdd: return "add";
    case EditKind::kRemove: return "remove";
    case EditKind::kMove: return "move";
    case EditKind::kRelabel: return "relabel";
  }
  return "add";
}

OnsetLabel parse_label(std::string_view text) {
  if (text == "hihat") return OnsetLabel::kHihat;
  if (text == "snare") return OnsetLabel::kSnare;
  if (text == "ghost") return OnsetLabel::kGhost;
  if (text == "unknown" || text.empty()) return OnsetLabel::kUnknown;
  throw FormatError("unknown onset label '" + std::string(text) + "'");
}

OnsetSource parse_source(std::string_view text) {
  if (text == "auto" || text.empty()) return OnsetSource::kAuto;
  if (text == "manual-add") return OnsetSource::kManualAdd;
  if (text == "manual-move") return OnsetSource::kManualMove;
  throw FormatError("unknown onset source '" + std::string(text) + "'");
}

std::vector<double> onset_times(const OnsetSeries& series) {
  std::vector<double> out;
  out.reserve(series.size());
  for (const auto& o : series) out.push_back(o.time_s);
  return out;
}

std::vector<double> onset_amplitudes(const OnsetSeries& series) {
  std::vector<double> out;
  out.reserve(series.size());
  for (const auto& o : series) out.push_back(o.amplitude);
  return out;
}

OnsetSeries detect_onsets(const EnvelopeSignal& env, const DetectionParams& params) {
  if (!(params.threshold > 0 && params.threshold < 1)) {
    throw ParameterError("threshold must lie in (0, 1)");
  }
  if (!(params.refractory_ms > 0)) throw ParameterError("refractory_ms must be positive");
  if (!(env.sample_rate > 0)) throw ParameterError("envelope sample rate must be positive");

  const auto& v = env.values;
  if (env.silent || v.size() < 3) return {};
  const double peak = *std::max_element(v.begin(), v.end());
  if (peak <= 0) return {};
  const double floor = params.threshold * peak;

  // Local maxima; a plateau counts once, at its middle sample, if both sides are lower.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (!(v[i] > v[i - 1]) || v[i] < floor) continue;
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    if (j + 1 < v.size() && v[j + 1] < v[i]) candidates.push_back(i + (j - i) / 2);
    i = j;
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });

  const double refractory = params.refractory_ms * 1e-3 * env.sample_rate;
  std::set<std::size_t> accepted;
  for (std::size_t c : candidates) {
    auto it = accepted.lower_bound(c);
    if (it != accepted.end() && static_cast<double>(*it - c) < refractory) continue;
    if (it != accepted.begin() && static_cast<double>(c - *std::prev(it)) < refractory) continue;
    accepted.insert(c);
  }

  OnsetSeries out;
  for (std::size_t i : accepted) {
    const double height = v[i];
    const double level = 0.9 * height;
    std::size_t left = i, right = i;
    while (left > 0 && v[left - 1] >= level) --left;
    while (right + 1 < v.size() && v[right + 1] >= level) ++right;
    const double half_width_ms = 0.5 * (right - left + 1) / env.sample_rate * 1e3;
    if (half_width_ms > params.max_uncertainty_ms) continue;
    out.push_back({env.time_of(i), std::min(height, 1.0), OnsetLabel::kUnknown, OnsetSource::kAuto,
                   half_width_ms});
  }
  return out;
}

OnsetSeries merge_close_onsets(const OnsetSeries& series, double window_ms) {
  OnsetSeries out;
  const double window = window_ms * 1e-3;
  double previous = 0.0;
  for (const auto& o : series) {
    if (!out.empty() && o.time_s - previous < window) {
      out.back().amplitude = std::max(out.back().amplitude, o.amplitude);
    } else {
      out.push_back(o);
    }
    previous = o.time_s;
  }
  return out;
}

namespace {

// Nearest onset within the edit match window, or end().
OnsetSeries::iterator find_target(OnsetSeries& series, double t) {
  auto it = std::lower_bound(series.begin(), series.end(), t,
                             [](const Onset& o, double x) { return o.time_s < x; });
  auto best = series.end();
  double best_dist = kEditMatchWindowS + 1e-9;
  for (auto cand : {it, it == series.begin() ? series.end() : std::prev(it)}) {
    if (cand == series.end()) continue;
    double d = std::abs(cand->time_s - t);
    if (d <= best_dist) {
      best_dist = d;
      best = cand;
    }
  }
  return best;
}

void insert_sorted(OnsetSeries& series, const Onset& onset, std::size_t edit_index) {
  auto it = std::lower_bound(series.begin(), series.end(), onset.time_s,
                             [](const Onset& o, double x) { return o.time_s < x; });
  if (it != series.end() && it->time_s == onset.time_s) {
    throw EditError(edit_index, "an onset already exists at " + format_fixed(onset.time_s, 6) + " s");
  }
  series.insert(it, onset);
}

double envelope_at(const EnvelopeSignal& env, double t) {
  if (env.values.empty() || env.sample_rate <= 0) return 0.0;
  auto idx = static_cast<long long>(std::llround(t * env.sample_rate));
  idx = std::clamp<long long>(idx, 0, static_cast<long long>(env.values.size()) - 1);
  return std::clamp(env.values[static_cast<std::size_t>(idx)], 0.0, 1.0);
}

}  // namespace

OnsetSeries apply_edits(const OnsetSeries& series, const std::vector<AnnotationEdit>& edits,
                        const EnvelopeSignal* env) {
  OnsetSeries out = series;
  std::sort(out.begin(), out.end(), [](const Onset& a, const Onset& b) { return a.time_s < b.time_s; });

  for (std::size_t k = 0; k < edits.size(); ++k) {
    const AnnotationEdit& e = edits[k];
    switch (e.kind) {
      case EditKind::kAdd: {
        Onset o;
        o.time_s = e.target_time_s;
        o.amplitude = env ? envelope_at(*env, e.target_time_s) : 0.0;
        o.label = e.label.value_or(OnsetLabel::kUnknown);
        o.source = OnsetSource::kManualAdd;
        insert_sorted(out, o, k);
        break;
      }
      case EditKind::kRemove: {
        auto it = find_target(out, e.target_time_s);
        if (it == out.end()) {
          throw EditError(k, "no onset within 5 ms of " + format_fixed(e.target_time_s, 6) + " s");
        }
        out.erase(it);
        break;
      }
      case EditKind::kMove: {
        if (!e.new_time_s) throw EditError(k, "move without new_time_s");
        auto it = find_target(out, e.target_time_s);
        if (it == out.end()) {
          throw EditError(k, "no onset within 5 ms of " + format_fixed(e.target_time_s, 6) + " s");
        }
        Onset moved = *it;
        out.erase(it);
        moved.time_s = *e.new_time_s;
        moved.source = OnsetSource::kManualMove;
        insert_sorted(out, moved, k);
        break;
      }
      case EditKind::kRelabel: {
        if (!e.label) throw EditError(k, "relabel without label");
        auto it = find_target(out, e.target_time_s);
        if (it == out.end()) {
          throw EditError(k, "no onset within 5 ms of " + format_fixed(e.target_time_s, 6) + " s");
        }
        it->label = *e.label;
        break;
      }
    }
  }
  return out;
}

std::string format_annotations(const OnsetSeries& series) {
  std::string out = "index,time_s,amplitude,label,source\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& o = series[i];
    out += std::to_string(i) + ',' + format_fixed(o.time_s, 6) + ',' + format_double(o.amplitude) + ',' +
           std::string(to_string(o.label)) + ',' + std::string(to_string(o.source)) + '\n';
  }
  return out;
}

OnsetSeries parse_annotations(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const std::size_t c_time = table.column("time_s");
  const std::size_t c_amp = table.column("amplitude");
  const std::size_t c_label = table.column("label");
  const std::size_t c_source = table.column("source");

  OnsetSeries out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string ctx = "annotation row " + std::to_string(r + 1);
    Onset o;
    o.time_s = parse_double(row[c_time], ctx);
    o.amplitude = row[c_amp].empty() ? 0.0 : parse_double(row[c_amp], ctx);
    if (!(o.amplitude >= 0.0 && o.amplitude <= 1.0)) {
      throw FormatError(ctx + ": amplitude " + row[c_amp] + " outside [0, 1]");
    }
    o.label = parse_label(row[c_label]);
    o.source = parse_source(row[c_source]);
    out.push_back(o);
  }
  std::stable_sort(out.begin(), out.end(), [](const Onset& a, const Onset& b) { return a.time_s < b.time_s; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].time_s == out[i - 1].time_s) {
      throw FormatError("duplicate onset time " + format_fixed(out[i].time_s, 6) + " s in annotations");
    }
  }
  return out;
}

OnsetSeries read_annotations(const std::filesystem::path& path) {
  return parse_annotations(read_text(path));
}

void write_annotations(const std::filesystem::path& path, const OnsetSeries& series) {
  atomic_write(path, format_annotations(series));
}

std::string format_edits(const std::vector<AnnotationEdit>& edits) {
  std::string out = "kind,target_time_s,new_time_s,label\n";
  for (const auto& e : edits) {
    out += std::string(to_string(e.kind)) + ',' + format_fixed(e.target_time_s, 6) + ',' +
           (e.new_time_s ? format_fixed(*e.new_time_s, 6) : std::string()) + ',' +
           (e.label ? std::string(to_string(*e.label)) : std::string()) + '\n';
  }
  return out;
}

std::vector<AnnotationEdit> parse_edits(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const std::size_t c_kind = table.column("kind");
  const std::size_t c_target = table.column("target_time_s");
  const std::size_t c_new = table.column("new_time_s");
  const std::size_t c_label = table.column("label");

  std::vector<AnnotationEdit> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string ctx = "edit row " + std::to_string(r + 1);
    AnnotationEdit e;
    const std::string& kind = row[c_kind];
    if (kind == "add") e.kind = EditKind::kAdd;
    else if (kind == "remove") e.kind = EditKind::kRemove;
    else if (kind == "move") e.kind = EditKind::kMove;
    else if (kind == "relabel") e.kind = EditKind::kRelabel;
    else throw FormatError(ctx + ": unknown edit kind '" + kind + "'");
    e.target_time_s = parse_double(row[c_target], ctx);
    if (!row[c_new].empty()) e.new_time_s = parse_double(row[c_new], ctx);
    if (!row[c_label].empty()) e.label = parse_label(row[c_label]);
    if (e.kind == EditKind::kMove && !e.new_time_s) throw FormatError(ctx + ": move needs new_time_s");
    if (e.kind == EditKind::kRelabel && !e.label) throw FormatError(ctx + ": relabel needs label");
    out.push_back(e);
  }
  return out;
}

std::vector<AnnotationEdit> read_edits(const std::filesystem::path& path) {
  return parse_edits(read_text(path));
}

}  // namespace groove

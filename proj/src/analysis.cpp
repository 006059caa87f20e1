#include "groove/analysis.h"

#include <sstream>

#include "groove/error.h"
#include "groove/io.h"

namespace groove {
namespace {

using nlohmann::ordered_json;

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string opt_csv(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

ordered_json fit_json(const std::optional<AlphaFit>& fit) {
  if (!fit) return nullptr;
  return {{"alpha", fit->alpha}, {"r_squared", fit->r_squared}, {"s_min", fit->s_min}, {"s_max", fit->s_max},
          {"points", fit->points}};
}

ordered_json class_json(const ClassStats& s) {
  return {{"count", s.count},
          {"mean_ms", s.mean_s ? ordered_json(*s.mean_s * 1e3) : ordered_json(nullptr)},
          {"std_ms", s.std_s ? ordered_json(*s.std_s * 1e3) : ordered_json(nullptr)}};
}

ordered_json profile_json(const PhraseProfile& p) {
  ordered_json positions = ordered_json::array();
  for (const auto& s : p.positions) {
    ordered_json row = {{"position", s.position}, {"mean", opt(s.mean)}, {"std", opt(s.stddev)}, {"n", s.n}};
    if (p.kind == ProfileKind::kInterval) {
      row["multiple"] = s.multiple;
      row["deviation_pct"] = opt(s.deviation_pct);
    }
    positions.push_back(row);
  }
  ordered_json out = {{"template_length", p.template_length}, {"complete_phrases", p.complete_phrases}};
  if (p.kind == ProfileKind::kInterval) out["phrase_base_s"] = opt(p.phrase_base_s);
  out["positions"] = positions;
  return out;
}

std::string_view drift_mode_name(DriftMode mode) { return mode == DriftMode::kElapsed ? "elapsed" : "normalized"; }

}  // namespace

OnsetSeries detect_audio_onsets(const AudioClip& clip, const DetectionOptions& options) {
  const AudioClip filtered = highpass(clip, options.cutoff_hz);
  const EnvelopeSignal env = envelope(filtered, options.smoothing_ms);
  OnsetSeries onsets = detect_onsets(env, options.peaks);
  return options.merge_ms > 0 ? merge_close_onsets(onsets, options.merge_ms) : onsets;
}

std::vector<std::pair<std::string, std::vector<double>>> dfa_series(const AnalysisResult& result,
                                                                    bool raw_intervals) {
  std::vector<double> all, singles, doubles, triples, amplitudes;
  for (const auto& iv : result.intervals) {
    if (!iv.valid) continue;
    all.push_back(raw_intervals ? iv.tau_s : iv.normalized_tau_s);
    switch (iv.klass) {
      case BeatClass::kSingle: singles.push_back(iv.tau_s); break;
      case BeatClass::kDouble: doubles.push_back(iv.tau_s); break;
      case BeatClass::kTriple: triples.push_back(iv.tau_s); break;
      default: break;
    }
  }
  for (const auto& o : result.onsets) {
    if (o.label != OnsetLabel::kGhost) amplitudes.push_back(o.amplitude);
  }
  return {{"intervals_all", std::move(all)},
          {"singles", std::move(singles)},
          {"doubles", std::move(doubles)},
          {"triples", std::move(triples)},
          {"amplitudes", std::move(amplitudes)}};
}

AnalysisResult analyze_onsets(const OnsetSeries& onsets, const AnalysisOptions& options) {
  if (onsets.size() < kMinAnalysisOnsets) {
    throw EmptyInputError("analysis needs at least " + std::to_string(kMinAnalysisOnsets) + " onsets, got " +
                          std::to_string(onsets.size()));
  }
  AnalysisResult r;
  r.onsets = onsets;
  const IntervalSeries raw = intervals(onsets);
  r.base_s = estimate_base_unit(raw, options.base);
  r.intervals = classify_intervals(raw, r.base_s, options.base.max_multiple);
  r.stats = interval_stats(r.intervals, options.histogram_bin_s);
  try {
    r.swing = swing_ratio(r.intervals, onsets);
  } catch (const UndefinedRatioError& e) {
    r.swing_error = e.what();
  }
  r.drift = compute_drift(r.intervals, r.base_s, options.drift_mode);
  r.alignment = align_phrases(onsets, r.base_s, PhraseTemplate::shuffle(options.phrase_len), options.sections,
                              options.include_prechorus);
  r.interval_profile = phrase_interval_profile(onsets, r.alignment);
  r.amplitude_profile = phrase_amplitude_profile(onsets, r.alignment);

  for (auto& [name, series] : dfa_series(r, options.dfa_raw_intervals)) {
    NamedDfa entry{name, series.size(), std::nullopt};
    try {
      entry.summary = analyze_dfa(series, options.dfa, options.dfa_options);
    } catch (const LengthError&) {
    }
    r.dfa.push_back(std::move(entry));
  }
  return r;
}

ordered_json dfa_summary_json(const DfaSummary& summary, const DfaRanges& ranges) {
  auto alpha = [](const std::optional<AlphaFit>& f) { return f ? ordered_json(f->alpha) : ordered_json(nullptr); };
  auto r2 = [](const std::optional<AlphaFit>& f) { return f ? ordered_json(f->r_squared) : ordered_json(nullptr); };
  return {{"alpha1", alpha(summary.alpha1)},
          {"alpha2", alpha(summary.alpha2)},
          {"s_ranges", {{ranges.short_min, ranges.short_max}, {ranges.long_min, ranges.long_max}}},
          {"r_squared", {r2(summary.alpha1), r2(summary.alpha2)}},
          {"global", fit_json(summary.global)},
          {"degenerate", summary.result.degenerate}};
}

ordered_json report_json(const AnalysisResult& r, const AnalysisOptions& options, const InputDescriptor& input,
                         const ordered_json& extra_parameters) {
  ordered_json report;
  report["tool"] = {{"name", "groove"}, {"version", kToolVersion}};
  report["input"] = {{"path", input.path}, {"kind", input.kind}};

  ordered_json params = extra_parameters.is_object() ? extra_parameters : ordered_json::object();
  params["max_multiple"] = options.base.max_multiple;
  params["bpm_hint"] = opt(options.base.hint_bpm);
  params["histogram_bin_s"] = options.histogram_bin_s;
  params["drift_mode"] = drift_mode_name(options.drift_mode);
  params["phrase_len"] = options.phrase_len;
  params["include_prechorus"] = options.include_prechorus;
  params["section_count"] = options.sections.size();
  params["dfa_short"] = {options.dfa.short_min, options.dfa.short_max};
  params["dfa_long"] = {options.dfa.long_min, options.dfa.long_max};
  params["dfa_detrend_order"] = options.dfa_options.detrend_order;
  params["dfa_tiling"] = options.dfa_options.tiling == WindowTiling::kBothEnds ? "both_ends" : "forward";
  params["dfa_raw_intervals"] = options.dfa_raw_intervals;
  report["parameters"] = params;

  std::size_t discarded = 0;
  for (const auto& iv : r.intervals) discarded += iv.klass == BeatClass::kDiscarded;
  report["onset_count"] = r.onsets.size();
  report["interval_counts"] = {{"single", r.stats.single.count},
                               {"double", r.stats.dbl.count},
                               {"triple", r.stats.triple.count},
                               {"discarded", discarded},
                               {"total", r.intervals.size()}};
  report["detection_rate"] = detection_rate(r.intervals);
  report["base_unit_ms"] = r.base_s * 1e3;
  report["interval_stats"] = {{"single", class_json(r.stats.single)},
                              {"double", class_json(r.stats.dbl)},
                              {"triple", class_json(r.stats.triple)}};

  if (r.swing) {
    const SwingReport& s = *r.swing;
    report["swing"] = {{"swing_ratio", s.swing_ratio},
                       {"mean_inter_triplet_single_ms", s.mean_inter_triplet_single_s * 1e3},
                       {"mean_double_ms", s.mean_double_s * 1e3},
                       {"mean_triple_ms", s.mean_triple_s ? ordered_json(*s.mean_triple_s * 1e3) : nullptr},
                       {"triad", {1.0, s.double_to_single, opt(s.triple_to_single)}},
                       {"n_singles_used", s.n_singles_used},
                       {"n_doubles_used", s.n_doubles_used},
                       {"n_intra_triplet_excluded", s.n_intra_triplet_excluded}};
  } else {
    report["swing"] = {{"swing_ratio", nullptr}, {"error", r.swing_error.value_or("")}};
  }

  report["drift"] = {{"mode", drift_mode_name(r.drift.mode)},
                     {"max_abs_s", r.drift.max_abs_s()},
                     {"final_s", r.drift.final_s()},
                     {"gap_count", r.drift.gap_count()}};
  report["phrase"] = {{"interval", profile_json(r.interval_profile)},
                      {"amplitude", profile_json(r.amplitude_profile)}};

  ordered_json dfa = ordered_json::object();
  for (const auto& d : r.dfa) {
    ordered_json entry = d.summary ? dfa_summary_json(*d.summary, options.dfa) : ordered_json::object();
    if (!d.summary) {
      entry["alpha1"] = nullptr;
      entry["alpha2"] = nullptr;
      entry["skipped"] = "series too short";
    }
    entry["n"] = d.length;
    if (d.name == "intervals_all") entry["raw"] = options.dfa_raw_intervals;
    dfa[d.name] = entry;
  }
  report["dfa"] = dfa;
  return report;
}

std::string format_intervals_csv(const IntervalSeries& series) {
  std::ostringstream out;
  out << "index,start_time_s,tau_s,class,normalized_tau_s,valid\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& iv = series[i];
    out << i << ',' << format_double(iv.start_time_s) << ',' << format_double(iv.tau_s) << ','
        << to_string(iv.klass) << ',' << format_double(iv.normalized_tau_s) << ',' << (iv.valid ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string format_drift_csv(const DriftSeries& drift) {
  std::ostringstream out;
  out << "index,time_s,drift_s,gap\n";
  for (const auto& p : drift.points) {
    out << p.index << ',' << format_double(p.time_s) << ',' << format_double(p.d_s) << ',' << (p.gap ? 1 : 0)
        << '\n';
  }
  return out.str();
}

std::string format_profile_csv(const PhraseProfile& profile) {
  std::ostringstream out;
  out << "position,mean,std,n,deviation_pct\n";
  for (const auto& s : profile.positions) {
    out << s.position << ',' << opt_csv(s.mean) << ',' << opt_csv(s.stddev) << ',' << s.n << ','
        << opt_csv(s.deviation_pct) << '\n';
  }
  return out.str();
}

std::string format_histogram_csv(const ClassStats& stats, double bin_width_s) {
  std::ostringstream out;
  out << "lower_s,upper_s,count\n";
  for (const auto& b : stats.histogram) {
    out << format_double(b.lower_s) << ',' << format_double(b.lower_s + bin_width_s) << ',' << b.count << '\n';
  }
  return out.str();
}

std::string format_dfa_csv(const DfaSummary& summary) {
  std::ostringstream out;
  out << "s,F,alpha_local\n";
  const auto& res = summary.result;
  for (std::size_t i = 0; i < res.scales.size(); ++i) {
    std::string local;
    for (const auto& la : summary.alpha_local) {
      if (la.s == res.scales[i]) local = format_double(la.alpha);
    }
    out << res.scales[i] << ',' << format_double(res.F[i]) << ',' << local << '\n';
  }
  return out.str();
}

std::vector<std::string> write_analysis(const std::filesystem::path& out_dir, const AnalysisResult& r,
                                        ordered_json report) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("onsets.csv", format_annotations(r.onsets));
  files.emplace_back("intervals.csv", format_intervals_csv(r.intervals));
  files.emplace_back("drift.csv", format_drift_csv(r.drift));
  files.emplace_back("phrase_intervals.csv", format_profile_csv(r.interval_profile));
  files.emplace_back("phrase_amplitudes.csv", format_profile_csv(r.amplitude_profile));
  files.emplace_back("histogram_single.csv", format_histogram_csv(r.stats.single, r.stats.bin_width_s));
  files.emplace_back("histogram_double.csv", format_histogram_csv(r.stats.dbl, r.stats.bin_width_s));
  files.emplace_back("histogram_triple.csv", format_histogram_csv(r.stats.triple, r.stats.bin_width_s));
  for (const auto& d : r.dfa) {
    if (d.summary) files.emplace_back("dfa_" + d.name + ".csv", format_dfa_csv(*d.summary));
  }

  ordered_json names = ordered_json::array();
  for (const auto& f : files) names.push_back(f.first);
  report["files"] = names;
  files.emplace_back("report.json", report.dump(2) + "\n");

  std::vector<std::string> written;
  for (const auto& [name, content] : files) {
    atomic_write(out_dir / name, content);
    written.push_back(name);
  }
  return written;
}

}  // namespace groove

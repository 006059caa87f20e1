#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "groove/analysis.h"
#include "groove/error.h"
#include "groove/io.h"
#include "groove/synth.h"
#include "groove/tempogram.h"

namespace fs = std::filesystem;
using groove::format_double;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDegenerate = 1;
constexpr int kExitUsage = 2;

struct ScaleRange {
  int lo = 0;
  int hi = 0;
};

ScaleRange parse_range(const std::string& text, const char* flag) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw groove::ParameterError(std::string(flag) + " expects LO:HI");
  ScaleRange r{static_cast<int>(groove::parse_double(text.substr(0, colon), flag)),
               static_cast<int>(groove::parse_double(text.substr(colon + 1), flag))};
  if (r.lo < 3 || r.hi <= r.lo) throw groove::ParameterError(std::string(flag) + " needs 3 <= LO < HI");
  return r;
}

// "t:bpm,t:bpm,..."
std::vector<groove::TempoKnot> parse_knots(const std::string& text) {
  std::vector<groove::TempoKnot> knots;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw groove::ParameterError("--drift expects TIME:BPM pairs");
    knots.push_back({groove::parse_double(item.substr(0, colon), "--drift time"),
                     groove::parse_double(item.substr(colon + 1), "--drift bpm")});
  }
  return knots;
}

bool is_audio_path(const fs::path& p) {
  auto ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".wav" || ext == ".wave";
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    groove::atomic_write(out, content);
  }
}

struct DetectFlags {
  groove::DetectionOptions opts;
  std::string edits;

  void add(CLI::App* cmd) {
    cmd->add_option("--cutoff-hz", opts.cutoff_hz, "High-pass cutoff in Hz")->capture_default_str();
    cmd->add_option("--smoothing-ms", opts.smoothing_ms, "Envelope time constant in ms")->capture_default_str();
    cmd->add_option("--threshold", opts.peaks.threshold, "Peak threshold as a fraction of the envelope maximum")
        ->capture_default_str();
    cmd->add_option("--refractory-ms", opts.peaks.refractory_ms, "Minimum spacing of onsets in ms")
        ->capture_default_str();
    cmd->add_option("--max-uncertainty-ms", opts.peaks.max_uncertainty_ms, "Drop wider peaks")
        ->capture_default_str();
    cmd->add_option("--merge-ms", opts.merge_ms, "Merge onsets closer than this (0 disables)")->capture_default_str();
    cmd->add_option("--edits", edits, "Edits CSV applied after detection");
  }

  ordered_json json() const {
    return {{"cutoff_hz", opts.cutoff_hz},           {"smoothing_ms", opts.smoothing_ms},
            {"threshold", opts.peaks.threshold},     {"refractory_ms", opts.peaks.refractory_ms},
            {"max_uncertainty_ms", opts.peaks.max_uncertainty_ms}, {"merge_ms", opts.merge_ms},
            {"edits", edits}};
  }
};

groove::OnsetSeries detect_with_edits(const fs::path& audio, const DetectFlags& flags) {
  auto clip = groove::load_audio(audio);
  auto onsets = groove::detect_audio_onsets(clip, flags.opts);
  if (!flags.edits.empty()) {
    auto env = groove::envelope(groove::highpass(clip, flags.opts.cutoff_hz), flags.opts.smoothing_ms);
    onsets = groove::apply_edits(onsets, groove::read_edits(flags.edits), &env);
  }
  return onsets;
}

int run_onsets(const std::string& input, const std::string& out, const DetectFlags& flags) {
  emit(out, groove::format_annotations(detect_with_edits(input, flags)));
  return kExitOk;
}

struct AnalyzeFlags {
  std::optional<double> bpm_hint;
  double max_multiple = 3.5;
  std::string sections;
  bool include_prechorus = false;
  int phrase_len = 16;
  std::string dfa_short = "4:16";
  std::string dfa_long = "16:100";
  bool dfa_raw = false;
  std::string drift_mode = "elapsed";
  std::string out_dir = "analysis";
};

int run_analyze(const std::string& input, const DetectFlags& detect, const AnalyzeFlags& f) {
  groove::AnalysisOptions opts;
  opts.base.hint_bpm = f.bpm_hint;
  opts.base.max_multiple = f.max_multiple;
  if (!f.sections.empty()) opts.sections = groove::read_sections(f.sections);
  opts.include_prechorus = f.include_prechorus;
  opts.phrase_len = f.phrase_len;
  auto s = parse_range(f.dfa_short, "--dfa-short");
  auto l = parse_range(f.dfa_long, "--dfa-long");
  opts.dfa = {s.lo, s.hi, l.lo, l.hi};
  opts.dfa_raw_intervals = f.dfa_raw;
  opts.drift_mode = f.drift_mode == "normalized" ? groove::DriftMode::kNormalized : groove::DriftMode::kElapsed;

  const bool audio = is_audio_path(input);
  groove::OnsetSeries onsets = audio ? detect_with_edits(input, detect) : groove::read_annotations(input);
  if (!audio && !detect.edits.empty()) onsets = groove::apply_edits(onsets, groove::read_edits(detect.edits));

  auto result = groove::analyze_onsets(onsets, opts);
  ordered_json extra = audio ? ordered_json{{"detection", detect.json()}} : ordered_json::object();
  auto report = groove::report_json(result, opts, {input, audio ? "audio" : "annotations"}, extra);
  groove::write_analysis(f.out_dir, result, report);

  std::cerr << "onsets " << result.onsets.size() << ", base " << format_double(result.base_s * 1e3) << " ms";
  if (result.swing) std::cerr << ", swing " << format_double(result.swing->swing_ratio);
  std::cerr << "\n";
  return kExitOk;
}

struct SynthFlags {
  groove::GrooveSpec spec;
  std::uint64_t seed = 1;
  std::string drift;
  std::string amplitudes;
  std::string out;
  std::string wav;
  std::optional<double> noise_db;
  double sample_rate = 44100.0;
  bool series_only = false;
  std::size_t n = 8192;
  std::optional<double> crossover_mix;
};

int run_synth(SynthFlags f) {
  if (f.series_only) {
    std::vector<double> x = f.crossover_mix
                                ? groove::gen_crossover_series(f.n, groove::default_crossover_pattern(),
                                                               f.spec.lrc_beta, *f.crossover_mix, f.seed)
                                : groove::gen_powerlaw_noise(f.spec.lrc_beta, f.n, f.seed);
    std::ostringstream csv;
    csv << "index,value\n";
    for (std::size_t i = 0; i < x.size(); ++i) csv << i << ',' << format_double(x[i]) << '\n';
    emit(f.out, csv.str());
    return kExitOk;
  }
  if (!f.drift.empty()) f.spec.drift_profile = parse_knots(f.drift);
  if (!f.amplitudes.empty()) {
    std::stringstream ss(f.amplitudes);
    std::string item;
    while (std::getline(ss, item, ',')) f.spec.amplitude_pattern.push_back(groove::parse_double(item, "--amplitudes"));
  }
  auto groove_data = groove::gen_shuffle_onsets(f.spec, f.seed);
  emit(f.out, groove::format_annotations(groove_data.onsets));
  if (!f.wav.empty()) {
    groove::RenderOptions ro;
    ro.sample_rate = f.sample_rate;
    ro.noise_db = f.noise_db;
    groove::write_wav(f.wav, groove::render_clicks(groove_data.onsets, ro, f.seed));
  }
  return kExitOk;
}

int run_tempogram(const std::string& input, const std::string& out_dir, groove::TempogramParams params) {
  auto clip = groove::load_audio(input);
  auto novelty = groove::novelty_curve(clip);
  auto tg = groove::fourier_tempogram(novelty, params);
  auto track = groove::argmax_track(tg);

  std::ostringstream csv;
  csv << "time_s,bpm,magnitude\n";
  for (std::size_t m = 0; m < tg.times_s.size(); ++m) {
    for (std::size_t j = 0; j < tg.tempi_bpm.size(); ++j) {
      csv << format_double(tg.times_s[m]) << ',' << format_double(tg.tempi_bpm[j]) << ','
          << format_double(tg.magnitude[m][j]) << '\n';
    }
  }
  ordered_json summary;
  summary["tool"] = {{"name", "groove"}, {"version", groove::kToolVersion}};
  summary["input"] = input;
  summary["parameters"] = {{"window_length", params.window_length}, {"hop", params.hop},
                           {"fft_length", params.fft_length},       {"min_bpm", params.min_bpm},
                           {"max_bpm", params.max_bpm},             {"ref_bpm", params.ref_bpm},
                           {"octave_divider", params.octave_divider}, {"novelty_rate_hz", novelty.rate_hz}};
  summary["frames"] = tg.times_s.size();
  summary["argmax"] = {{"time_s", tg.times_s}, {"bpm", track}};

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw groove::IoError("cannot create output directory " + out_dir + ": " + ec.message());
  groove::atomic_write(fs::path(out_dir) / "tempogram.csv", csv.str());
  groove::atomic_write(fs::path(out_dir) / "tempogram.json", summary.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drum groove timing analysis"};
  app.set_version_flag("--version", groove::kToolVersion);
  app.require_subcommand(1);

  std::string input;
  std::string out;

  DetectFlags detect;
  auto* onsets_cmd = app.add_subcommand("onsets", "Detect onsets in a WAV file and print the annotation CSV");
  onsets_cmd->add_option("audio", input, "Input WAV file")->required();
  onsets_cmd->add_option("-o,--out", out, "Output CSV (default stdout)");
  detect.add(onsets_cmd);

  AnalyzeFlags analyze;
  DetectFlags analyze_detect;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a WAV file or an annotation CSV");
  analyze_cmd->add_option("input", input, "WAV file or annotation CSV")->required();
  analyze_detect.add(analyze_cmd);
  analyze_cmd->add_option("--bpm-hint", analyze.bpm_hint, "Tempo hint for the base-unit estimate");
  analyze_cmd->add_option("--max-multiple", analyze.max_multiple, "Discard intervals beyond this many pulses")
      ->capture_default_str();
  analyze_cmd->add_option("--sections", analyze.sections, "Sections CSV (start_s,end_s,tag)");
  analyze_cmd->add_flag("--include-prechorus", analyze.include_prechorus, "Keep A2-prechorus in phrase profiles");
  analyze_cmd->add_option("--phrase-len", analyze.phrase_len, "Hi-hat positions per phrase")->capture_default_str();
  analyze_cmd->add_option("--dfa-short", analyze.dfa_short, "Short-scale fit range LO:HI")->capture_default_str();
  analyze_cmd->add_option("--dfa-long", analyze.dfa_long, "Long-scale fit range LO:HI")->capture_default_str();
  analyze_cmd->add_flag("--dfa-raw", analyze.dfa_raw, "Run the all-interval DFA on raw intervals");
  analyze_cmd->add_option("--drift-mode", analyze.drift_mode, "elapsed or normalized")
      ->check(CLI::IsMember({"elapsed", "normalized"}))
      ->capture_default_str();
  analyze_cmd->add_option("--out-dir", analyze.out_dir, "Output directory")->capture_default_str();

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic shuffle or a noise series");
  synth_cmd->add_option("--bpm", synth.spec.bpm)->capture_default_str();
  synth_cmd->add_option("--swing", synth.spec.swing_ratio, "Double / single ratio")->capture_default_str();
  synth_cmd->add_option("--bars", synth.spec.bars)->capture_default_str();
  synth_cmd->add_option("--jitter", synth.spec.jitter_sigma_ms, "Onset jitter std in ms")->capture_default_str();
  synth_cmd->add_option("--beta", synth.spec.lrc_beta, "Spectral exponent of correlated noise")
      ->capture_default_str();
  synth_cmd->add_option("--lrc-sigma", synth.spec.lrc_sigma_ms, "Correlated interval noise std in ms")
      ->capture_default_str();
  synth_cmd->add_option("--amp-noise", synth.spec.amplitude_noise, "Relative amplitude noise")->capture_default_str();
  synth_cmd->add_option("--amplitudes", synth.amplitudes, "Comma-separated amplitude pattern");
  synth_cmd->add_option("--ghost-prob", synth.spec.ghost_probability, "Ghost note probability per triplet")
      ->capture_default_str();
  synth_cmd->add_option("--drift", synth.drift, "Tempo knots TIME:BPM,TIME:BPM,...");
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("-o,--out", synth.out, "Output CSV (default stdout)");
  synth_cmd->add_option("--wav", synth.wav, "Also render a click track");
  synth_cmd->add_option("--noise-db", synth.noise_db, "Noise level of the render relative to the loudest click");
  synth_cmd->add_option("--sample-rate", synth.sample_rate)->capture_default_str();
  synth_cmd->add_flag("--series-only", synth.series_only, "Emit a power-law noise series instead of onsets");
  synth_cmd->add_option("-n", synth.n, "Series length")->capture_default_str();
  synth_cmd->add_option("--crossover-mix", synth.crossover_mix, "Mix noise into the default phrase pattern");

  groove::TempogramParams tparams;
  std::string tempo_out = "tempogram";
  auto* tempo_cmd = app.add_subcommand("tempogram", "Fourier tempogram of a WAV file");
  tempo_cmd->add_option("audio", input, "Input WAV file")->required();
  tempo_cmd->add_option("--min-bpm", tparams.min_bpm)->capture_default_str();
  tempo_cmd->add_option("--max-bpm", tparams.max_bpm)->capture_default_str();
  tempo_cmd->add_option("--ref-bpm", tparams.ref_bpm)->capture_default_str();
  tempo_cmd->add_option("--out-dir", tempo_out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*onsets_cmd) return run_onsets(input, out, detect);
    if (*analyze_cmd) return run_analyze(input, analyze_detect, analyze);
    if (*synth_cmd) return run_synth(synth);
    if (*tempo_cmd) return run_tempogram(input, tempo_out, tparams);
  } catch (const groove::EmptyInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const groove::EstimationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

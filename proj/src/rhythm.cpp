#include <algorithm>
#include <cmath>
#include <numeric>

#include "groove/error.h"
#include "groove/rhythm.h"

namespace groove {

double DriftSeries::max_abs_s() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, std::abs(p.d_s));
  return m;
}

double DriftSeries::final_s() const { return points.empty() ? 0.0 : points.back().d_s; }

std::size_t DriftSeries::gap_count() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const DriftPoint& p) { return p.gap; }));
}

DriftSeries compute_drift(const IntervalSeries& series, double base, DriftMode mode) {
  if (!(base > 0)) throw ParameterError("base unit must be positive");
  DriftSeries out;
  out.base_s = base;
  out.mode = mode;
  out.points.reserve(series.size());

  // Clock and grid are accumulated separately so a span's drift telescopes exactly.
  double clock = 0.0;
  double grid_steps = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Interval& iv = series[i];
    if (iv.klass == BeatClass::kUnclassified) {
      throw ParameterError("compute_drift needs a classified interval series");
    }
    DriftPoint p;
    p.index = i + 1;
    p.time_s = iv.start_time_s + iv.tau_s;
    if (!iv.valid) {
      p.gap = true;
      p.d_s = 0.0;
      clock = 0.0;
      grid_steps = 0.0;
    } else if (mode == DriftMode::kElapsed) {
      clock += iv.tau_s;
      grid_steps += multiple(iv.klass);
      p.d_s = clock - grid_steps * base;
    } else {
      clock += iv.normalized_tau_s;
      grid_steps += 1.0;
      p.d_s = clock - grid_steps * base;
    }
    out.points.push_back(p);
  }
  return out;
}

SwingReport swing_ratio(const IntervalSeries& series, const OnsetSeries& onsets) {
  auto is_ghost = [&](std::size_t idx) {
    return idx < onsets.size() && onsets[idx].label == OnsetLabel::kGhost;
  };

  SwingReport r;
  double sum_single = 0.0, sum_double = 0.0, sum_triple = 0.0;
  std::size_t n_triple = 0;
  for (const auto& iv : series) {
    if (!iv.valid) continue;
    switch (iv.klass) {
      case BeatClass::kSingle:
        if (is_ghost(iv.start_index) || is_ghost(iv.start_index + 1)) {
          ++r.n_intra_triplet_excluded;
        } else {
          sum_single += iv.tau_s;
          ++r.n_singles_used;
        }
        break;
      case BeatClass::kDouble:
        sum_double += iv.tau_s;
        ++r.n_doubles_used;
        break;
      case BeatClass::kTriple:
        sum_triple += iv.tau_s;
        ++n_triple;
        break;
      default: break;
    }
  }
  if (r.n_singles_used == 0) throw UndefinedRatioError("swing ratio needs at least one inter-triplet single");
  if (r.n_doubles_used == 0) throw UndefinedRatioError("swing ratio needs at least one double");

  r.mean_inter_triplet_single_s = sum_single / r.n_singles_used;
  r.mean_double_s = sum_double / r.n_doubles_used;
  r.swing_ratio = r.mean_double_s / r.mean_inter_triplet_single_s;
  r.double_to_single = r.swing_ratio;
  if (n_triple > 0) {
    r.mean_triple_s = sum_triple / n_triple;
    r.triple_to_single = *r.mean_triple_s / r.mean_inter_triplet_single_s;
  }
  return r;
}

PhraseTemplate PhraseTemplate::shuffle(int positions) {
  if (positions < 2 || positions % 2 != 0) throw ParameterError("shuffle phrase length must be even");
  PhraseTemplate t;
  t.phrase_units = positions / 2 * 3;
  for (int g = 0; g < positions / 2; ++g) {
    t.position_units.push_back(3 * g);
    t.position_units.push_back(3 * g + 2);
  }
  return t;
}

namespace {

void validate(const PhraseTemplate& t) {
  if (t.phrase_units <= 0 || t.position_units.empty()) throw ParameterError("empty phrase template");
  for (std::size_t i = 0; i < t.position_units.size(); ++i) {
    int u = t.position_units[i];
    if (u < 0 || u >= t.phrase_units || (i > 0 && u <= t.position_units[i - 1])) {
      throw ParameterError("phrase template positions must be increasing and inside the phrase");
    }
  }
  if (t.position_units.front() != 0) throw ParameterError("phrase template must start at unit 0");
}

struct Moments {
  std::optional<double> mean, stddev;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  m.mean = mean;
  m.stddev = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
  return m;
}

}  // namespace

PhraseAlignment align_phrases(const OnsetSeries& onsets, double base, const PhraseTemplate& phrase_template,
                              const SectionMap& sections, bool include_prechorus) {
  if (!(base > 0)) throw ParameterError("base unit must be positive");
  validate(phrase_template);
  PhraseAlignment out;
  out.phrase_template = phrase_template;

  struct Span {
    double start, end;
  };
  std::vector<Span> spans;
  if (sections.empty()) {
    spans.push_back({-INFINITY, INFINITY});
  } else {
    for (const auto& s : sections) {
      if (s.tag == SectionTag::kPrechorus && !include_prechorus) continue;
      spans.push_back({s.start_s, s.end_s});
    }
  }

  long phrase_offset = 0;
  int segment = 0;
  for (const auto& span : spans) {
    bool started = false;
    long unit = 0;
    double previous = 0.0;
    long last_phrase = -1;
    for (std::size_t i = 0; i < onsets.size(); ++i) {
      const Onset& o = onsets[i];
      if (o.time_s < span.start || o.time_s >= span.end || o.label == OnsetLabel::kGhost) continue;
      if (started) {
        unit += std::max(1L, std::lround((o.time_s - previous) / base));
      }
      started = true;
      previous = o.time_s;

      GridPosition g;
      g.onset_index = i;
      g.unit = unit;
      g.segment = segment;
      long local = unit / phrase_template.phrase_units;
      g.phrase = phrase_offset + local;
      int within = static_cast<int>(unit % phrase_template.phrase_units);
      const auto& pu = phrase_template.position_units;
      auto it = std::find(pu.begin(), pu.end(), within);
      g.position = it == pu.end() ? -1 : static_cast<int>(it - pu.begin());
      last_phrase = g.phrase;
      out.positions.push_back(g);
    }
    if (started) {
      phrase_offset = last_phrase + 1;
      ++segment;
    }
  }
  return out;
}

PhraseProfile phrase_interval_profile(const OnsetSeries& onsets, const PhraseAlignment& alignment) {
  const PhraseTemplate& t = alignment.phrase_template;
  const std::size_t n_pos = t.size();
  PhraseProfile profile;
  profile.kind = ProfileKind::kInterval;
  profile.template_length = n_pos;

  std::vector<std::vector<double>> taus(n_pos);
  std::vector<double> phrase_pulses;
  const auto& pos = alignment.positions;

  std::size_t i = 0;
  while (i < pos.size()) {
    std::size_t j = i;
    while (j < pos.size() && pos[j].phrase == pos[i].phrase && pos[j].segment == pos[i].segment) ++j;
    // pos[i, j) is one phrase; pos[j] must open the next phrase in the same segment.
    bool complete = (j - i) == n_pos && j < pos.size() && pos[j].segment == pos[i].segment &&
                    pos[j].phrase == pos[i].phrase + 1 && pos[j].position == 0;
    for (std::size_t k = 0; complete && k < n_pos; ++k) {
      complete = pos[i + k].position == static_cast<int>(k);
    }
    if (complete) {
      for (std::size_t k = 0; k < n_pos; ++k) {
        double t0 = onsets[pos[i + k].onset_index].time_s;
        double t1 = onsets[pos[i + k + 1].onset_index].time_s;
        taus[k].push_back(t1 - t0);
      }
      double span = onsets[pos[j].onset_index].time_s - onsets[pos[i].onset_index].time_s;
      phrase_pulses.push_back(span / t.phrase_units);
      ++profile.complete_phrases;
    }
    i = j;
  }

  if (!phrase_pulses.empty()) {
    profile.phrase_base_s =
        std::accumulate(phrase_pulses.begin(), phrase_pulses.end(), 0.0) / phrase_pulses.size();
  }
  for (std::size_t k = 0; k < n_pos; ++k) {
    PositionStats ps;
    ps.position = static_cast<int>(k);
    int next_unit = k + 1 < n_pos ? t.position_units[k + 1] : t.phrase_units;
    ps.multiple = next_unit - t.position_units[k];
    auto m = moments(taus[k]);
    ps.mean = m.mean;
    ps.stddev = m.stddev;
    ps.n = taus[k].size();
    if (ps.mean && profile.phrase_base_s) {
      double b = *profile.phrase_base_s;
      ps.deviation_pct = 100.0 * (*ps.mean / ps.multiple - b) / b;
    }
    profile.positions.push_back(ps);
  }
  return profile;
}

PhraseProfile phrase_amplitude_profile(const OnsetSeries& onsets, const PhraseAlignment& alignment) {
  const std::size_t n_pos = alignment.phrase_template.size();
  PhraseProfile profile;
  profile.kind = ProfileKind::kAmplitude;
  profile.template_length = n_pos;

  std::vector<std::vector<double>> amps(n_pos);
  for (const auto& g : alignment.positions) {
    if (g.position < 0) continue;
    amps[static_cast<std::size_t>(g.position)].push_back(onsets[g.onset_index].amplitude);
  }
  for (std::size_t k = 0; k < n_pos; ++k) {
    PositionStats ps;
    ps.position = static_cast<int>(k);
    auto m = moments(amps[k]);
    ps.mean = m.mean;
    ps.stddev = m.stddev;
    ps.n = amps[k].size();
    profile.positions.push_back(ps);
  }
  return profile;
}

}  // namespace groove

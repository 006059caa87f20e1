#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "groove/audio.h"
#include "groove/error.h"

namespace groove {
namespace {

struct SectionState {
  double z1 = 0.0;
  double z2 = 0.0;
};

// Steady-state section states for a unit constant input into the cascade.
std::vector<SectionState> steady_state(const std::vector<Biquad>& sos) {
  std::vector<SectionState> zi(sos.size());
  double level = 1.0;
  for (std::size_t i = 0; i < sos.size(); ++i) {
    const Biquad& s = sos[i];
    double gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    double y = gain * level;
    zi[i].z2 = s.b2 * level - s.a2 * y;
    zi[i].z1 = y - s.b0 * level;
    level = y;
  }
  return zi;
}

void run_cascade(const std::vector<Biquad>& sos, std::vector<SectionState> state, double scale,
                 std::vector<double>& x) {
  for (auto& st : state) {
    st.z1 *= scale;
    st.z2 *= scale;
  }
  for (double& v : x) {
    double in = v;
    for (std::size_t i = 0; i < sos.size(); ++i) {
      const Biquad& s = sos[i];
      SectionState& st = state[i];
      double out = s.b0 * in + st.z1;
      st.z1 = s.b1 * in - s.a1 * out + st.z2;
      st.z2 = s.b2 * in - s.a2 * out;
      in = out;
    }
    v = in;
  }
}

void one_pole(std::vector<double>& x, double coeff) {
  if (x.empty()) return;
  double y = x.front();
  for (double& v : x) {
    y += coeff * (v - y);
    v = y;
  }
}

}  // namespace

std::vector<Biquad> design_butterworth_highpass(int order, double cutoff_hz, double sample_rate) {
  if (order < 2 || order % 2 != 0) throw ParameterError("Butterworth order must be even and >= 2");
  if (!(sample_rate > 0)) throw ParameterError("sample rate must be positive");
  if (!(cutoff_hz > 0) || !(cutoff_hz < sample_rate / 2)) {
    throw ParameterError("cutoff " + std::to_string(cutoff_hz) + " Hz must lie in (0, " +
                         std::to_string(sample_rate / 2) + ") Hz");
  }
  const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate);
  const double k2 = k * k;
  std::vector<Biquad> sos;
  for (int p = 1; p <= order / 2; ++p) {
    double zeta = std::sin(std::numbers::pi * (2.0 * p - 1.0) / (2.0 * order));
    double norm = 1.0 + 2.0 * zeta * k + k2;
    sos.push_back({1.0 / norm, -2.0 / norm, 1.0 / norm, 2.0 * (k2 - 1.0) / norm,
                   (1.0 - 2.0 * zeta * k + k2) / norm});
  }
  return sos;
}

AudioClip highpass(const AudioClip& clip, double cutoff_hz) {
  const auto sos = design_butterworth_highpass(4, cutoff_hz, clip.sample_rate);
  AudioClip out = clip;
  const std::size_t n = clip.samples.size();
  if (n == 0) return out;

  const std::size_t pad =
      std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::ceil(6.0 * clip.sample_rate / cutoff_hz)));
  const auto& x = clip.samples;
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x.front() - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x.back() - x[n - 1 - i]);

  const auto zi = steady_state(sos);
  run_cascade(sos, zi, ext.front(), ext);
  std::reverse(ext.begin(), ext.end());
  run_cascade(sos, zi, ext.front(), ext);
  std::reverse(ext.begin(), ext.end());

  std::copy(ext.begin() + static_cast<std::ptrdiff_t>(pad),
            ext.begin() + static_cast<std::ptrdiff_t>(pad + n), out.samples.begin());
  return out;
}

EnvelopeSignal envelope(const AudioClip& clip, double smoothing_ms, SmoothingMode mode) {
  if (!(smoothing_ms > 0)) throw ParameterError("smoothing_ms must be positive");
  if (!(clip.sample_rate > 0)) throw ParameterError("sample rate must be positive");

  EnvelopeSignal env;
  env.sample_rate = clip.sample_rate;
  env.values.resize(clip.samples.size());
  std::transform(clip.samples.begin(), clip.samples.end(), env.values.begin(),
                 [](double s) { return std::abs(s); });

  const double coeff = 1.0 - std::exp(-1.0 / (smoothing_ms * 1e-3 * clip.sample_rate));
  one_pole(env.values, coeff);
  if (mode == SmoothingMode::kZeroPhase) {
    std::reverse(env.values.begin(), env.values.end());
    one_pole(env.values, coeff);
    std::reverse(env.values.begin(), env.values.end());
  }

  const double peak = env.values.empty() ? 0.0 : *std::max_element(env.values.begin(), env.values.end());
  env.source_max = peak;
  if (peak <= 0.0) {
    env.silent = true;
    std::fill(env.values.begin(), env.values.end(), 0.0);
    return env;
  }
  for (double& v : env.values) v /= peak;
  return env;
}

}  // namespace groove

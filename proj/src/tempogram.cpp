#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "fft.h"
#include "groove/error.h"
#include "groove/tempogram.h"

namespace groove {
namespace {

std::vector<double> hann(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  return w;
}

// Copies x[centre - n/2, centre + n/2) into frame with zeros outside x, applying `window`.
void centred_frame(const std::vector<double>& x, long centre, const std::vector<double>& window,
                   std::vector<double>& frame) {
  const long n = static_cast<long>(window.size());
  const long start = centre - n / 2;
  frame.assign(window.size(), 0.0);
  for (long i = std::max(0L, -start); i < n && start + i < static_cast<long>(x.size()); ++i) {
    frame[i] = x[start + i] * window[i];
  }
}

}  // namespace

NoveltyCurve novelty_curve(const AudioClip& clip, const NoveltyParams& params) {
  if (params.fft_size < 2 || params.hop < 1) throw ParameterError("invalid STFT parameters");
  if (!(params.compression > 0)) throw ParameterError("compression constant must be positive");
  if (!(clip.sample_rate > 0)) throw ParameterError("sample rate must be positive");

  NoveltyCurve out;
  out.rate_hz = clip.sample_rate / params.hop;
  if (clip.samples.empty()) return out;

  const std::size_t frames = 1 + clip.samples.size() / params.hop;
  const auto window = hann(params.fft_size);
  detail::RealFft fft(static_cast<std::size_t>(params.fft_size));
  std::vector<std::vector<double>> mag(frames);
  std::vector<double> frame;
  std::vector<std::complex<double>> spec;
  double peak = 0.0;
  for (std::size_t n = 0; n < frames; ++n) {
    centred_frame(clip.samples, static_cast<long>(n) * params.hop, window, frame);
    fft.forward(frame, spec);
    mag[n].resize(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
      mag[n][k] = std::abs(spec[k]);
      peak = std::max(peak, mag[n][k]);
    }
  }

  out.values.assign(frames, 0.0);
  if (peak <= 0.0) return out;

  const double floor = std::pow(10.0, params.min_db / 20.0);
  for (auto& row : mag) {
    for (double& m : row) m = std::log1p(params.compression * std::max(m / peak, floor));
  }
  for (std::size_t n = 1; n < frames; ++n) {
    double flux = 0.0;
    for (std::size_t k = 0; k < mag[n].size(); ++k) flux += std::max(0.0, mag[n][k] - mag[n - 1][k]);
    out.values[n] = flux;
  }
  return out;
}

Tempogram fourier_tempogram(const NoveltyCurve& novelty, const TempogramParams& params) {
  if (params.window_length < 2 || params.hop < 1 || params.fft_length < params.window_length) {
    throw ParameterError("invalid tempogram window, hop or FFT length");
  }
  if (!(params.min_bpm > 0 && params.min_bpm < params.max_bpm)) {
    throw ParameterError("tempo range must satisfy 0 < min_bpm < max_bpm");
  }
  if (!(novelty.rate_hz > 0)) throw ParameterError("novelty rate must be positive");
  if (novelty.values.size() < static_cast<std::size_t>(params.window_length)) {
    throw LengthError("novelty curve has " + std::to_string(novelty.values.size()) +
                      " frames, shorter than the tempogram window of " + std::to_string(params.window_length));
  }

  Tempogram tg;
  tg.params = params;
  std::vector<std::size_t> bins;
  const double bin_bpm = novelty.rate_hz / params.fft_length * 60.0;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(params.fft_length / 2); ++k) {
    double bpm = k * bin_bpm;
    if (bpm >= params.min_bpm && bpm <= params.max_bpm) {
      bins.push_back(k);
      tg.tempi_bpm.push_back(bpm);
    }
  }
  if (bins.empty()) throw ParameterError("no FFT bin falls inside the tempo range");

  const auto window = hann(params.window_length);
  detail::RealFft fft(static_cast<std::size_t>(params.fft_length));
  const std::size_t frames = 1 + novelty.values.size() / params.hop;
  std::vector<double> frame;
  std::vector<std::complex<double>> spec;
  tg.magnitude.resize(frames);
  for (std::size_t m = 0; m < frames; ++m) {
    centred_frame(novelty.values, static_cast<long>(m) * params.hop, window, frame);
    fft.forward(frame, spec);
    auto& row = tg.magnitude[m];
    row.resize(bins.size());
    for (std::size_t j = 0; j < bins.size(); ++j) row[j] = std::abs(spec[bins[j]]) / params.window_length;
    tg.times_s.push_back(static_cast<double>(m * params.hop) / novelty.rate_hz);
  }
  return tg;
}

std::vector<double> tempo_weights(const Tempogram& tempogram) {
  std::vector<double> w;
  w.reserve(tempogram.tempi_bpm.size());
  const double sigma = tempogram.params.prior_octaves;
  for (double bpm : tempogram.tempi_bpm) {
    double z = std::log2(bpm / tempogram.params.ref_bpm) / sigma;
    w.push_back(std::exp(-0.5 * z * z));
  }
  return w;
}

std::vector<double> argmax_track(const Tempogram& tempogram) {
  const auto w = tempo_weights(tempogram);
  std::vector<double> track;
  track.reserve(tempogram.magnitude.size());
  for (const auto& row : tempogram.magnitude) {
    std::size_t best = 0;
    double best_v = -1.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      double v = row[j] * w[j];
      if (v > best_v) {
        best_v = v;
        best = j;
      }
    }
    track.push_back(tempogram.tempi_bpm[best]);
  }
  return track;
}

CyclicTempogram cyclic_tempogram(const Tempogram& tempogram) {
  const int classes = tempogram.params.octave_divider;
  if (classes < 1) throw ParameterError("octave divider must be positive");
  CyclicTempogram out;
  out.times_s = tempogram.times_s;
  for (int c = 0; c < classes; ++c) out.class_offsets.push_back(static_cast<double>(c) / classes);

  std::vector<int> class_of;
  for (double bpm : tempogram.tempi_bpm) {
    double octave = std::log2(bpm / tempogram.params.ref_bpm);
    double frac = octave - std::floor(octave);
    class_of.push_back(static_cast<int>(std::lround(frac * classes)) % classes);
  }
  for (const auto& row : tempogram.magnitude) {
    std::vector<double> folded(static_cast<std::size_t>(classes), 0.0);
    for (std::size_t j = 0; j < row.size(); ++j) folded[class_of[j]] += row[j];
    out.magnitude.push_back(std::move(folded));
  }
  return out;
}

}  // namespace groove

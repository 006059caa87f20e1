#pragma once

#include <vector>

#include "groove/audio.h"

namespace groove {

struct NoveltyParams {
  int fft_size = 1024;
  int hop = 512;
  double compression = 1000.0;  // C in log(1 + C |X|)
  double min_db = -74.0;        // spectrogram floor relative to its peak
};

/// Spectral-flux novelty sampled at one value per STFT hop.
struct NoveltyCurve {
  std::vector<double> values;
  double rate_hz = 0.0;
};

/// Centered Hann STFT, magnitudes floored at `min_db` below the global peak,
/// log-compressed, then half-wave-rectified frame differences summed over bins.
/// Frame n is centered on sample n * hop. Silence gives an all-zero curve.
NoveltyCurve novelty_curve(const AudioClip& clip, const NoveltyParams& params = {});

struct TempogramParams {
  int window_length = 1024;  // novelty frames
  int hop = 64;              // novelty frames
  int fft_length = 4096;
  double min_bpm = 30.0;
  double max_bpm = 360.0;
  double ref_bpm = 84.0;
  int octave_divider = 60;
  double prior_octaves = 1.0;  // width of the log-tempo weighting around ref_bpm
};

struct Tempogram {
  std::vector<double> times_s;
  std::vector<double> tempi_bpm;
  std::vector<std::vector<double>> magnitude;  // [frame][tempo]
  TempogramParams params;
};

/// Short-time Fourier magnitude of the novelty curve at the FFT bins whose
/// frequency lies in [min_bpm, max_bpm] / 60 Hz. Windows are centered on
/// novelty index m * hop. Throws LengthError when the novelty curve is shorter
/// than the window and ParameterError for an empty tempo range.
Tempogram fourier_tempogram(const NoveltyCurve& novelty, const TempogramParams& params = {});

/// Log-Gaussian weighting centered on ref_bpm with `prior_octaves` standard deviation.
std::vector<double> tempo_weights(const Tempogram& tempogram);

/// Weighted per-frame argmax tempo in BPM.
std::vector<double> argmax_track(const Tempogram& tempogram);

/// Octave-folded tempogram: `octave_divider` classes over log2(bpm / ref_bpm) mod 1.
struct CyclicTempogram {
  std::vector<double> times_s;
  std::vector<double> class_offsets;  // fraction of an octave above ref_bpm
  std::vector<std::vector<double>> magnitude;
};

CyclicTempogram cyclic_tempogram(const Tempogram& tempogram);

}  // namespace groove

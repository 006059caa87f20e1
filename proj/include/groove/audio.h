#pragma once

#include <filesystem>
#include <vector>

namespace groove {

/// Mono audio buffer. Samples are full-scale normalized (1.0 = 0 dBFS).
struct AudioClip {
  std::vector<double> samples;
  double sample_rate = 0.0;
  int channel_count_original = 1;

  double duration_s() const { return sample_rate > 0 ? samples.size() / sample_rate : 0.0; }
};

/// Smoothed amplitude envelope, normalized to a peak of 1.0 unless silent.
struct EnvelopeSignal {
  std::vector<double> values;
  double sample_rate = 0.0;
  double source_max = 0.0;  // peak before normalization
  bool silent = false;

  double time_of(std::size_t index) const { return index / sample_rate; }
};

enum class SampleEncoding { kPcm16, kPcm24, kFloat32 };

/// Reads a RIFF/WAVE file (16/24-bit PCM or 32-bit float, 1-2 channels, >= 8 kHz).
/// Stereo is downmixed by per-sample mean.
/// Throws IoError if the file cannot be read and FormatError for unsupported encodings.
AudioClip load_audio(const std::filesystem::path& path);

/// Writes a mono RIFF/WAVE file. Samples are clipped to [-1, 1] for integer encodings.
void write_wav(const std::filesystem::path& path, const AudioClip& clip,
               SampleEncoding encoding = SampleEncoding::kPcm16);

/// Second-order section in transposed direct form II, a0 normalized to 1.
struct Biquad {
  double b0, b1, b2;
  double a1, a2;
};

/// Butterworth high-pass of even `order` designed by bilinear transform with
/// prewarping, returned as cascaded second-order sections.
std::vector<Biquad> design_butterworth_highpass(int order, double cutoff_hz, double sample_rate);

/// Zero-phase (forward-backward) 4th-order Butterworth high-pass. Edges are
/// handled with odd reflection and steady-state initial conditions, so a
/// constant input maps to (numerically) zero. Output length equals input length.
/// Throws ParameterError unless 0 < cutoff_hz < sample_rate / 2.
AudioClip highpass(const AudioClip& clip, double cutoff_hz);

enum class SmoothingMode { kZeroPhase, kCausal };

/// Full-wave rectification followed by a first-order low-pass with time
/// constant `smoothing_ms`. The default applies the low-pass forward and
/// backward so envelope maxima are not delayed.
EnvelopeSignal envelope(const AudioClip& clip, double smoothing_ms = 2.0,
                        SmoothingMode mode = SmoothingMode::kZeroPhase);

}  // namespace groove

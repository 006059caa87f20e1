#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <unistd.h>
#include <random>
#include <string>
#include <vector>

#include "groove/audio.h"
#include "groove/onsets.h"

namespace testutil {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("groove_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void put_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}

inline void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

/// Hand-assembled RIFF/WAVE file with arbitrary format tag and payload.
inline void write_raw_wav(const std::filesystem::path& path, std::uint16_t tag, std::uint16_t channels,
                          std::uint32_t rate, std::uint16_t bits, const std::string& payload) {
  std::string fmt;
  put_u16(fmt, tag);
  put_u16(fmt, channels);
  put_u32(fmt, rate);
  put_u32(fmt, rate * channels * bits / 8);
  put_u16(fmt, static_cast<std::uint16_t>(channels * bits / 8));
  put_u16(fmt, bits);
  std::string body = "WAVE";
  body += "fmt ";
  put_u32(body, static_cast<std::uint32_t>(fmt.size()));
  body += fmt;
  body += "data";
  put_u32(body, static_cast<std::uint32_t>(payload.size()));
  body += payload;
  std::string file = "RIFF";
  put_u32(file, static_cast<std::uint32_t>(body.size()));
  file += body;
  std::ofstream(path, std::ios::binary) << file;
}

inline groove::AudioClip sine(double freq, double seconds, double rate = 44100.0, double amp = 0.5) {
  groove::AudioClip clip;
  clip.sample_rate = rate;
  clip.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    clip.samples[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / rate);
  }
  return clip;
}

inline double rms(const std::vector<double>& x, std::size_t begin, std::size_t end) {
  double ss = 0.0;
  for (std::size_t i = begin; i < end; ++i) ss += x[i] * x[i];
  return std::sqrt(ss / (end - begin));
}

inline std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

inline groove::OnsetSeries onsets_at(const std::vector<double>& times, double amplitude = 0.5) {
  groove::OnsetSeries s;
  for (double t : times) {
    groove::Onset o;
    o.time_s = t;
    o.amplitude = amplitude;
    o.label = groove::OnsetLabel::kHihat;
    s.push_back(o);
  }
  return s;
}

}  // namespace testutil

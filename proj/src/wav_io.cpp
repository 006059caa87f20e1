#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "groove/audio.h"
#include "groove/error.h"
#include "groove/io.h"

namespace groove {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::string describe_format(std::uint16_t tag, std::uint16_t bits) {
  std::string name;
  switch (tag) {
    case kFormatPcm: name = "integer PCM"; break;
    case kFormatFloat: name = "IEEE float"; break;
    case 0x0002: name = "MS ADPCM"; break;
    case 0x0006: name = "A-law"; break;
    case 0x0007: name = "mu-law"; break;
    case 0x0011: name = "IMA ADPCM"; break;
    case 0x0055: name = "MPEG layer 3"; break;
    default: name = "format tag 0x" + [&] {
        char buf[8];
        std::snprintf(buf, sizeof buf, "%04X", tag);
        return std::string(buf);
      }();
  }
  return name + ", " + std::to_string(bits) + " bits per sample";
}

}  // namespace

AudioClip load_audio(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open audio file '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("'" + path.string() + "' is not a RIFF/WAVE file");
  }

  std::uint16_t tag = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    std::uint32_t size = read_u32(chunk + 4);
    std::size_t body = pos + 8;
    std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw FormatError("truncated fmt chunk in '" + path.string() + "'");
      const std::uint8_t* f = bytes.data() + body;
      tag = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      block_align = read_u16(f + 12);
      bits = read_u16(f + 14);
      if (tag == kFormatExtensible) {
        if (avail < 26) throw FormatError("truncated extensible fmt chunk");
        // First two bytes of the subformat GUID carry the plain format tag.
        tag = read_u16(f + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = avail;
    }
    pos = body + size + (size & 1u);
  }

  if (channels == 0 || rate == 0) throw FormatError("missing fmt chunk in '" + path.string() + "'");
  if (!data) throw FormatError("missing data chunk in '" + path.string() + "'");

  bool supported = (tag == kFormatPcm && (bits == 16 || bits == 24)) ||
                   (tag == kFormatFloat && bits == 32);
  if (!supported) throw FormatError("unsupported encoding: " + describe_format(tag, bits));
  if (channels > 2) {
    throw FormatError("unsupported channel count " + std::to_string(channels) + " (1-2 supported)");
  }
  if (rate < 8000) throw FormatError("unsupported sample rate " + std::to_string(rate) + " Hz");

  const std::size_t bytes_per_sample = bits / 8;
  if (block_align != bytes_per_sample * channels) block_align = static_cast<std::uint16_t>(bytes_per_sample * channels);
  const std::size_t frames = data_size / block_align;

  auto decode = [&](const std::uint8_t* p) -> double {
    if (tag == kFormatFloat) {
      float f;
      std::uint32_t u = read_u32(p);
      std::memcpy(&f, &u, sizeof f);
      return static_cast<double>(f);
    }
    if (bits == 16) return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
    std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
    if (v & 0x800000) v -= 0x1000000;
    return v / 8388608.0;
  };

  AudioClip clip;
  clip.sample_rate = rate;
  clip.channel_count_original = channels;
  clip.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::uint8_t* frame = data + i * block_align;
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) acc += decode(frame + c * bytes_per_sample);
    double v = acc / channels;
    if (!std::isfinite(v)) throw FormatError("non-finite sample at frame " + std::to_string(i));
    clip.samples[i] = std::clamp(v, -1.0, 1.0);
  }
  return clip;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip, SampleEncoding encoding) {
  if (clip.sample_rate <= 0) throw ParameterError("sample rate must be positive");
  const std::uint16_t bits = encoding == SampleEncoding::kPcm16 ? 16 : encoding == SampleEncoding::kPcm24 ? 24 : 32;
  const std::uint16_t tag = encoding == SampleEncoding::kFloat32 ? kFormatFloat : kFormatPcm;
  const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(clip.sample_rate));
  const std::uint16_t block = bits / 8;
  const std::uint32_t data_size = static_cast<std::uint32_t>(clip.samples.size() * block);

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put_u32(out, 36 + data_size + (data_size & 1u));
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, tag);
  put_u16(out, 1);
  put_u32(out, rate);
  put_u32(out, rate * block);
  put_u16(out, block);
  put_u16(out, bits);
  out += "data";
  put_u32(out, data_size);
  for (double s : clip.samples) {
    switch (encoding) {
      case SampleEncoding::kPcm16: {
        auto v = static_cast<std::int16_t>(std::clamp(std::lround(s * 32768.0), -32768L, 32767L));
        put_u16(out, static_cast<std::uint16_t>(v));
        break;
      }
      case SampleEncoding::kPcm24: {
        auto v = static_cast<std::int32_t>(std::clamp(std::lround(s * 8388608.0), -8388608L, 8388607L));
        for (int i = 0; i < 3; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        break;
      }
      case SampleEncoding::kFloat32: {
        float f = static_cast<float>(s);
        std::uint32_t u;
        std::memcpy(&u, &f, sizeof u);
        put_u32(out, u);
        break;
      }
    }
  }
  if (data_size & 1u) out.push_back('\0');

  atomic_write(path, out);
}

}  // namespace groove

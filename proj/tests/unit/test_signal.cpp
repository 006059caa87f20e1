#include <doctest.h>

#include <algorithm>
#include <complex>
#include <numbers>

#include "groove/audio.h"
#include "groove/error.h"
#include "helpers.h"
#include "oracles/butterworth.h"

using namespace groove;

namespace {

std::complex<double> cascade_response(const std::vector<Biquad>& sos, double f, double fs) {
  const std::complex<double> z1 = std::polar(1.0, -2.0 * std::numbers::pi * f / fs);
  std::complex<double> h = 1.0;
  for (const auto& q : sos) {
    h *= (q.b0 + q.b1 * z1 + q.b2 * z1 * z1) / (1.0 + q.a1 * z1 + q.a2 * z1 * z1);
  }
  return h;
}

double db(double ratio) { return 20.0 * std::log10(ratio); }

}  // namespace

TEST_CASE("wav round trip preserves samples within encoding precision") {
  testutil::TempDir dir("wav");
  AudioClip clip = testutil::sine(440.0, 0.1, 22050.0, 0.8);
  struct Case {
    SampleEncoding enc;
    double tol;
  } cases[] = {{SampleEncoding::kPcm16, 1.0 / 32767}, {SampleEncoding::kPcm24, 1.0 / 8388607},
               {SampleEncoding::kFloat32, 1e-7}};
  for (const auto& c : cases) {
    auto path = dir / "x.wav";
    write_wav(path, clip, c.enc);
    AudioClip back = load_audio(path);
    REQUIRE(back.samples.size() == clip.samples.size());
    CHECK(back.sample_rate == 22050.0);
    double err = 0.0;
    for (std::size_t i = 0; i < clip.samples.size(); ++i) err = std::max(err, std::abs(back.samples[i] - clip.samples[i]));
    CHECK(err <= c.tol);
  }
}

TEST_CASE("one second at 44.1 kHz loads as 44100 samples") {
  testutil::TempDir dir("wav1s");
  AudioClip clip;
  clip.sample_rate = 44100;
  clip.samples.assign(44100, 0.25);
  write_wav(dir / "a.wav", clip);
  CHECK(load_audio(dir / "a.wav").samples.size() == 44100);
}

TEST_CASE("stereo with opposite channels downmixes to silence") {
  testutil::TempDir dir("stereo");
  std::string payload;
  for (int i = 0; i < 1000; ++i) {
    testutil::put_u16(payload, static_cast<std::uint16_t>(16384));
    testutil::put_u16(payload, static_cast<std::uint16_t>(-16384));
  }
  testutil::write_raw_wav(dir / "s.wav", 1, 2, 44100, 16, payload);
  AudioClip clip = load_audio(dir / "s.wav");
  CHECK(clip.channel_count_original == 2);
  REQUIRE(clip.samples.size() == 1000);
  CHECK(*std::max_element(clip.samples.begin(), clip.samples.end()) == 0.0);
  CHECK(*std::min_element(clip.samples.begin(), clip.samples.end()) == 0.0);
}

TEST_CASE("audio loader errors") {
  testutil::TempDir dir("wavbad");
  CHECK_THROWS_AS(load_audio(dir / "missing.wav"), IoError);

  testutil::write_raw_wav(dir / "u8.wav", 1, 1, 44100, 8, std::string(100, '\x80'));
  try {
    load_audio(dir / "u8.wav");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("8 bits") != std::string::npos);
  }
  testutil::write_raw_wav(dir / "alaw.wav", 6, 1, 44100, 8, std::string(100, '\0'));
  try {
    load_audio(dir / "alaw.wav");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("A-law") != std::string::npos);
  }
  testutil::write_raw_wav(dir / "lowrate.wav", 1, 1, 4000, 16, std::string(100, '\0'));
  CHECK_THROWS_AS(load_audio(dir / "lowrate.wav"), FormatError);
  std::ofstream(dir / "junk.wav") << "not audio at all";
  CHECK_THROWS_AS(load_audio(dir / "junk.wav"), FormatError);
}

TEST_CASE("butterworth design matches the analytic magnitude response") {
  for (double fs : {16000.0, 44100.0, 48000.0}) {
    for (double fc : {200.0, 1000.0, 3000.0}) {
      auto sos = design_butterworth_highpass(4, fc, fs);
      CHECK(sos.size() == 2);
      for (double f : {50.0, 150.0, 500.0, 1000.0, 2000.0, 5000.0, 7000.0}) {
        double got = std::norm(cascade_response(sos, f, fs));
        double want = oracle::butterworth_highpass_power(f, fc, fs, 4);
        CHECK(got == doctest::Approx(want).epsilon(1e-9).scale(1.0));
      }
    }
  }
  CHECK_THROWS_AS(design_butterworth_highpass(3, 1000, 44100), ParameterError);
}

TEST_CASE("highpass rejects DC and follows the squared response") {
  AudioClip dc;
  dc.sample_rate = 44100;
  dc.samples.assign(44100, 0.7);
  auto out = highpass(dc, 1000.0);
  CHECK(out.samples.size() == dc.samples.size());
  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak < 1e-6);

  for (double f : {300.0, 500.0, 700.0, 1000.0, 2000.0, 8000.0}) {
    AudioClip in = testutil::sine(f, 1.0);
    AudioClip y = highpass(in, 1000.0);
    std::size_t a = 11025, b = 33075;  // steady-state middle half
    double measured = testutil::rms(y.samples, a, b) / testutil::rms(in.samples, a, b);
    double want = oracle::zero_phase_gain(f, 1000.0, 44100.0, 4);
    CAPTURE(f);
    CHECK(std::abs(db(measured) - db(want)) < 0.05);
  }
  // Passband within 1 dB, deep stopband attenuation.
  AudioClip pass = highpass(testutil::sine(2000.0, 1.0), 1000.0);
  CHECK(std::abs(db(testutil::rms(pass.samples, 11025, 33075) / testutil::rms(testutil::sine(2000.0, 1.0).samples, 11025, 33075))) < 1.0);
  AudioClip stop = highpass(testutil::sine(100.0, 1.0), 1000.0);
  CHECK(db(testutil::rms(stop.samples, 11025, 33075) / (0.5 / std::sqrt(2.0))) <= -40.0);

  CHECK_THROWS_AS(highpass(dc, 22050.0), ParameterError);
  CHECK_THROWS_AS(highpass(dc, 0.0), ParameterError);
}

TEST_CASE("highpass is zero phase") {
  AudioClip pulse;
  pulse.sample_rate = 44100;
  pulse.samples.assign(8820, 0.0);
  const double centre = 4410.0;
  for (int i = -200; i <= 200; ++i) {
    double w = 0.5 + 0.5 * std::cos(std::numbers::pi * i / 200.0);
    pulse.samples[static_cast<std::size_t>(centre + i)] = w * std::sin(2 * std::numbers::pi * 4000.0 * i / 44100.0);
  }
  auto y = highpass(pulse, 1000.0);
  double e = 0.0, m = 0.0;
  for (std::size_t i = 0; i < y.samples.size(); ++i) {
    e += y.samples[i] * y.samples[i];
    m += i * y.samples[i] * y.samples[i];
  }
  CHECK(std::abs(m / e - centre) / 44.1 < 0.5);

  // Cascading the filter leaves passband RMS within 1 dB.
  AudioClip s = testutil::sine(3000.0, 0.5);
  auto twice = highpass(highpass(s, 1000.0), 1000.0);
  CHECK(std::abs(db(testutil::rms(twice.samples, 5000, 17000) / testutil::rms(s.samples, 5000, 17000))) < 1.0);
}

TEST_CASE("envelope basics") {
  AudioClip silent;
  silent.sample_rate = 44100;
  silent.samples.assign(1000, 0.0);
  auto env = envelope(silent);
  CHECK(env.silent);
  CHECK(std::all_of(env.values.begin(), env.values.end(), [](double v) { return v == 0.0; }));

  AudioClip impulse = silent;
  impulse.samples.assign(44100, 0.0);
  impulse.samples[22050] = 1.0;
  for (auto mode : {SmoothingMode::kZeroPhase, SmoothingMode::kCausal}) {
    auto e = envelope(impulse, 2.0, mode);
    auto it = std::max_element(e.values.begin(), e.values.end());
    CHECK(*it == doctest::Approx(1.0));
    CHECK(std::abs(e.time_of(static_cast<std::size_t>(it - e.values.begin())) - 0.5) <= 0.002);
    CHECK(std::all_of(e.values.begin(), e.values.end(), [](double v) { return v >= 0.0; }));
  }
  CHECK_THROWS_AS(envelope(impulse, 0.0), ParameterError);
}

TEST_CASE("two equal clicks give equal envelope maxima and scaling only changes source_max") {
  AudioClip clip;
  clip.sample_rate = 44100;
  clip.samples.assign(44100, 0.0);
  for (double t : {0.3, 0.5}) {
    std::size_t c = static_cast<std::size_t>(t * 44100);
    for (int j = -150; j <= 150; ++j) {
      double w = 0.5 + 0.5 * std::cos(std::numbers::pi * j / 150.0);
      clip.samples[c + j] = w * std::sin(2 * std::numbers::pi * 5000.0 * j / 44100.0);
    }
  }
  auto e = envelope(highpass(clip, 1000.0));
  double m1 = *std::max_element(e.values.begin() + 11025, e.values.begin() + 16000);
  double m2 = *std::max_element(e.values.begin() + 19845, e.values.begin() + 24000);
  CHECK(m1 == doctest::Approx(m2).epsilon(0.01));

  AudioClip scaled = clip;
  for (double& v : scaled.samples) v *= 3.0;
  auto e3 = envelope(scaled);
  auto e1 = envelope(clip);
  CHECK(e3.source_max == doctest::Approx(3.0 * e1.source_max));
  double diff = 0.0;
  for (std::size_t i = 0; i < e1.values.size(); ++i) diff = std::max(diff, std::abs(e1.values[i] - e3.values[i]));
  CHECK(diff < 1e-12);
}

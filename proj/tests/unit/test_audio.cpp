// Copyright 2026  srcver authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "helpers.hpp"
#include "srcver/audio.hpp"
#include "srcver/fft.hpp"

using namespace srcver;
using testing::code_of;

TEST_SUITE_BEGIN("audio");

namespace {

std::vector<float> tone(double hz, int rate, std::size_t n, double amp = 0.5) {
  std::vector<float> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = static_cast<float>(amp * std::sin(2 * std::numbers::pi * hz * i / rate));
  return x;
}

}  // namespace

TEST_CASE("16 kHz mono PCM16 passes through") {
  const auto dir = testing::scratch("audio_pass");
  const auto x = tone(440, 16000, 64000);
  write_wav(dir / "a.wav", {x, 16000}, SampleFormat::kPcm16);
  const AudioClip clip = load_audio(dir / "a.wav");
  REQUIRE(clip.samples.size() == 64000);
  CHECK(clip.sample_rate == 16000);
  for (std::size_t i = 0; i < x.size(); i += 997)
    CHECK(std::abs(clip.samples[i] - x[i]) <= 1.0f / 32767);

  write_wav(dir / "f.wav", {x, 16000}, SampleFormat::kFloat32);
  CHECK(load_audio(dir / "f.wav").samples == x);
  CHECK(read_wav(dir / "f.wav").format == SampleFormat::kFloat32);
}

TEST_CASE("stereo x and -x downmix to silence") {
  const auto dir = testing::scratch("audio_stereo");
  const auto x = tone(300, 16000, 8000);
  std::vector<float> inter;
  for (float v : x) {
    inter.push_back(v);
    inter.push_back(-v);
  }
  for (auto fmt : {SampleFormat::kPcm16, SampleFormat::kFloat32}) {
    const auto bytes = encode_wav(inter, 2, 16000, fmt);
    testing::spit(dir / "s.wav", std::string(bytes.begin(), bytes.end()));
    const AudioClip clip = load_audio(dir / "s.wav");
    REQUIRE(clip.samples.size() == 8000);
    for (float v : clip.samples) REQUIRE(v == 0.0f);
  }
}

TEST_CASE("8 kHz tone resamples cleanly to 16 kHz") {
  const auto up = resample(tone(1000, 8000, 8000), 8000, 16000);
  REQUIRE(up.size() == 16000);
  const double peak = oracle::windowed_dft_magnitude(up, 1000, 16000);
  double worst = 0;
  for (double f = 4050; f <= 8000; f += 50)
    worst = std::max(worst, oracle::windowed_dft_magnitude(up, f, 16000));
  CHECK(20 * std::log10(worst / peak) <= -60.0);

  // Same tone at the two rates agrees away from the edges.
  const auto ref = tone(1000, 16000, 16000);
  for (std::size_t i = 2000; i < 14000; i += 101)
    CHECK(up[i] == doctest::Approx(ref[i]).epsilon(0.01).scale(0.5));
}

TEST_CASE("resampler lengths and identity") {
  CHECK(resample(std::vector<float>(44100, 0.1f), 44100, 16000).size() == 16000);
  CHECK(resample(std::vector<float>(1001, 0.1f), 48000, 16000).size() == 334);
  CHECK(resample(std::vector<float>(22050, 0.1f), 22050, 16000).size() == 16000);
  const auto x = tone(123, 16000, 500);
  CHECK(resample(x, 16000, 16000) == x);
}

TEST_CASE("malformed wav files") {
  std::vector<std::uint8_t> junk{'R', 'I', 'F', 'F', 0, 0, 0, 0, 'A', 'V', 'I', ' '};
  CHECK(code_of([&] { parse_wav(junk); }) == Errc::kUnsupportedFormat);
  auto good = encode_wav(tone(100, 16000, 100), 1, 16000, SampleFormat::kPcm16);
  auto truncated = good;
  truncated.resize(30);
  CHECK(code_of([&] { parse_wav(truncated); }) == Errc::kCorruptFile);
  auto eight_bit = good;
  eight_bit[34] = 8;  // bits per sample
  CHECK(code_of([&] { parse_wav(eight_bit); }) == Errc::kUnsupportedFormat);
  CHECK(code_of([] { read_wav("/nonexistent.wav"); }) == Errc::kIoError);
}

TEST_CASE("fft matches a direct DFT") {
  std::vector<std::complex<double>> x(64);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = {std::sin(0.3 * i * i), std::cos(1.7 * i)};
  auto y = x;
  fft_inplace(y);
  for (std::size_t k = 0; k < x.size(); ++k) {
    std::complex<double> acc = 0;
    for (std::size_t n = 0; n < x.size(); ++n)
      acc += x[n] * std::polar(1.0, -2 * std::numbers::pi * k * n / 64.0);
    CHECK(std::abs(acc - y[k]) < 1e-10);
  }
  fft_inplace(y, true);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - x[i]) < 1e-12);
  CHECK(next_pow2(400) == 512);
  CHECK(next_pow2(512) == 512);
}

TEST_SUITE_END();

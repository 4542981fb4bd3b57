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
#include <random>

#include "../oracles.hpp"
#include "helpers.hpp"
#include "srcver/perturb.hpp"

using namespace srcver;
using testing::code_of;

TEST_SUITE_BEGIN("perturb");

namespace {

// Unit-power tone: amplitude sqrt(2).
AudioClip unit_tone(std::size_t n) {
  AudioClip clip;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    clip.samples[i] =
        static_cast<float>(std::sqrt(2.0) * std::sin(2 * std::numbers::pi * 440.0 * i / 16000));
  return clip;
}

std::vector<float> random_signal(std::mt19937_64 &gen, std::size_t n) {
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<float> x(n);
  for (auto &v : x) v = u(gen);
  return x;
}

}  // namespace

TEST_CASE("noise at 20 dB on a unit-power signal") {
  const AudioClip clean = unit_tone(32000);
  CHECK(signal_power(clean.samples) == doctest::Approx(1.0).epsilon(1e-3));
  const AudioClip noisy = add_noise(clean, 20.0, 1);
  double p = 0;
  for (std::size_t i = 0; i < clean.samples.size(); ++i) {
    const double d = static_cast<double>(noisy.samples[i]) - clean.samples[i];
    p += d * d;
  }
  p /= clean.samples.size();
  CHECK(p == doctest::Approx(0.01).epsilon(0.02));
  CHECK(measured_snr_db(clean.samples, noisy.samples) == doctest::Approx(20.0).epsilon(0.005));
  CHECK(add_noise(clean, 20.0, 1).samples == noisy.samples);
  CHECK(add_noise(clean, 20.0, 2).samples != noisy.samples);
}

TEST_CASE("noise at 80 dB barely moves the signal") {
  const AudioClip clean = unit_tone(16000);
  const AudioClip noisy = add_noise(clean, 80.0, 3);
  double worst = 0;
  for (std::size_t i = 0; i < clean.samples.size(); ++i)
    worst = std::max(worst, std::abs(static_cast<double>(noisy.samples[i]) - clean.samples[i]));
  CHECK(worst < 1e-3);
  CHECK(code_of([] { add_noise(AudioClip{std::vector<float>(100, 0.0f)}, 20, 1); }) ==
        Errc::kSilentInput);
}

TEST_CASE("draw_snr") {
  CHECK(draw_snr(20, 20, 5, 9) == 20.0);
  CHECK(draw_snr(15, 25, 5, 9) == draw_snr(15, 25, 5, 9));
  double sum = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double s = draw_snr(15, 25, 77, i);
    REQUIRE(s >= 15.0);
    REQUIRE(s <= 25.0);
    sum += s;
  }
  CHECK(sum / 10000 >= 19.7);
  CHECK(sum / 10000 <= 20.3);
  CHECK(code_of([] { draw_snr(25, 15, 0, 0); }) == Errc::kInvalidArgument);
}

TEST_CASE("impulse responses: identity and delay") {
  std::mt19937_64 gen(4);
  const AudioClip clip{random_signal(gen, 4000)};
  AudioClip delta{{1.0f}};
  CHECK(convolve_ir(clip, delta).samples == clip.samples);

  AudioClip delayed{std::vector<float>(101, 0.0f)};
  delayed.samples[100] = 1.0f;
  const AudioClip shifted = convolve_ir(clip, delayed);
  REQUIRE(shifted.samples.size() == clip.samples.size());
  double peak_in = 0, peak_shifted = 0;
  for (float v : clip.samples) peak_in = std::max(peak_in, std::abs(static_cast<double>(v)));
  for (std::size_t i = 0; i < 3900; ++i)
    peak_shifted = std::max(peak_shifted, std::abs(static_cast<double>(clip.samples[i])));
  const double gain = peak_in / peak_shifted;
  for (std::size_t i = 0; i < 100; ++i) CHECK(shifted.samples[i] == 0.0f);
  for (std::size_t i = 100; i < 4000; ++i)
    CHECK(shifted.samples[i] ==
          doctest::Approx(gain * clip.samples[i - 100]).epsilon(1e-6).scale(1e-6));

  CHECK(code_of([&] { convolve_ir(clip, AudioClip{}); }) == Errc::kEmptyIR);
  CHECK(code_of([&] { convolve_ir(clip, AudioClip{{1.0f}, 8000}); }) == Errc::kRateMismatch);
}

TEST_CASE("FFT convolution agrees with the direct oracle") {
  std::mt19937_64 gen(8);
  for (std::size_t taps : {1025, 2000, 3001}) {
    const auto x = random_signal(gen, 5000);
    const auto h = random_signal(gen, taps);
    const auto fast = convolve_fft(x, h);
    const auto slow = oracle::direct_convolution(x, h);
    REQUIRE(fast.size() == slow.size());
    double peak = 0, worst = 0;
    for (std::size_t i = 0; i < slow.size(); ++i) {
      peak = std::max(peak, std::abs(slow[i]));
      worst = std::max(worst, std::abs(fast[i] - slow[i]));
    }
    CHECK(worst / peak <= 1e-6);
    const auto direct = convolve_direct(x, h);
    for (std::size_t i = 0; i < slow.size(); i += 37)
      CHECK(direct[i] == doctest::Approx(slow[i]).epsilon(1e-12).scale(peak));
  }
}

TEST_CASE("synthetic impulse responses") {
  const AudioClip ir = exponential_decay_ir(0.3, 4000, 1);
  REQUIRE(ir.samples.size() == 4000);
  float peak = 0;
  for (float v : ir.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak == 1.0f);
  CHECK(ir.samples[0] > 0.0f);
  double early = 0, late = 0;
  for (std::size_t i = 1; i < 500; ++i) early += ir.samples[i] * ir.samples[i];
  for (std::size_t i = 3500; i < 4000; ++i) late += ir.samples[i] * ir.samples[i];
  CHECK(late < early);
  CHECK(exponential_decay_ir(0.3, 4000, 1).samples == ir.samples);

  const AudioClip bp = bandlimit_ir(300, 3400, 255);
  CHECK(bp.samples.size() == 255);
  for (std::size_t i = 0; i < 127; ++i)
    CHECK(bp.samples[i] == doctest::Approx(bp.samples[254 - i]).epsilon(1e-6).scale(1e-6));
  const AudioClip x = unit_tone(16000);
  CHECK(convolve_ir(x, bp).samples.size() == x.samples.size());
}

TEST_CASE("external tools") {
  const auto dir = testing::scratch("perturb_external");
  std::mt19937_64 gen(12);
  const AudioClip clip{random_signal(gen, 8000)};

  const AudioClip copied = run_external(clip, "cp {in} {out}", dir / "work1");
  CHECK(copied.samples == clip.samples);

  CHECK(code_of([&] {
          run_external(clip, "srcver-no-such-tool-xyz {in} {out}", dir / "work2");
        }) == Errc::kCommandFailed);
  CHECK(code_of([&] { run_external(clip, "true {in} {out}", dir / "work3"); }) ==
        Errc::kOutputMissing);
  CHECK(code_of([&] { run_external(clip, "cp {in} out.wav", dir / "work4"); }) ==
        Errc::kInvalidArgument);

  // A tool that always emits a half-second 8 kHz file.
  AudioClip low{std::vector<float>(4000), 8000};
  for (std::size_t i = 0; i < 4000; ++i)
    low.samples[i] = static_cast<float>(0.3 * std::sin(2 * std::numbers::pi * 500.0 * i / 8000));
  write_wav(dir / "eight.wav", low);
  const AudioClip up = run_external(
      clip, "cat {in} > /dev/null && cp '" + (dir / "eight.wav").string() + "' {out}",
      dir / "work5");
  CHECK(up.sample_rate == 16000);
  CHECK(up.samples.size() == 8000);
}

TEST_CASE("perturbation specs") {
  const PerturbSpec noise = parse_perturb_spec(R"({"kind":"noise","snr_db_range":[15,25],"seed":4})");
  CHECK(noise.kind == PerturbKind::kNoise);
  CHECK(noise.seed == 4);
  CHECK(parse_perturb_spec(perturb_spec_json(noise)).snr_high_db == 25.0);

  const PerturbSpec ir = parse_perturb_spec(R"({"kind":"ir_convolve","ir_path":"a.wav"})", "/base");
  REQUIRE(ir.ir_paths.size() == 1);
  CHECK(ir.ir_paths[0] == std::filesystem::path("/base/a.wav"));

  CHECK(code_of([] { parse_perturb_spec(R"({"kind":"noise","snr_db_range":[25,15]})"); }) ==
        Errc::kInvalidArgument);
  CHECK(code_of([] { parse_perturb_spec(R"({"kind":"mp3"})"); }) == Errc::kInvalidArgument);
  CHECK(code_of([] { parse_perturb_spec(R"({"kind":"ir_convolve"})"); }) ==
        Errc::kInvalidArgument);
  CHECK(code_of([] { parse_perturb_spec("[1,2"); }) == Errc::kMalformedRecord);

  const AudioClip clip = unit_tone(16000);
  const auto a = apply_perturbation(clip, noise, 3, {}, {});
  const auto b = apply_perturbation(clip, noise, 3, {}, {});
  CHECK(a.clip.samples == b.clip.samples);
  REQUIRE(a.snr_db);
  CHECK(*a.snr_db == draw_snr(15, 25, 4, 3));
  CHECK(measured_snr_db(clip.samples, a.clip.samples) == doctest::Approx(*a.snr_db).epsilon(1e-3));
}

TEST_SUITE_END();

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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srcver/audio.hpp"

namespace srcver {

// Mean squared amplitude over the whole clip.
double signal_power(std::span<const float> samples);

// 10 log10(P(clean) / P(noisy - clean)).
double measured_snr_db(std::span<const float> clean, std::span<const float> noisy);

// Adds zero-mean white Gaussian noise whose realised mean-square power is
// exactly P(clip) / 10^(snr/10). Power is measured over the full clip, not
// over speech-active regions. The result is not renormalised and may exceed
// [-1, 1]. Throws kSilentInput on a zero-power clip.
AudioClip add_noise(const AudioClip &clip, double snr_db, std::uint64_t seed);

// Uniform draw on [low, high] keyed by (seed, index).
double draw_snr(double low, double high, std::uint64_t seed, std::uint64_t index);

// Full linear convolution, length n + m - 1.
std::vector<double> convolve_direct(std::span<const float> x, std::span<const float> h);
std::vector<double> convolve_fft(std::span<const float> x, std::span<const float> h);

inline constexpr std::size_t kDirectConvolutionMaxTaps = 1024;

// Linear convolution truncated to the input length, then scaled so its peak
// absolute amplitude equals the input's. IRs longer than
// kDirectConvolutionMaxTaps go through the FFT path. Throws kEmptyIR and
// kRateMismatch.
AudioClip convolve_ir(const AudioClip &clip, const AudioClip &ir);

// Synthetic impulse responses used by the test corpus.
// Unit impulse followed by an exponentially decaying noise tail (-60 dB at
// rt60_seconds), normalised to unit peak.
AudioClip exponential_decay_ir(double rt60_seconds, std::size_t taps,
                               std::uint64_t seed, double direct_gain = 1.0);
// Hamming-windowed sinc band-pass, odd tap count.
AudioClip bandlimit_ir(double low_hz, double high_hz, std::size_t taps);

// Pipes the clip through an external tool. `command_template` must contain
// {in} and {out}; they are replaced by shell-quoted WAV paths inside
// `workdir`. The output is reloaded with load_audio (and so resampled to
// 16 kHz). Throws kCommandFailed carrying the exit status and the start of
// stderr, or kOutputMissing.
AudioClip run_external(const AudioClip &clip, const std::string &command_template,
                       const std::filesystem::path &workdir);

enum class PerturbKind { kNoise, kIrConvolve, kExternal };

PerturbKind parse_perturb_kind(const std::string &text);
std::string to_string(PerturbKind kind);

struct PerturbSpec {
  PerturbKind kind = PerturbKind::kNoise;
  double snr_low_db = 15.0;
  double snr_high_db = 25.0;
  // One IR is picked per track, uniformly by (seed, track index).
  std::vector<std::filesystem::path> ir_paths;
  std::string command_template;
  std::uint64_t seed = 0;

  // Throws kInvalidArgument.
  void validate() const;
};

// JSON object: {"kind": "noise", "snr_db_range": [15, 25], "seed": 1},
// {"kind": "ir_convolve", "ir_path": "phone.wav" | "ir_paths": [...]} or
// {"kind": "external", "command_template": "tool {in} {out}"}. Relative IR
// paths resolve against `base_dir`.
PerturbSpec parse_perturb_spec(const std::string &json_text,
                               const std::filesystem::path &base_dir = {});
PerturbSpec read_perturb_spec(const std::filesystem::path &path);
std::string perturb_spec_json(const PerturbSpec &spec);

struct PerturbOutcome {
  AudioClip clip;
  std::optional<double> snr_db;
  std::string ir_path;
};

// Applies `spec` to the track at `index`; deterministic in (clip, spec, index).
// `irs` holds the loaded ir_paths in order.
PerturbOutcome apply_perturbation(const AudioClip &clip, const PerturbSpec &spec,
                                  std::uint64_t index,
                                  std::span<const AudioClip> irs,
                                  const std::filesystem::path &workdir);

}  // namespace srcver

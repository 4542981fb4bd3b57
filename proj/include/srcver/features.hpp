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

#include <filesystem>
#include <string>
#include <vector>

#include "srcver/audio.hpp"
#include "srcver/core.hpp"

namespace srcver {

enum class MelScale { kHtk, kSlaney };

double hz_to_mel(double hz, MelScale scale);
double mel_to_hz(double mel, MelScale scale);

// Stand-in front end so the pipeline runs without a trained classifier:
// log-mel statistics pooled over a fixed-length segment.
struct ExtractorConfig {
  double segment_seconds = 4.0;
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  std::size_t fft_size = 512;
  std::size_t mel_bands = 64;
  double mel_low_hz = 0.0;
  double mel_high_hz = 8000.0;
  MelScale mel_scale = MelScale::kHtk;
  double log_floor = 1e-10;

  std::size_t frame_length(int sample_rate) const;
  std::size_t hop_length(int sample_rate) const;
  std::size_t segment_length(int sample_rate) const;
  std::size_t embedding_dim() const { return 2 * mel_bands; }

  // Throws kInvalidArgument.
  void validate(int sample_rate = kSampleRate) const;
};

// Triangular filters as dense rows over FFT bins 0..fft_size/2.
//
// Band centres are spaced evenly on the mel scale from mel_low_hz to
// mel_high_hz inclusive; each triangle reaches its neighbouring centres and
// the outer bands mirror their inner slope. Slopes are never narrower than one
// bin, so every row has positive mass and every bin inside the range feeds at
// least one band.
std::vector<std::vector<double>> mel_filterbank(const ExtractorConfig &cfg,
                                                int sample_rate = kSampleRate);

// Truncates to the first `seconds`, or tiles a shorter clip end to end until
// it fills exactly that length. Throws kEmptyClip.
AudioClip fix_segment(const AudioClip &clip, double seconds = 4.0);

// Periodic Hann frames -> |FFT| -> mel filterbank -> ln(max(e, log_floor))
// -> per-band mean then per-band standard deviation over frames. The clip
// must be exactly the fixed segment length at 16 kHz.
Embedding extract_baseline_embedding(const AudioClip &clip,
                                     const ExtractorConfig &cfg = {},
                                     std::string track_id = {});

// load_audio -> fix_segment -> extract_baseline_embedding.
Embedding extract_file(const std::filesystem::path &path,
                       const ExtractorConfig &cfg, std::string track_id);

}  // namespace srcver

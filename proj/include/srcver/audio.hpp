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
#include <vector>

namespace srcver {

inline constexpr int kSampleRate = 16000;

struct AudioClip {
  std::vector<float> samples;  // mono
  int sample_rate = kSampleRate;

  double seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

enum class SampleFormat { kPcm16, kFloat32 };

// Raw multichannel content of a WAV file, interleaved, scaled to [-1, 1].
struct WavData {
  std::vector<float> interleaved;
  int channels = 1;
  int sample_rate = kSampleRate;
  SampleFormat format = SampleFormat::kPcm16;
};

// RIFF/WAVE, PCM 16-bit or IEEE float 32-bit (plain or WAVE_FORMAT_EXTENSIBLE),
// one or two channels. Throws kUnsupportedFormat, kCorruptFile or kIoError.
WavData read_wav(const std::filesystem::path &path);
WavData parse_wav(const std::vector<std::uint8_t> &bytes);

// Mono file. PCM16 output is clipped to [-1, 1] and rounded to nearest.
void write_wav(const std::filesystem::path &path, const AudioClip &clip,
               SampleFormat format = SampleFormat::kFloat32);
std::vector<std::uint8_t> encode_wav(const std::vector<float> &interleaved,
                                     int channels, int sample_rate,
                                     SampleFormat format);

// Reads a WAV, averages channels to mono and resamples to `target_rate`.
AudioClip load_audio(const std::filesystem::path &path,
                     int target_rate = kSampleRate);

// Band-limited rate conversion by windowed-sinc polyphase filtering: Kaiser
// window (beta 8.6), cutoff at 0.95 of the lower Nyquist frequency. Output has
// ceil(n * out / in) samples; samples outside the input are zero.
std::vector<float> resample(const std::vector<float> &input, int in_rate,
                            int out_rate);

}  // namespace srcver

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

#include "srcver/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <numeric>

#include "srcver/error.hpp"

namespace srcver {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const std::uint8_t *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const std::uint8_t *p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<std::uint8_t> &out, std::uint16_t v) {
  out.push_back(v & 0xFF);
  out.push_back(v >> 8);
}

void put32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}

void put_tag(std::vector<std::uint8_t> &out, const char *tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

WavData parse_wav(const std::vector<std::uint8_t> &bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(Errc::kUnsupportedFormat, "not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t *data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t *chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      // Streaming writers leave the data size unset; take what is there.
      if (std::memcmp(chunk, "data", 4) == 0 && have_fmt) {
        data = bytes.data() + body;
        data_size = bytes.size() - body;
        break;
      }
      throw Error(Errc::kCorruptFile, "chunk overruns end of file");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw Error(Errc::kCorruptFile, "fmt chunk too short");
      format = le16(chunk + 8);
      channels = le16(chunk + 10);
      rate = le32(chunk + 12);
      bits = le16(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40) throw Error(Errc::kCorruptFile, "extensible fmt too short");
        format = le16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw Error(Errc::kCorruptFile, "missing fmt chunk");
  if (!data) throw Error(Errc::kCorruptFile, "missing data chunk");

  WavData wav;
  if (format == kFormatPcm && bits == 16) {
    wav.format = SampleFormat::kPcm16;
  } else if (format == kFormatFloat && bits == 32) {
    wav.format = SampleFormat::kFloat32;
  } else {
    throw Error(Errc::kUnsupportedFormat,
                "format tag " + std::to_string(format) + " with " +
                    std::to_string(bits) + " bits");
  }
  if (channels != 1 && channels != 2)
    throw Error(Errc::kUnsupportedFormat,
                std::to_string(channels) + " channels");
  if (rate == 0) throw Error(Errc::kCorruptFile, "zero sample rate");
  wav.channels = channels;
  wav.sample_rate = static_cast<int>(rate);

  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  wav.interleaved.resize(frames * channels);
  for (std::size_t i = 0; i < wav.interleaved.size(); ++i) {
    const std::uint8_t *p = data + i * width;
    if (wav.format == SampleFormat::kPcm16) {
      wav.interleaved[i] = static_cast<std::int16_t>(le16(p)) / 32768.0f;
    } else {
      const std::uint32_t u = le32(p);
      float f;
      std::memcpy(&f, &u, sizeof f);
      if (!std::isfinite(f)) throw Error(Errc::kCorruptFile, "non-finite sample");
      wav.interleaved[i] = f;
    }
  }
  return wav;
}

WavData read_wav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return parse_wav(bytes);
  } catch (const Error &e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

std::vector<std::uint8_t> encode_wav(const std::vector<float> &interleaved,
                                     int channels, int sample_rate,
                                     SampleFormat format) {
  const std::uint16_t bits = format == SampleFormat::kPcm16 ? 16 : 32;
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(interleaved.size() * (bits / 8));
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, format == SampleFormat::kPcm16 ? kFormatPcm : kFormatFloat);
  put16(out, static_cast<std::uint16_t>(channels));
  put32(out, static_cast<std::uint32_t>(sample_rate));
  put32(out, static_cast<std::uint32_t>(sample_rate * channels * (bits / 8)));
  put16(out, static_cast<std::uint16_t>(channels * (bits / 8)));
  put16(out, bits);
  put_tag(out, "data");
  put32(out, data_size);
  for (float s : interleaved) {
    if (format == SampleFormat::kPcm16) {
      const float c = std::clamp(s, -1.0f, 1.0f);
      const long v = std::lround(c * 32767.0f);
      put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    } else {
      std::uint32_t u;
      std::memcpy(&u, &s, sizeof u);
      put32(out, u);
    }
  }
  return out;
}

void write_wav(const std::filesystem::path &path, const AudioClip &clip,
               SampleFormat format) {
  const auto bytes = encode_wav(clip.samples, 1, clip.sample_rate, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoError, "cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIoError, "short write to '" + path.string() + "'");
}

AudioClip load_audio(const std::filesystem::path &path, int target_rate) {
  const WavData wav = read_wav(path);
  AudioClip clip;
  clip.sample_rate = wav.sample_rate;
  if (wav.channels == 1) {
    clip.samples = wav.interleaved;
  } else {
    const std::size_t frames = wav.interleaved.size() / 2;
    clip.samples.resize(frames);
    for (std::size_t i = 0; i < frames; ++i)
      clip.samples[i] = 0.5f * (wav.interleaved[2 * i] + wav.interleaved[2 * i + 1]);
  }
  if (clip.sample_rate != target_rate) {
    clip.samples = resample(clip.samples, clip.sample_rate, target_rate);
    clip.sample_rate = target_rate;
  }
  return clip;
}

namespace {

constexpr double kKaiserBeta = 8.6;
constexpr double kCutoff = 0.95;
// Filter half-width in zero crossings of the lower-rate sinc.
constexpr int kZeroCrossings = 64;

double kaiser(double x, double beta) {
  // x in [-1, 1]
  const double arg = 1.0 - x * x;
  if (arg <= 0.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(arg)) /
         std::cyl_bessel_i(0.0, beta);
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

std::vector<float> resample(const std::vector<float> &input, int in_rate,
                            int out_rate) {
  if (in_rate <= 0 || out_rate <= 0)
    throw Error(Errc::kInvalidArgument, "sample rates must be positive");
  if (in_rate == out_rate) return input;

  const long g = std::gcd(in_rate, out_rate);
  const long up = out_rate / g;    // L
  const long down = in_rate / g;   // M
  // Cutoff as a fraction of the input Nyquist frequency.
  const double fc = kCutoff * std::min(1.0, static_cast<double>(out_rate) / in_rate);
  // Half-width in input samples.
  const double half = kZeroCrossings / fc;
  const long taps = static_cast<long>(std::ceil(half));

  // Phase p places the output at input time base + p / L. Tap j multiplies
  // x[base - taps + 1 + j].
  const long width = 2 * taps;
  std::vector<double> table(static_cast<std::size_t>(up * width));
  for (long p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / up;
    for (long j = 0; j < width; ++j) {
      const double t = frac - static_cast<double>(j - taps + 1);
      const double w = std::abs(t) <= half ? kaiser(t / half, kKaiserBeta) : 0.0;
      table[p * width + j] = fc * sinc(fc * t) * w;
    }
  }

  const std::size_t n_in = input.size();
  const std::size_t n_out = static_cast<std::size_t>(
      (static_cast<long long>(n_in) * up + down - 1) / down);
  std::vector<float> out(n_out);
  for (std::size_t n = 0; n < n_out; ++n) {
    const long long pos = static_cast<long long>(n) * down;
    const long long base = pos / up;
    const long p = static_cast<long>(pos % up);
    const double *h = &table[p * width];
    double acc = 0.0;
    for (long j = 0; j < width; ++j) {
      const long long k = base - taps + 1 + j;
      if (k < 0 || k >= static_cast<long long>(n_in)) continue;
      acc += h[j] * input[static_cast<std::size_t>(k)];
    }
    out[n] = static_cast<float>(acc);
  }
  return out;
}

}  // namespace srcver

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

#include "srcver/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "srcver/error.hpp"
#include "srcver/fft.hpp"

namespace srcver {

double hz_to_mel(double hz, MelScale scale) {
  if (scale == MelScale::kHtk) return 2595.0 * std::log10(1.0 + hz / 700.0);
  // Slaney: linear below 1 kHz, logarithmic above.
  constexpr double kLinearStep = 200.0 / 3.0;
  constexpr double kBreakMel = 1000.0 / kLinearStep;
  const double log_step = std::log(6.4) / 27.0;
  if (hz < 1000.0) return hz / kLinearStep;
  return kBreakMel + std::log(hz / 1000.0) / log_step;
}

double mel_to_hz(double mel, MelScale scale) {
  if (scale == MelScale::kHtk) return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
  constexpr double kLinearStep = 200.0 / 3.0;
  constexpr double kBreakMel = 1000.0 / kLinearStep;
  const double log_step = std::log(6.4) / 27.0;
  if (mel < kBreakMel) return mel * kLinearStep;
  return 1000.0 * std::exp(log_step * (mel - kBreakMel));
}

std::size_t ExtractorConfig::frame_length(int sample_rate) const {
  return static_cast<std::size_t>(std::lround(frame_ms * sample_rate / 1000.0));
}

std::size_t ExtractorConfig::hop_length(int sample_rate) const {
  return static_cast<std::size_t>(std::lround(hop_ms * sample_rate / 1000.0));
}

std::size_t ExtractorConfig::segment_length(int sample_rate) const {
  return static_cast<std::size_t>(std::lround(segment_seconds * sample_rate));
}

void ExtractorConfig::validate(int sample_rate) const {
  auto fail = [](const std::string &msg) {
    throw Error(Errc::kInvalidArgument, "extractor config: " + msg);
  };
  if (!(segment_seconds > 0.0)) fail("segment_seconds must be positive");
  if (frame_length(sample_rate) < 2) fail("frame too short");
  if (hop_length(sample_rate) < 1) fail("hop too short");
  if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0)
    fail("fft_size must be a power of two");
  if (fft_size < frame_length(sample_rate)) fail("fft_size below frame length");
  if (segment_length(sample_rate) < frame_length(sample_rate))
    fail("segment shorter than one frame");
  if (mel_bands < 2) fail("need at least two mel bands");
  if (!(mel_low_hz >= 0.0) || !(mel_high_hz > mel_low_hz))
    fail("mel range must satisfy 0 <= low < high");
  if (mel_high_hz > sample_rate / 2.0) fail("mel range above Nyquist");
  if (!(log_floor > 0.0)) fail("log_floor must be positive");
}

std::vector<std::vector<double>> mel_filterbank(const ExtractorConfig &cfg,
                                                int sample_rate) {
  cfg.validate(sample_rate);
  const std::size_t n_bins = cfg.fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) / cfg.fft_size;
  const std::size_t bands = cfg.mel_bands;

  const double mel_lo = hz_to_mel(cfg.mel_low_hz, cfg.mel_scale);
  const double mel_hi = hz_to_mel(cfg.mel_high_hz, cfg.mel_scale);
  const double step = (mel_hi - mel_lo) / static_cast<double>(bands - 1);
  // Centres plus one mirrored centre beyond each end.
  std::vector<double> centre(bands + 2);
  for (std::size_t i = 0; i < bands + 2; ++i) {
    const double mel = mel_lo + step * (static_cast<double>(i) - 1.0);
    centre[i] = mel_to_hz(mel, cfg.mel_scale);
  }
  centre[1] = cfg.mel_low_hz;
  centre[bands] = cfg.mel_high_hz;

  std::vector<std::vector<double>> fb(bands, std::vector<double>(n_bins, 0.0));
  for (std::size_t m = 0; m < bands; ++m) {
    const double c = centre[m + 1];
    const double left = std::max(c - centre[m], bin_hz);
    const double right = std::max(centre[m + 2] - c, bin_hz);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = k * bin_hz;
      if (f < cfg.mel_low_hz || f > cfg.mel_high_hz) continue;
      const double w = f <= c ? 1.0 - (c - f) / left : 1.0 - (f - c) / right;
      if (w > 0.0) fb[m][k] = w;
    }
  }
  return fb;
}

AudioClip fix_segment(const AudioClip &clip, double seconds) {
  if (clip.samples.empty()) throw Error(Errc::kEmptyClip, "cannot fix an empty clip");
  const std::size_t target =
      static_cast<std::size_t>(std::lround(seconds * clip.sample_rate));
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.resize(target);
  const std::size_t n = clip.samples.size();
  for (std::size_t i = 0; i < target; ++i) out.samples[i] = clip.samples[i % n];
  return out;
}

Embedding extract_baseline_embedding(const AudioClip &clip,
                                     const ExtractorConfig &cfg,
                                     std::string track_id) {
  cfg.validate(kSampleRate);
  if (clip.sample_rate != kSampleRate)
    throw Error(Errc::kRateMismatch,
                "extractor expects 16 kHz, got " + std::to_string(clip.sample_rate));
  const std::size_t seg = cfg.segment_length(kSampleRate);
  if (clip.samples.size() != seg)
    throw Error(Errc::kInvalidArgument,
                "extractor expects " + std::to_string(seg) + " samples, got " +
                    std::to_string(clip.samples.size()));
  for (float s : clip.samples)
    if (!std::isfinite(s)) throw Error(Errc::kNonFinite, "clip has a non-finite sample");

  const std::size_t frame = cfg.frame_length(kSampleRate);
  const std::size_t hop = cfg.hop_length(kSampleRate);
  const std::size_t n_frames = 1 + (seg - frame) / hop;
  const auto fb = mel_filterbank(cfg, kSampleRate);
  const std::size_t bands = cfg.mel_bands;

  std::vector<double> window(frame);
  for (std::size_t i = 0; i < frame; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / frame);

  // log_mel[t * bands + m]
  std::vector<double> log_mel(n_frames * bands);
  std::vector<double> buf(frame);
  for (std::size_t t = 0; t < n_frames; ++t) {
    const std::size_t start = t * hop;
    for (std::size_t i = 0; i < frame; ++i)
      buf[i] = static_cast<double>(clip.samples[start + i]) * window[i];
    const auto mag = magnitude_spectrum(buf, cfg.fft_size);
    for (std::size_t m = 0; m < bands; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < mag.size(); ++k) e += fb[m][k] * mag[k];
      log_mel[t * bands + m] = std::log(std::max(e, cfg.log_floor));
    }
  }

  Embedding out;
  out.track_id = std::move(track_id);
  out.values.resize(2 * bands);
  for (std::size_t m = 0; m < bands; ++m) {
    // Accumulate offsets from the first frame so constant bands pool to an
    // exact mean and a zero deviation.
    const double pivot = log_mel[m];
    double sum = 0.0;
    for (std::size_t t = 0; t < n_frames; ++t) sum += log_mel[t * bands + m] - pivot;
    const double mean = pivot + sum / n_frames;
    double var = 0.0;
    for (std::size_t t = 0; t < n_frames; ++t) {
      const double d = log_mel[t * bands + m] - mean;
      var += d * d;
    }
    out.values[m] = static_cast<float>(mean);
    out.values[bands + m] = static_cast<float>(std::sqrt(var / n_frames));
  }
  return out;
}

Embedding extract_file(const std::filesystem::path &path,
                       const ExtractorConfig &cfg, std::string track_id) {
  const AudioClip clip = load_audio(path, kSampleRate);
  return extract_baseline_embedding(fix_segment(clip, cfg.segment_seconds), cfg,
                                    std::move(track_id));
}

}  // namespace srcver

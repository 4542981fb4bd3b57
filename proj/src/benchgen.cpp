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

#include "srcver/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "srcver/audio.hpp"
#include "srcver/error.hpp"
#include "srcver/parallel.hpp"
#include "srcver/rng.hpp"

namespace srcver {

namespace {

constexpr std::uint64_t kPrototypeStream = 21;
constexpr std::uint64_t kSpeakerStream = 22;
constexpr std::uint64_t kTrackStream = 23;
constexpr std::uint64_t kAudioStream = 24;

std::string numbered(const char *prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02zu", prefix, i);
  return buf;
}

std::vector<double> gaussian_vector(std::size_t dim, double scale,
                                    std::uint64_t seed) {
  std::vector<double> v(dim);
  Rng rng(seed);
  for (auto &x : v) x = scale * rng.normal();
  return v;
}

// RBJ audio-EQ cookbook peaking filter, direct form I.
void peaking_filter(std::vector<float> &x, double f0, double gain_db, double q) {
  const double a = std::pow(10.0, gain_db / 40.0);
  const double w0 = 2.0 * std::numbers::pi * f0 / kSampleRate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha / a;
  const double b0 = (1.0 + alpha * a) / a0, b1 = -2.0 * cw / a0,
               b2 = (1.0 - alpha * a) / a0;
  const double a1 = -2.0 * cw / a0, a2 = (1.0 - alpha / a) / a0;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  for (auto &s : x) {
    const double in = s;
    const double out = b0 * in + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = in;
    y2 = y1;
    y1 = out;
    s = static_cast<float>(out);
  }
}

// Two-pole resonator; (1 - r) keeps the peak gain near unity.
void resonator(std::vector<double> &x, double f, double bandwidth) {
  const double r = std::exp(-std::numbers::pi * bandwidth / kSampleRate);
  const double c = 2.0 * r * std::cos(2.0 * std::numbers::pi * f / kSampleRate);
  const double norm = 1.0 - r;
  double y1 = 0, y2 = 0;
  for (auto &s : x) {
    const double y = norm * s + c * y1 - r * r * y2;
    y2 = y1;
    y1 = y;
    s = y;
  }
}

}  // namespace

void SimSpec::validate() const {
  auto fail = [](const std::string &msg) {
    throw Error(Errc::kInvalidArgument, "sim spec: " + msg);
  };
  if (n_generators < 1) fail("n_generators must be >= 1");
  if (tracks_per_generator < 1) fail("tracks_per_generator must be >= 1");
  if (dim < 1) fail("dim must be >= 1");
  if (!(between_spread >= 0.0)) fail("between_spread must be >= 0");
  if (!(within_spread > 0.0)) fail("within_spread must be > 0");
  if (!(speaker_confound >= 0.0)) fail("speaker_confound must be >= 0");
  if (n_speakers < 1) fail("n_speakers must be >= 1");
  if (languages.empty()) fail("languages must be nonempty");
}

std::string generator_name(std::size_t g) { return numbered("gen", g); }
std::string speaker_name(std::size_t s) { return numbered("spk", s); }
std::string track_name(std::size_t g, std::size_t t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "gen%02zu_t%03zu", g, t);
  return buf;
}

namespace {

std::vector<TrackRecord> corpus_records(const SimSpec &spec) {
  std::vector<TrackRecord> records;
  records.reserve(spec.n_generators * spec.tracks_per_generator);
  for (std::size_t g = 0; g < spec.n_generators; ++g) {
    for (std::size_t t = 0; t < spec.tracks_per_generator; ++t) {
      const std::size_t global = g * spec.tracks_per_generator + t;
      TrackRecord r;
      r.track_id = track_name(g, t);
      r.generator_id = generator_name(g);
      r.speaker_id = speaker_name(global % spec.n_speakers);
      r.language = spec.languages[t % spec.languages.size()];
      r.split = Split::kTest;
      records.push_back(std::move(r));
    }
  }
  return records;
}

}  // namespace

SimulatedCorpus simulate_corpus(const SimSpec &spec) {
  spec.validate();
  std::vector<std::vector<double>> prototypes, confounds;
  for (std::size_t g = 0; g < spec.n_generators; ++g)
    prototypes.push_back(gaussian_vector(spec.dim, spec.between_spread,
                                         derive_seed(spec.seed, kPrototypeStream, g)));
  for (std::size_t s = 0; s < spec.n_speakers; ++s)
    confounds.push_back(gaussian_vector(spec.dim, spec.speaker_confound,
                                        derive_seed(spec.seed, kSpeakerStream, s)));

  std::vector<TrackRecord> records = corpus_records(spec);
  SimulatedCorpus corpus;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto &r = records[i];
    r.source = "emb:" + r.track_id;
    const std::size_t g = i / spec.tracks_per_generator;
    const std::size_t s = i % spec.n_speakers;
    const auto noise = gaussian_vector(spec.dim, spec.within_spread,
                                       derive_seed(spec.seed, kTrackStream, i));
    Embedding e;
    e.track_id = r.track_id;
    e.values.resize(spec.dim);
    for (std::size_t d = 0; d < spec.dim; ++d)
      e.values[d] = static_cast<float>(prototypes[g][d] + confounds[s][d] + noise[d]);
    corpus.store.insert(std::move(e));
  }
  corpus.manifest = Manifest(std::move(records));
  return corpus;
}

FingerprintPreset parse_fingerprint_preset(const std::string &text) {
  if (text == "distinct") return FingerprintPreset::kDistinct;
  if (text == "identical") return FingerprintPreset::kIdentical;
  throw Error(Errc::kInvalidArgument, "unknown fingerprint preset '" + text + "'");
}

std::string to_string(FingerprintPreset preset) {
  return preset == FingerprintPreset::kDistinct ? "distinct" : "identical";
}

std::vector<GeneratorFingerprint> fingerprint_bank(FingerprintPreset preset,
                                                   std::size_t n_generators) {
  std::vector<GeneratorFingerprint> bank(n_generators);
  if (preset == FingerprintPreset::kIdentical) return bank;
  for (std::size_t g = 0; g < n_generators; ++g) {
    const double frac =
        n_generators > 1 ? static_cast<double>(g) / (n_generators - 1) : 0.0;
    bank[g].peak_hz = 400.0 * std::pow(6000.0 / 400.0, frac);
    bank[g].comb_delay = 20 + static_cast<std::size_t>(std::lround(60.0 * frac));
  }
  return bank;
}

AudioClip synthesize_pseudo_speech(std::size_t speaker, std::size_t n_speakers,
                                   std::uint64_t seed) {
  const std::size_t n = 4 * kSampleRate;
  Rng rng(seed);
  const double spk = n_speakers > 1 ? static_cast<double>(speaker) / (n_speakers - 1) : 0.5;
  const double f0_base = (90.0 + 130.0 * spk) * (0.95 + 0.1 * rng.uniform());
  const double vibrato_hz = 4.0 + 2.0 * rng.uniform();
  const double syllable_hz = 3.0 + 2.0 * rng.uniform();
  const double phase0 = 2.0 * std::numbers::pi * rng.uniform();
  const double formant1 = (500.0 + 150.0 * spk) * (0.9 + 0.2 * rng.uniform());
  const double formant2 = (1400.0 + 400.0 * spk) * (0.9 + 0.2 * rng.uniform());

  std::vector<double> voiced(n), breath(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    const double f0 = f0_base * (1.0 + 0.04 * std::sin(2.0 * std::numbers::pi * vibrato_hz * t));
    phase += f0 / kSampleRate;
    phase -= std::floor(phase);
    voiced[i] = 2.0 * phase - 1.0;
    breath[i] = rng.normal();
  }
  resonator(voiced, formant1, 120.0);
  std::vector<double> upper = voiced;
  resonator(upper, formant2, 200.0);

  AudioClip clip;
  clip.samples.resize(n);
  double peak = 0.0;
  std::vector<double> mix(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    const double env = 0.15 + 0.85 * std::pow(std::sin(std::numbers::pi * syllable_hz * t + phase0), 2);
    mix[i] = env * (voiced[i] + 0.6 * upper[i] + 0.02 * breath[i]);
    peak = std::max(peak, std::abs(mix[i]));
  }
  for (std::size_t i = 0; i < n; ++i)
    clip.samples[i] = static_cast<float>(0.5 * mix[i] / peak);
  return clip;
}

AudioClip apply_fingerprint(const AudioClip &clip, const GeneratorFingerprint &fp) {
  AudioClip out = clip;
  peaking_filter(out.samples, fp.peak_hz, fp.peak_gain_db, fp.peak_q);
  std::vector<float> combed(out.samples.size());
  for (std::size_t i = 0; i < combed.size(); ++i) {
    double v = out.samples[i];
    if (i >= fp.comb_delay) v += fp.comb_gain * out.samples[i - fp.comb_delay];
    combed[i] = static_cast<float>(v);
  }
  double peak = 0.0;
  for (float v : combed) peak = std::max(peak, std::abs(static_cast<double>(v)));
  if (peak > 0.0)
    for (auto &v : combed) v = static_cast<float>(0.5 * v / peak);
  out.samples = std::move(combed);
  return out;
}

Manifest simulate_audio_corpus(const SimSpec &spec,
                               const std::vector<GeneratorFingerprint> &bank,
                               const std::filesystem::path &out_dir,
                               std::size_t jobs) {
  spec.validate();
  if (bank.size() != spec.n_generators)
    throw Error(Errc::kInvalidArgument, "fingerprint bank size differs from n_generators");
  std::vector<TrackRecord> records = corpus_records(spec);
  std::error_code ec;
  for (std::size_t g = 0; g < spec.n_generators; ++g) {
    std::filesystem::create_directories(out_dir / "audio" / generator_name(g), ec);
    if (ec)
      throw Error(Errc::kIoError, "cannot create '" + (out_dir / "audio").string() + "'");
  }
  for (auto &r : records)
    r.source = "audio/" + r.generator_id + "/" + r.track_id + ".wav";

  parallel_for(records.size(), jobs, [&](std::size_t i) {
    const std::size_t g = i / spec.tracks_per_generator;
    const std::size_t s = i % spec.n_speakers;
    const AudioClip speech = synthesize_pseudo_speech(
        s, spec.n_speakers, derive_seed(spec.seed, kAudioStream, i));
    write_wav(out_dir / records[i].source, apply_fingerprint(speech, bank[g]),
              SampleFormat::kPcm16);
  });
  return Manifest(std::move(records));
}

}  // namespace srcver

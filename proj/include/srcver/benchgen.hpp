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
#include <string>
#include <vector>

#include "srcver/audio.hpp"
#include "srcver/protocol.hpp"
#include "srcver/store.hpp"

namespace srcver {

// Gaussian cluster model of generator fingerprints in embedding space:
//   track = prototype[generator] + confound[speaker] + within noise
// with i.i.d. normal components scaled by between_spread, speaker_confound
// and within_spread. A test scaffold with controllable separability, not a
// model of any real extractor.
struct SimSpec {
  std::size_t n_generators = 10;
  std::size_t tracks_per_generator = 30;
  std::size_t dim = 64;
  double between_spread = 1.0;
  double within_spread = 1.0;
  double speaker_confound = 0.0;
  std::size_t n_speakers = 10;
  // Assigned round-robin over each generator's tracks.
  std::vector<std::string> languages = {"en"};
  std::uint64_t seed = 0;

  // Throws kInvalidArgument.
  void validate() const;
};

struct SimulatedCorpus {
  Manifest manifest;
  EmbeddingStore store;
};

std::string generator_name(std::size_t g);
std::string speaker_name(std::size_t s);
std::string track_name(std::size_t g, std::size_t t);

// Speakers are dealt round-robin over the global track index, so each speaker
// recurs across generators. Every track lands in the test split with source
// "emb:<track_id>".
SimulatedCorpus simulate_corpus(const SimSpec &spec);

// Per-generator channel signature: an RBJ peaking filter followed by a
// feedforward comb y[n] = x[n] + comb_gain * x[n - comb_delay].
struct GeneratorFingerprint {
  double peak_hz = 1000.0;
  double peak_gain_db = 18.0;
  double peak_q = 1.0;
  std::size_t comb_delay = 32;
  double comb_gain = 0.5;
};

enum class FingerprintPreset { kDistinct, kIdentical };

FingerprintPreset parse_fingerprint_preset(const std::string &text);
std::string to_string(FingerprintPreset preset);

// kDistinct spreads peak frequencies log-uniformly over 400 Hz - 6 kHz and
// comb delays over 20 - 80 samples; kIdentical gives every generator the same
// fingerprint.
std::vector<GeneratorFingerprint> fingerprint_bank(FingerprintPreset preset,
                                                   std::size_t n_generators);

// Four seconds of pseudo-speech: a pitch-modulated glottal sawtooth plus
// breath noise through two speaker-dependent formant resonators, under a
// syllabic envelope. Peak-normalised to 0.5 before the fingerprint filter.
AudioClip synthesize_pseudo_speech(std::size_t speaker, std::size_t n_speakers,
                                   std::uint64_t seed);

AudioClip apply_fingerprint(const AudioClip &clip, const GeneratorFingerprint &fp);

// Writes <out_dir>/audio/<generator>/<track>.wav (16-bit PCM) and returns a
// manifest whose sources are relative to out_dir. Throws kIoError.
Manifest simulate_audio_corpus(const SimSpec &spec,
                               const std::vector<GeneratorFingerprint> &bank,
                               const std::filesystem::path &out_dir,
                               std::size_t jobs = 1);

}  // namespace srcver

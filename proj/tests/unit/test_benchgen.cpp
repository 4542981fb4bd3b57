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

#include "helpers.hpp"
#include "srcver/benchgen.hpp"
#include "srcver/features.hpp"
#include "srcver/metrics.hpp"
#include "srcver/pipeline.hpp"

using namespace srcver;
using testing::code_of;

TEST_SUITE_BEGIN("benchgen");

namespace {

struct PipelineResult {
  double eer;
  std::size_t n_trials;
};

PipelineResult run_pipeline(const Manifest &manifest, const EmbeddingStore &store,
                            std::uint64_t seed = 1) {
  ProtocolConfig cfg;
  cfg.references_per_generator = 5;
  cfg.seed = seed;
  const auto membership = sample_references(manifest, cfg);
  const auto trials = generate_trials(manifest, membership, cfg);
  const auto refsets = resolve_reference_sets(membership, manifest, store);
  const auto scored = score_trials(trials, refsets, store, &manifest, Aggregation::kMax, 4);
  return {compute_eer(compute_roc(scored)), scored.size()};
}

SimSpec spec_with(double between, double within, std::size_t generators,
                  std::size_t tracks, std::uint64_t seed = 3) {
  SimSpec spec;
  spec.n_generators = generators;
  spec.tracks_per_generator = tracks;
  spec.dim = 32;
  spec.between_spread = between;
  spec.within_spread = within;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("corpus layout") {
  SimSpec spec = spec_with(1, 1, 3, 7);
  spec.languages = {"en", "de"};
  spec.n_speakers = 4;
  const SimulatedCorpus c = simulate_corpus(spec);
  REQUIRE(c.manifest.size() == 21);
  CHECK(c.store.size() == 21);
  CHECK(c.store.dim() == 32);
  const TrackRecord &r = c.manifest.at(track_name(1, 2));
  CHECK(r.generator_id == generator_name(1));
  CHECK(r.speaker_id == speaker_name((7 + 2) % 4));
  CHECK(r.language == "en");
  CHECK(c.manifest.at(track_name(1, 3)).language == "de");
  CHECK(r.split == Split::kTest);
  CHECK(r.source == "emb:" + r.track_id);
  CHECK(c.store.find(r.store_key()) != nullptr);
}

TEST_CASE("corpus is deterministic by seed") {
  const auto a = simulate_corpus(spec_with(1, 1, 4, 8, 10));
  const auto b = simulate_corpus(spec_with(1, 1, 4, 8, 10));
  const auto c = simulate_corpus(spec_with(1, 1, 4, 8, 11));
  for (std::size_t i = 0; i < a.store.size(); ++i) {
    CHECK(a.store.entries()[i].values == b.store.entries()[i].values);
    CHECK(a.store.entries()[i].values != c.store.entries()[i].values);
  }
}

TEST_CASE("collapsed clusters separate perfectly") {
  const auto c = simulate_corpus(spec_with(1.0, 1e-9, 5, 12));
  CHECK(run_pipeline(c.manifest, c.store).eer == 0.0);
}

TEST_CASE("no generator signal gives chance EER") {
  // 10 generators x 100 queries x 10 trials = 10,000 trials.
  const auto c = simulate_corpus(spec_with(0.0, 1.0, 10, 105));
  const auto r = run_pipeline(c.manifest, c.store);
  CHECK(r.n_trials == 10000);
  CHECK(r.eer == doctest::Approx(50.0).epsilon(0.06));
  CHECK(r.eer >= 47.0);
  CHECK(r.eer <= 53.0);
}

TEST_CASE("spec validation") {
  SimSpec spec;
  spec.within_spread = 0.0;
  CHECK(code_of([&] { spec.validate(); }) == Errc::kInvalidArgument);
  spec = SimSpec{};
  spec.n_generators = 0;
  CHECK(code_of([&] { spec.validate(); }) == Errc::kInvalidArgument);
  spec = SimSpec{};
  spec.between_spread = -1;
  CHECK(code_of([&] { spec.validate(); }) == Errc::kInvalidArgument);
}

TEST_CASE("fingerprint banks") {
  const auto distinct = fingerprint_bank(FingerprintPreset::kDistinct, 6);
  REQUIRE(distinct.size() == 6);
  CHECK(distinct.front().peak_hz == doctest::Approx(400.0));
  CHECK(distinct.back().peak_hz == doctest::Approx(6000.0));
  for (std::size_t i = 1; i < distinct.size(); ++i)
    CHECK(distinct[i].peak_hz > distinct[i - 1].peak_hz);
  const auto same = fingerprint_bank(FingerprintPreset::kIdentical, 3);
  CHECK(same[0].peak_hz == same[2].peak_hz);
  CHECK(same[0].comb_delay == same[2].comb_delay);
  CHECK(parse_fingerprint_preset("identical") == FingerprintPreset::kIdentical);
}

TEST_CASE("pseudo speech is bounded and deterministic") {
  const AudioClip a = synthesize_pseudo_speech(2, 10, 5);
  CHECK(a.samples.size() == 64000);
  float peak = 0;
  for (float v : a.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(0.5f));
  CHECK(synthesize_pseudo_speech(2, 10, 5).samples == a.samples);
  CHECK(synthesize_pseudo_speech(2, 10, 6).samples != a.samples);
  const AudioClip f = apply_fingerprint(a, GeneratorFingerprint{});
  CHECK(f.samples.size() == a.samples.size());
  CHECK(f.samples != a.samples);
}

TEST_CASE("audio corpus: distinct fingerprints are separable") {
  const auto dir = testing::scratch("benchgen_distinct");
  SimSpec spec = spec_with(0, 1, 2, 55, 7);
  const auto bank = fingerprint_bank(FingerprintPreset::kDistinct, 2);
  const Manifest m = simulate_audio_corpus(spec, bank, dir, 4);
  const auto ex = extract_manifest(m, dir, {}, 4);
  REQUIRE(ex.failures.empty());
  const auto r = run_pipeline(m, ex.store);
  CHECK(r.n_trials >= 200);
  CHECK(r.eer < 10.0);
}

TEST_CASE("audio corpus: identical fingerprints give chance EER") {
  const auto dir = testing::scratch("benchgen_identical");
  SimSpec spec = spec_with(0, 1, 4, 40, 8);
  const auto bank = fingerprint_bank(FingerprintPreset::kIdentical, 4);
  const Manifest m = simulate_audio_corpus(spec, bank, dir, 4);
  const auto ex = extract_manifest(m, dir, {}, 4);
  REQUIRE(ex.failures.empty());
  const auto r = run_pipeline(m, ex.store);
  CHECK(r.eer >= 45.0);
  CHECK(r.eer <= 55.0);
}

TEST_CASE("audio corpus bytes are reproducible") {
  const auto a = testing::scratch("benchgen_bytes_a");
  const auto b = testing::scratch("benchgen_bytes_b");
  SimSpec spec = spec_with(0, 1, 2, 6, 9);
  const auto bank = fingerprint_bank(FingerprintPreset::kDistinct, 2);
  const Manifest ma = simulate_audio_corpus(spec, bank, a, 1);
  const Manifest mb = simulate_audio_corpus(spec, bank, b, 3);
  REQUIRE(ma.size() == 12);
  for (const auto &r : ma.records()) {
    CHECK(mb.at(r.track_id).source == r.source);
    const std::string bytes = testing::slurp(a / r.source);
    CHECK(!bytes.empty());
    CHECK(bytes == testing::slurp(b / r.source));
  }
}

TEST_SUITE_END();

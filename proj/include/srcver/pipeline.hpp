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
#include <map>
#include <string>
#include <vector>

#include "srcver/core.hpp"
#include "srcver/features.hpp"
#include "srcver/metrics.hpp"
#include "srcver/protocol.hpp"
#include "srcver/store.hpp"

namespace srcver {

// Looks up the query embedding of each trial (through the manifest's store
// key when a manifest is given, else by track id) and scores it against its
// reference set. Output order follows `trials`; parallel over trials.
// Throws kMissingEmbedding or kUnknownTrackId for unresolved ids.
std::vector<ScoredTrial> score_trials(
    const std::vector<Trial> &trials,
    const std::map<std::string, ReferenceSet> &refsets,
    const EmbeddingStore &store, const Manifest *manifest,
    Aggregation agg = Aggregation::kMax, std::size_t jobs = 1);

struct ExtractionFailure {
  std::string track_id;
  std::string message;
};

struct ExtractionResult {
  EmbeddingStore store;
  std::vector<ExtractionFailure> failures;
};

// Runs the baseline extractor on every audio-sourced manifest row (paths
// relative to `base_dir`), keyed by track id, in manifest order. Rows with
// "emb:" sources are skipped. Per-track failures are collected, not thrown.
ExtractionResult extract_manifest(const Manifest &manifest,
                                  const std::filesystem::path &base_dir,
                                  const ExtractorConfig &cfg, std::size_t jobs = 1);

}  // namespace srcver

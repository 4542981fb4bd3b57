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

#include "srcver/pipeline.hpp"

#include <optional>

#include "srcver/error.hpp"
#include "srcver/parallel.hpp"

namespace srcver {

std::vector<ScoredTrial> score_trials(
    const std::vector<Trial> &trials,
    const std::map<std::string, ReferenceSet> &refsets,
    const EmbeddingStore &store, const Manifest *manifest, Aggregation agg,
    std::size_t jobs) {
  std::vector<ScoredTrial> scored(trials.size());
  parallel_for(trials.size(), jobs, [&](std::size_t i) {
    const Trial &t = trials[i];
    const std::string key =
        manifest ? manifest->at(t.query_track_id).store_key() : t.query_track_id;
    const Embedding *query = store.find(key);
    if (!query)
      throw Error(Errc::kMissingEmbedding,
                  "query '" + t.query_track_id + "' has no embedding");
    auto it = refsets.find(t.reference_generator_id);
    if (it == refsets.end())
      throw Error(Errc::kUnknownTrackId,
                  "no reference set for generator '" + t.reference_generator_id + "'");
    scored[i] = {t, score_trial(*query, it->second, agg)};
  });
  return scored;
}

ExtractionResult extract_manifest(const Manifest &manifest,
                                  const std::filesystem::path &base_dir,
                                  const ExtractorConfig &cfg, std::size_t jobs) {
  cfg.validate(kSampleRate);
  std::vector<const TrackRecord *> audio;
  for (const auto &r : manifest.records())
    if (!r.is_embedding_source()) audio.push_back(&r);

  std::vector<std::optional<Embedding>> out(audio.size());
  std::vector<std::string> errors(audio.size());
  parallel_for(audio.size(), jobs, [&](std::size_t i) {
    const TrackRecord &r = *audio[i];
    try {
      out[i] = extract_file(base_dir / r.source, cfg, r.track_id);
    } catch (const std::exception &e) {
      errors[i] = e.what();
    }
  });

  ExtractionResult result;
  for (std::size_t i = 0; i < audio.size(); ++i) {
    if (out[i])
      result.store.insert(std::move(*out[i]));
    else
      result.failures.push_back({audio[i]->track_id, errors[i]});
  }
  return result;
}

}  // namespace srcver

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

#include <span>
#include <string>
#include <vector>

namespace srcver {

// One track in the extractor's latent space. Values are stored in single
// precision; every similarity is accumulated in double.
//
// Embeddings are kept exactly as ingested (no L2 normalisation on storage).
// Cosine similarity is scale invariant, so pre-normalised and raw stores
// score identically.
struct Embedding {
  std::string track_id;
  std::vector<float> values;

  std::size_t dim() const { return values.size(); }
};

// One generator's enrolled reference features.
struct ReferenceSet {
  std::string generator_id;
  std::vector<Embedding> members;

  std::size_t dim() const {
    return members.empty() ? 0 : members.front().dim();
  }
};

// How member similarities collapse into one decision statistic.
enum class Aggregation { kMax, kMean, kMedian };

Aggregation parse_aggregation(const std::string &name);
std::string to_string(Aggregation agg);

// Throws Errc::kNonFinite on NaN/Inf entries.
void check_finite(const Embedding &e);

// Throws kEmptyReferenceSet, kDimensionMismatch, kDuplicateTrackId or
// kNonFinite.
void validate(const ReferenceSet &refset);

double l2_norm(std::span<const float> values);
inline double l2_norm(const Embedding &e) { return l2_norm(e.values); }

// dot(a, b) / (|a| |b|), clamped to [-1, 1]. Throws kDimensionMismatch, or
// kZeroVector when either side has zero norm.
double cosine_similarity(std::span<const float> a, std::span<const float> b);
inline double cosine_similarity(const Embedding &a, const Embedding &b) {
  return cosine_similarity(a.values, b.values);
}

// Decision statistic of `query` against a generator's reference set: the
// maximum cosine similarity over members by default.
double score_trial(const Embedding &query, const ReferenceSet &refset,
                   Aggregation agg = Aggregation::kMax);

}  // namespace srcver

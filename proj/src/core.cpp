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

#include "srcver/core.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "srcver/error.hpp"

namespace srcver {

Aggregation parse_aggregation(const std::string &name) {
  if (name == "max") return Aggregation::kMax;
  if (name == "mean") return Aggregation::kMean;
  if (name == "median") return Aggregation::kMedian;
  throw Error(Errc::kInvalidArgument, "unknown aggregation '" + name + "'");
}

std::string to_string(Aggregation agg) {
  switch (agg) {
    case Aggregation::kMax: return "max";
    case Aggregation::kMean: return "mean";
    case Aggregation::kMedian: return "median";
  }
  return "max";
}

void check_finite(const Embedding &e) {
  for (float v : e.values) {
    if (!std::isfinite(v))
      throw Error(Errc::kNonFinite, "embedding '" + e.track_id +
                                        "' has a non-finite entry");
  }
}

void validate(const ReferenceSet &refset) {
  if (refset.members.empty())
    throw Error(Errc::kEmptyReferenceSet,
                "reference set for '" + refset.generator_id + "' is empty");
  const std::size_t dim = refset.dim();
  std::unordered_set<std::string> seen;
  for (const auto &m : refset.members) {
    if (m.dim() != dim)
      throw Error(Errc::kDimensionMismatch,
                  "reference set '" + refset.generator_id + "' mixes dimensions");
    if (!seen.insert(m.track_id).second)
      throw Error(Errc::kDuplicateTrackId, "track '" + m.track_id +
                                               "' appears twice in reference set '" +
                                               refset.generator_id + "'");
    check_finite(m);
  }
}

double l2_norm(std::span<const float> values) {
  double sum = 0.0;
  for (float v : values) sum += static_cast<double>(v) * v;
  return std::sqrt(sum);
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size())
    throw Error(Errc::kDimensionMismatch,
                "cannot compare dimensions " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i], y = b[i];
    dot += x * y;
    aa += x * x;
    bb += y * y;
  }
  if (aa == 0.0 || bb == 0.0)
    throw Error(Errc::kZeroVector, "zero-norm embedding");
  const double cos = dot / (std::sqrt(aa) * std::sqrt(bb));
  return std::clamp(cos, -1.0, 1.0);
}

double score_trial(const Embedding &query, const ReferenceSet &refset,
                   Aggregation agg) {
  if (refset.members.empty())
    throw Error(Errc::kEmptyReferenceSet,
                "reference set for '" + refset.generator_id + "' is empty");
  std::vector<double> sims;
  sims.reserve(refset.members.size());
  for (const auto &m : refset.members)
    sims.push_back(cosine_similarity(query, m));

  switch (agg) {
    case Aggregation::kMax:
      return *std::max_element(sims.begin(), sims.end());
    case Aggregation::kMean: {
      // Sorted summation keeps the mean independent of member order.
      std::sort(sims.begin(), sims.end());
      double sum = 0.0;
      for (double s : sims) sum += s;
      return std::clamp(sum / static_cast<double>(sims.size()), -1.0, 1.0);
    }
    case Aggregation::kMedian: {
      std::sort(sims.begin(), sims.end());
      const std::size_t n = sims.size();
      return n % 2 == 1 ? sims[n / 2] : 0.5 * (sims[n / 2 - 1] + sims[n / 2]);
    }
  }
  return sims.front();
}

}  // namespace srcver

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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srcver/core.hpp"
#include "srcver/store.hpp"

namespace srcver {

enum class Split { kTrain, kDev, kTest };

Split parse_split(const std::string &text);
std::string to_string(Split split);

// One manifest row. `source` is either a path to audio (relative to the
// manifest's directory) or "emb:<store-key>".
struct TrackRecord {
  std::string track_id;
  std::string generator_id;
  std::string speaker_id;
  std::string language;
  Split split = Split::kTest;
  std::string source;

  bool is_embedding_source() const { return source.starts_with("emb:"); }
  // Key used to look the track up in an embedding store: the part after
  // "emb:" for embedding sources, otherwise the track id.
  std::string store_key() const;
};

class Manifest {
 public:
  Manifest() = default;
  // Throws kDuplicateTrackId.
  explicit Manifest(std::vector<TrackRecord> records);

  const std::vector<TrackRecord> &records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const TrackRecord *find(const std::string &track_id) const;
  // Throws kUnknownTrackId.
  const TrackRecord &at(const std::string &track_id) const;

 private:
  std::vector<TrackRecord> records_;
  std::map<std::string, std::size_t> index_;
};

extern const std::vector<std::string> kManifestHeader;
extern const std::vector<std::string> kTrialHeader;
extern const std::vector<std::string> kRefsetHeader;

Manifest read_manifest(const std::filesystem::path &path);
void write_manifest(const std::filesystem::path &path, const Manifest &manifest);

// Each optional field that is set must match exactly.
struct TrackFilter {
  std::optional<std::string> language;
  std::optional<std::string> speaker_id;
  std::optional<std::string> generator_id;

  bool matches(const TrackRecord &r) const;
  bool empty() const { return !language && !speaker_id && !generator_id; }
};

using TrackPredicate = std::function<bool(const TrackRecord &)>;

enum class NontargetPolicy { kAll, kBalanced };

NontargetPolicy parse_policy(const std::string &text);
std::string to_string(NontargetPolicy policy);

struct ProtocolConfig {
  std::size_t references_per_generator = 5;
  std::uint64_t seed = 0;
  NontargetPolicy nontarget_policy = NontargetPolicy::kAll;
  // Restricts the manifest before any sampling.
  TrackFilter filter;
};

struct Trial {
  std::string query_track_id;
  std::string reference_generator_id;
  int label = 0;

  friend bool operator==(const Trial &, const Trial &) = default;
};

// Reference track ids per test-split generator, in manifest order.
using ReferenceMembership = std::map<std::string, std::vector<std::string>>;

// Uniform sampling without replacement of R tracks per test generator.
// Each generator draws from its own stream, keyed by (seed, generator id),
// so adding a generator never reshuffles another's references.
// Throws kInsufficientTracks when a generator has fewer than R + 1 tracks.
ReferenceMembership sample_references(const Manifest &manifest,
                                      const ProtocolConfig &cfg);

// Resolves membership through `store` (throws kMissingEmbedding).
std::map<std::string, ReferenceSet> resolve_reference_sets(
    const ReferenceMembership &membership, const Manifest &manifest,
    const EmbeddingStore &store);

std::map<std::string, ReferenceSet> build_reference_sets(
    const Manifest &manifest, const ProtocolConfig &cfg,
    const EmbeddingStore &store);

// Every test track not enrolled as a reference yields one target trial, then
// nontarget trials against foreign reference sets in generator-id order
// (all of them, or one seeded pick under kBalanced).
std::vector<Trial> generate_trials(const Manifest &manifest,
                                   const ReferenceMembership &membership,
                                   const ProtocolConfig &cfg);

// Throws kUnknownTrackId when a query is missing from the manifest.
std::vector<Trial> filter_trials(const std::vector<Trial> &trials,
                                 const Manifest &manifest,
                                 const TrackPredicate &predicate);
std::vector<Trial> filter_trials(const std::vector<Trial> &trials,
                                 const Manifest &manifest,
                                 const TrackFilter &filter);

// Exhaustive protocol audit: labels recomputed from the manifest, no query in
// its own reference set, references drawn from the test split only. Returns
// a description of each violation (empty when clean).
std::vector<std::string> audit_protocol(const Manifest &manifest,
                                        const ReferenceMembership &membership,
                                        const std::vector<Trial> &trials);

std::vector<Trial> read_trials(const std::filesystem::path &path);
void write_trials(const std::filesystem::path &path,
                  const std::vector<Trial> &trials);

ReferenceMembership read_membership(const std::filesystem::path &path);
void write_membership(const std::filesystem::path &path,
                      const ReferenceMembership &membership);

}  // namespace srcver

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

#include "srcver/protocol.hpp"

#include <algorithm>
#include <set>

#include "srcver/csv.hpp"
#include "srcver/error.hpp"
#include "srcver/rng.hpp"

namespace srcver {

const std::vector<std::string> kManifestHeader = {
    "track_id", "generator_id", "speaker_id", "language", "split", "source"};
const std::vector<std::string> kTrialHeader = {
    "query_track_id", "reference_generator_id", "label"};
const std::vector<std::string> kRefsetHeader = {"generator_id", "track_id"};

Split parse_split(const std::string &text) {
  if (text == "train") return Split::kTrain;
  if (text == "dev") return Split::kDev;
  if (text == "test") return Split::kTest;
  throw Error(Errc::kMalformedRecord, "unknown split '" + text + "'");
}

std::string to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "test";
}

std::string TrackRecord::store_key() const {
  return is_embedding_source() ? source.substr(4) : track_id;
}

Manifest::Manifest(std::vector<TrackRecord> records)
    : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!index_.emplace(records_[i].track_id, i).second)
      throw Error(Errc::kDuplicateTrackId,
                  "track '" + records_[i].track_id + "' listed twice");
  }
}

const TrackRecord *Manifest::find(const std::string &track_id) const {
  auto it = index_.find(track_id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

const TrackRecord &Manifest::at(const std::string &track_id) const {
  if (const TrackRecord *r = find(track_id)) return *r;
  throw Error(Errc::kUnknownTrackId, "track '" + track_id + "' not in manifest");
}

Manifest read_manifest(const std::filesystem::path &path) {
  const csv::Table table = csv::read(path, kManifestHeader);
  std::vector<TrackRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto &row = table.rows[i];
    const std::string where = path.string() + ":" + std::to_string(table.lines[i]);
    if (row[0].empty())
      throw Error(Errc::kMalformedRecord, where + ": empty track_id");
    TrackRecord r;
    r.track_id = row[0];
    r.generator_id = row[1];
    r.speaker_id = row[2];
    r.language = row[3];
    try {
      r.split = parse_split(row[4]);
    } catch (const Error &) {
      throw Error(Errc::kMalformedRecord, where + ": unknown split '" + row[4] + "'");
    }
    r.source = row[5];
    records.push_back(std::move(r));
  }
  return Manifest(std::move(records));
}

void write_manifest(const std::filesystem::path &path, const Manifest &manifest) {
  std::vector<csv::Row> rows;
  rows.reserve(manifest.size());
  for (const auto &r : manifest.records())
    rows.push_back({r.track_id, r.generator_id, r.speaker_id, r.language,
                    to_string(r.split), r.source});
  csv::write(path, kManifestHeader, rows);
}

bool TrackFilter::matches(const TrackRecord &r) const {
  if (language && r.language != *language) return false;
  if (speaker_id && r.speaker_id != *speaker_id) return false;
  if (generator_id && r.generator_id != *generator_id) return false;
  return true;
}

NontargetPolicy parse_policy(const std::string &text) {
  if (text == "all") return NontargetPolicy::kAll;
  if (text == "balanced") return NontargetPolicy::kBalanced;
  throw Error(Errc::kInvalidArgument, "unknown nontarget policy '" + text + "'");
}

std::string to_string(NontargetPolicy policy) {
  return policy == NontargetPolicy::kAll ? "all" : "balanced";
}

namespace {

bool eligible(const TrackRecord &r, const ProtocolConfig &cfg) {
  return r.split == Split::kTest && cfg.filter.matches(r);
}

// Test-split track ids per generator, manifest order.
std::map<std::string, std::vector<std::string>> tracks_by_generator(
    const Manifest &manifest, const ProtocolConfig &cfg) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto &r : manifest.records())
    if (eligible(r, cfg)) out[r.generator_id].push_back(r.track_id);
  return out;
}

constexpr std::uint64_t kReferenceStream = 1;
constexpr std::uint64_t kBalancedStream = 2;

}  // namespace

ReferenceMembership sample_references(const Manifest &manifest,
                                      const ProtocolConfig &cfg) {
  const std::size_t R = cfg.references_per_generator;
  if (R < 1)
    throw Error(Errc::kInvalidArgument, "references_per_generator must be >= 1");

  ReferenceMembership membership;
  for (auto &[generator, tracks] : tracks_by_generator(manifest, cfg)) {
    if (tracks.size() < R + 1)
      throw Error(Errc::kInsufficientTracks,
                  "generator '" + generator + "' has " +
                      std::to_string(tracks.size()) + " test tracks, need " +
                      std::to_string(R + 1));
    Rng rng(derive_seed(cfg.seed, kReferenceStream, fnv1a64(generator)));
    // Partial Fisher-Yates over positions; the first R slots are the sample.
    std::vector<std::size_t> pos(tracks.size());
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
    for (std::size_t i = 0; i < R; ++i) {
      const std::size_t j = i + rng.below(pos.size() - i);
      std::swap(pos[i], pos[j]);
    }
    std::vector<std::size_t> chosen(pos.begin(), pos.begin() + R);
    std::sort(chosen.begin(), chosen.end());
    auto &members = membership[generator];
    for (std::size_t p : chosen) members.push_back(tracks[p]);
  }
  return membership;
}

std::map<std::string, ReferenceSet> resolve_reference_sets(
    const ReferenceMembership &membership, const Manifest &manifest,
    const EmbeddingStore &store) {
  std::map<std::string, ReferenceSet> out;
  for (const auto &[generator, ids] : membership) {
    ReferenceSet set;
    set.generator_id = generator;
    for (const auto &id : ids) {
      const TrackRecord *r = manifest.find(id);
      const std::string key = r ? r->store_key() : id;
      const Embedding *e = store.find(key);
      if (!e)
        throw Error(Errc::kMissingEmbedding,
                    "reference track '" + id + "' has no embedding");
      Embedding member = *e;
      member.track_id = id;
      set.members.push_back(std::move(member));
    }
    validate(set);
    out.emplace(generator, std::move(set));
  }
  return out;
}

std::map<std::string, ReferenceSet> build_reference_sets(
    const Manifest &manifest, const ProtocolConfig &cfg,
    const EmbeddingStore &store) {
  return resolve_reference_sets(sample_references(manifest, cfg), manifest,
                                store);
}

std::vector<Trial> generate_trials(const Manifest &manifest,
                                   const ReferenceMembership &membership,
                                   const ProtocolConfig &cfg) {
  std::set<std::string> enrolled;
  for (const auto &[generator, ids] : membership)
    enrolled.insert(ids.begin(), ids.end());

  std::vector<std::string> generators;
  for (const auto &[generator, ids] : membership) generators.push_back(generator);

  std::vector<Trial> trials;
  for (const auto &r : manifest.records()) {
    if (!eligible(r, cfg) || enrolled.count(r.track_id)) continue;
    if (!membership.count(r.generator_id)) continue;
    trials.push_back({r.track_id, r.generator_id, 1});

    std::vector<const std::string *> foreign;
    for (const auto &g : generators)
      if (g != r.generator_id) foreign.push_back(&g);
    if (foreign.empty()) continue;

    if (cfg.nontarget_policy == NontargetPolicy::kAll) {
      for (const auto *g : foreign) trials.push_back({r.track_id, *g, 0});
    } else {
      Rng rng(derive_seed(cfg.seed, kBalancedStream, fnv1a64(r.track_id)));
      trials.push_back({r.track_id, *foreign[rng.below(foreign.size())], 0});
    }
  }
  return trials;
}

std::vector<Trial> filter_trials(const std::vector<Trial> &trials,
                                 const Manifest &manifest,
                                 const TrackPredicate &predicate) {
  std::vector<Trial> out;
  for (const auto &t : trials)
    if (predicate(manifest.at(t.query_track_id))) out.push_back(t);
  return out;
}

std::vector<Trial> filter_trials(const std::vector<Trial> &trials,
                                 const Manifest &manifest,
                                 const TrackFilter &filter) {
  return filter_trials(trials, manifest, [&filter](const TrackRecord &r) {
    return filter.matches(r);
  });
}

std::vector<std::string> audit_protocol(const Manifest &manifest,
                                        const ReferenceMembership &membership,
                                        const std::vector<Trial> &trials) {
  std::vector<std::string> problems;
  std::map<std::string, std::set<std::string>> members;
  for (const auto &[generator, ids] : membership) {
    members[generator].insert(ids.begin(), ids.end());
    for (const auto &id : ids) {
      const TrackRecord *r = manifest.find(id);
      if (!r) {
        problems.push_back("reference '" + id + "' not in manifest");
        continue;
      }
      if (r->split != Split::kTest)
        problems.push_back("reference '" + id + "' is not from the test split");
      if (r->generator_id != generator)
        problems.push_back("reference '" + id + "' enrolled under '" + generator +
                           "' but generated by '" + r->generator_id + "'");
    }
  }
  for (const auto &t : trials) {
    const TrackRecord *r = manifest.find(t.query_track_id);
    if (!r) {
      problems.push_back("query '" + t.query_track_id + "' not in manifest");
      continue;
    }
    const int expected = r->generator_id == t.reference_generator_id ? 1 : 0;
    if (t.label != expected)
      problems.push_back("trial (" + t.query_track_id + ", " +
                         t.reference_generator_id + ") has wrong label");
    auto it = members.find(t.reference_generator_id);
    if (it == members.end())
      problems.push_back("trial references unknown set '" +
                         t.reference_generator_id + "'");
    else if (it->second.count(t.query_track_id))
      problems.push_back("query '" + t.query_track_id +
                         "' is a member of reference set '" +
                         t.reference_generator_id + "'");
  }
  return problems;
}

std::vector<Trial> read_trials(const std::filesystem::path &path) {
  const csv::Table table = csv::read(path, kTrialHeader);
  std::vector<Trial> trials;
  trials.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto &row = table.rows[i];
    if (row[2] != "0" && row[2] != "1")
      throw Error(Errc::kMalformedRecord,
                  path.string() + ":" + std::to_string(table.lines[i]) +
                      ": label must be 0 or 1");
    trials.push_back({row[0], row[1], row[2] == "1" ? 1 : 0});
  }
  return trials;
}

void write_trials(const std::filesystem::path &path,
                  const std::vector<Trial> &trials) {
  std::vector<csv::Row> rows;
  rows.reserve(trials.size());
  for (const auto &t : trials)
    rows.push_back({t.query_track_id, t.reference_generator_id,
                    std::to_string(t.label)});
  csv::write(path, kTrialHeader, rows);
}

ReferenceMembership read_membership(const std::filesystem::path &path) {
  const csv::Table table = csv::read(path, kRefsetHeader);
  ReferenceMembership membership;
  for (const auto &row : table.rows) membership[row[0]].push_back(row[1]);
  return membership;
}

void write_membership(const std::filesystem::path &path,
                      const ReferenceMembership &membership) {
  std::vector<csv::Row> rows;
  for (const auto &[generator, ids] : membership)
    for (const auto &id : ids) rows.push_back({generator, id});
  csv::write(path, kRefsetHeader, rows);
}

}  // namespace srcver

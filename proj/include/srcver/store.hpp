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
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "srcver/core.hpp"

namespace srcver {

// Immutable-after-build lookup from store key to embedding. Insertion order
// is kept so a written store reproduces byte-for-byte.
class EmbeddingStore {
 public:
  // Throws kDuplicateTrackId, kDimensionMismatch (against the first
  // inserted embedding) or kNonFinite.
  void insert(Embedding e);

  const Embedding *find(const std::string &key) const;
  // Throws kMissingEmbedding.
  const Embedding &at(const std::string &key) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  // 0 when empty.
  std::size_t dim() const { return entries_.empty() ? 0 : entries_.front().dim(); }
  const std::vector<Embedding> &entries() const { return entries_; }

 private:
  std::vector<Embedding> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// JSON Lines, one object per line:
//   {"track_id":"...","dim":N,"values":[v0,...]}
// Blank lines are ignored. Throws kMalformedRecord naming the 1-based line,
// kDuplicateTrackId, kDimensionMismatch.
EmbeddingStore parse_embeddings(std::istream &in, const std::string &origin);
EmbeddingStore ingest_embeddings(const std::filesystem::path &path);

std::string format_embedding_line(const Embedding &e);
void write_embeddings(const std::filesystem::path &path,
                      const EmbeddingStore &store);

}  // namespace srcver

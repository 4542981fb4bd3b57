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

#include "srcver/store.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "srcver/csv.hpp"
#include "srcver/error.hpp"

namespace srcver {

void EmbeddingStore::insert(Embedding e) {
  if (!entries_.empty() && e.dim() != dim())
    throw Error(Errc::kDimensionMismatch,
                "track '" + e.track_id + "' has dim " + std::to_string(e.dim()) +
                    ", store has " + std::to_string(dim()));
  check_finite(e);
  if (index_.count(e.track_id))
    throw Error(Errc::kDuplicateTrackId, "track '" + e.track_id + "'");
  index_.emplace(e.track_id, entries_.size());
  entries_.push_back(std::move(e));
}

const Embedding *EmbeddingStore::find(const std::string &key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const Embedding &EmbeddingStore::at(const std::string &key) const {
  if (const Embedding *e = find(key)) return *e;
  throw Error(Errc::kMissingEmbedding, "no embedding for '" + key + "'");
}

EmbeddingStore parse_embeddings(std::istream &in, const std::string &origin) {
  EmbeddingStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = origin + ":" + std::to_string(line_no);

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &) {
      throw Error(Errc::kMalformedRecord, where + ": not a JSON object");
    }
    if (!record.is_object() || !record.contains("track_id") ||
        !record["track_id"].is_string() || !record.contains("dim") ||
        !record["dim"].is_number_integer() || !record.contains("values") ||
        !record["values"].is_array())
      throw Error(Errc::kMalformedRecord,
                  where + ": expected keys track_id, dim, values");

    Embedding e;
    e.track_id = record["track_id"].get<std::string>();
    const auto &values = record["values"];
    const auto dim = record["dim"].get<long long>();
    if (dim < 1 || static_cast<std::size_t>(dim) != values.size())
      throw Error(Errc::kMalformedRecord,
                  where + ": dim " + std::to_string(dim) + " but " +
                      std::to_string(values.size()) + " values");
    e.values.reserve(values.size());
    for (const auto &v : values) {
      if (!v.is_number())
        throw Error(Errc::kMalformedRecord, where + ": non-numeric value");
      const double d = v.get<double>();
      const float f = static_cast<float>(d);
      if (!std::isfinite(f))
        throw Error(Errc::kMalformedRecord, where + ": non-finite value");
      e.values.push_back(f);
    }
    store.insert(std::move(e));
  }
  return store;
}

EmbeddingStore ingest_embeddings(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open '" + path.string() + "'");
  return parse_embeddings(in, path.string());
}

std::string format_embedding_line(const Embedding &e) {
  std::string out = "{\"track_id\":";
  out += nlohmann::json(e.track_id).dump();
  out += ",\"dim\":" + std::to_string(e.dim()) + ",\"values\":[";
  for (std::size_t i = 0; i < e.values.size(); ++i) {
    if (i) out.push_back(',');
    out += csv::format_float(e.values[i]);
  }
  out += "]}";
  return out;
}

void write_embeddings(const std::filesystem::path &path,
                      const EmbeddingStore &store) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoError, "cannot write '" + path.string() + "'");
  for (const auto &e : store.entries()) out << format_embedding_line(e) << '\n';
  if (!out) throw Error(Errc::kIoError, "short write to '" + path.string() + "'");
}

}  // namespace srcver

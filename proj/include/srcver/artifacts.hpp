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
#include <json.hpp>
#include <optional>
#include <string>

#include "srcver/benchgen.hpp"
#include "srcver/features.hpp"
#include "srcver/metrics.hpp"

namespace srcver {

inline constexpr const char *kToolName = "srcver";
inline constexpr const char *kToolVersion = "0.1.0";

using ordered_json = nlohmann::ordered_json;

// 16 hex digits of FNV-1a over the compact dump of `config`.
std::string config_hash(const ordered_json &config);

// {"tool", "version", "stage", ["seed"], "config_hash", "config"}. Holds no
// paths, timestamps or job counts, so equal inputs and flags give equal
// metadata.
ordered_json run_metadata(const std::string &stage, const ordered_json &config,
                          std::optional<std::uint64_t> seed = std::nullopt);

std::filesystem::path sidecar_path(const std::filesystem::path &artifact);
void write_sidecar(const std::filesystem::path &artifact, const ordered_json &metadata);
void write_json(const std::filesystem::path &path, const ordered_json &doc);

// Metrics rounded to 4 decimals; undefined metrics become null.
ordered_json report_to_json(const MetricsReport &report);

ordered_json to_json(const ExtractorConfig &cfg);
// Missing keys keep their defaults. Throws kInvalidArgument.
ExtractorConfig parse_extractor_config(const std::string &json_text);

enum class SimMode { kEmbedding, kAudio };

struct SimRequest {
  SimSpec spec;
  SimMode mode = SimMode::kEmbedding;
  FingerprintPreset fingerprints = FingerprintPreset::kDistinct;
};

ordered_json to_json(const SimRequest &request);
SimRequest parse_sim_request(const std::string &json_text);

std::string read_text(const std::filesystem::path &path);

}  // namespace srcver

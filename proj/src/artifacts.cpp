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

#include "srcver/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "srcver/error.hpp"
#include "srcver/rng.hpp"

namespace srcver {

std::string config_hash(const ordered_json &config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

ordered_json run_metadata(const std::string &stage, const ordered_json &config,
                          std::optional<std::uint64_t> seed) {
  ordered_json meta;
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  meta["stage"] = stage;
  if (seed) meta["seed"] = *seed;
  meta["config_hash"] = config_hash(config);
  meta["config"] = config;
  return meta;
}

std::filesystem::path sidecar_path(const std::filesystem::path &artifact) {
  return std::filesystem::path(artifact.string() + ".meta.json");
}

void write_json(const std::filesystem::path &path, const ordered_json &doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoError, "cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw Error(Errc::kIoError, "short write to '" + path.string() + "'");
}

void write_sidecar(const std::filesystem::path &artifact, const ordered_json &metadata) {
  write_json(sidecar_path(artifact), metadata);
}

ordered_json report_to_json(const MetricsReport &report) {
  ordered_json j;
  j["eer_percent"] = report.eer_percent ? ordered_json(round4(*report.eer_percent))
                                        : ordered_json(nullptr);
  j["auc_percent"] = report.auc_percent ? ordered_json(round4(*report.auc_percent))
                                        : ordered_json(nullptr);
  j["n_target"] = report.n_target;
  j["n_nontarget"] = report.n_nontarget;
  if (!report.groups.empty()) {
    ordered_json groups = ordered_json::object();
    for (const auto &[key, sub] : report.groups) groups[key] = report_to_json(sub);
    j["groups"] = std::move(groups);
  }
  return j;
}

ordered_json to_json(const ExtractorConfig &cfg) {
  ordered_json j;
  j["segment_seconds"] = cfg.segment_seconds;
  j["frame_ms"] = cfg.frame_ms;
  j["hop_ms"] = cfg.hop_ms;
  j["fft_size"] = cfg.fft_size;
  j["mel_bands"] = cfg.mel_bands;
  j["mel_range"] = {cfg.mel_low_hz, cfg.mel_high_hz};
  j["mel_scale"] = cfg.mel_scale == MelScale::kHtk ? "htk" : "slaney";
  j["pooling"] = "mean_std";
  j["log_floor"] = cfg.log_floor;
  return j;
}

namespace {

nlohmann::json parse_object(const std::string &text, const std::string &what) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw Error(Errc::kInvalidArgument, what + ": " + e.what());
  }
  if (!j.is_object()) throw Error(Errc::kInvalidArgument, what + ": expected an object");
  return j;
}

}  // namespace

ExtractorConfig parse_extractor_config(const std::string &json_text) {
  const auto j = parse_object(json_text, "extractor config");
  ExtractorConfig cfg;
  try {
    if (j.contains("segment_seconds")) cfg.segment_seconds = j["segment_seconds"].get<double>();
    if (j.contains("frame_ms")) cfg.frame_ms = j["frame_ms"].get<double>();
    if (j.contains("hop_ms")) cfg.hop_ms = j["hop_ms"].get<double>();
    if (j.contains("fft_size")) cfg.fft_size = j["fft_size"].get<std::size_t>();
    if (j.contains("mel_bands")) cfg.mel_bands = j["mel_bands"].get<std::size_t>();
    if (j.contains("mel_range")) {
      cfg.mel_low_hz = j["mel_range"].at(0).get<double>();
      cfg.mel_high_hz = j["mel_range"].at(1).get<double>();
    }
    if (j.contains("mel_scale")) {
      const auto scale = j["mel_scale"].get<std::string>();
      if (scale == "htk")
        cfg.mel_scale = MelScale::kHtk;
      else if (scale == "slaney")
        cfg.mel_scale = MelScale::kSlaney;
      else
        throw Error(Errc::kInvalidArgument, "unknown mel_scale '" + scale + "'");
    }
    if (j.contains("pooling") && j["pooling"].get<std::string>() != "mean_std")
      throw Error(Errc::kInvalidArgument, "only mean_std pooling is available");
    if (j.contains("log_floor")) cfg.log_floor = j["log_floor"].get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(Errc::kInvalidArgument, std::string("extractor config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ordered_json to_json(const SimRequest &request) {
  const SimSpec &s = request.spec;
  ordered_json j;
  j["mode"] = request.mode == SimMode::kEmbedding ? "embedding" : "audio";
  j["n_generators"] = s.n_generators;
  j["tracks_per_generator"] = s.tracks_per_generator;
  if (request.mode == SimMode::kEmbedding) {
    j["dim"] = s.dim;
    j["between_spread"] = s.between_spread;
    j["within_spread"] = s.within_spread;
    j["speaker_confound"] = s.speaker_confound;
  } else {
    j["fingerprints"] = to_string(request.fingerprints);
  }
  j["n_speakers"] = s.n_speakers;
  j["languages"] = s.languages;
  j["seed"] = s.seed;
  return j;
}

SimRequest parse_sim_request(const std::string &json_text) {
  const auto j = parse_object(json_text, "sim spec");
  SimRequest req;
  SimSpec &s = req.spec;
  try {
    if (j.contains("mode")) {
      const auto mode = j["mode"].get<std::string>();
      if (mode == "embedding")
        req.mode = SimMode::kEmbedding;
      else if (mode == "audio")
        req.mode = SimMode::kAudio;
      else
        throw Error(Errc::kInvalidArgument, "unknown mode '" + mode + "'");
    }
    if (j.contains("n_generators")) s.n_generators = j["n_generators"].get<std::size_t>();
    if (j.contains("tracks_per_generator"))
      s.tracks_per_generator = j["tracks_per_generator"].get<std::size_t>();
    if (j.contains("dim")) s.dim = j["dim"].get<std::size_t>();
    if (j.contains("between_spread")) s.between_spread = j["between_spread"].get<double>();
    if (j.contains("within_spread")) s.within_spread = j["within_spread"].get<double>();
    if (j.contains("speaker_confound"))
      s.speaker_confound = j["speaker_confound"].get<double>();
    if (j.contains("n_speakers")) s.n_speakers = j["n_speakers"].get<std::size_t>();
    if (j.contains("languages"))
      s.languages = j["languages"].get<std::vector<std::string>>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("fingerprints"))
      req.fingerprints = parse_fingerprint_preset(j["fingerprints"].get<std::string>());
  } catch (const nlohmann::json::exception &e) {
    throw Error(Errc::kInvalidArgument, std::string("sim spec: ") + e.what());
  }
  s.validate();
  return req;
}

std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace srcver

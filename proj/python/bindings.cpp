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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cli.hpp"
#include "srcver/audio.hpp"
#include "srcver/benchgen.hpp"
#include "srcver/core.hpp"
#include "srcver/error.hpp"
#include "srcver/features.hpp"
#include "srcver/metrics.hpp"
#include "srcver/perturb.hpp"
#include "srcver/protocol.hpp"

namespace py = pybind11;
using namespace srcver;

namespace {

Embedding as_embedding(std::vector<float> values, std::string id = {}) {
  return Embedding{std::move(id), std::move(values)};
}

ReferenceSet as_refset(const std::vector<std::vector<float>> &members) {
  ReferenceSet set;
  set.generator_id = "ref";
  for (std::size_t i = 0; i < members.size(); ++i)
    set.members.push_back(as_embedding(members[i], "m" + std::to_string(i)));
  return set;
}

std::vector<ScoredTrial> as_scored(const std::vector<double> &scores,
                                   const std::vector<int> &labels) {
  if (scores.size() != labels.size())
    throw Error(Errc::kDimensionMismatch, "scores and labels differ in length");
  std::vector<ScoredTrial> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i].trial.label = labels[i] != 0 ? 1 : 0;
    out[i].score = scores[i];
  }
  return out;
}

AudioClip as_clip(std::vector<float> samples, int rate = kSampleRate) {
  return AudioClip{std::move(samples), rate};
}

py::dict record_dict(const TrackRecord &r) {
  py::dict d;
  d["track_id"] = r.track_id;
  d["generator_id"] = r.generator_id;
  d["speaker_id"] = r.speaker_id;
  d["language"] = r.language;
  d["split"] = to_string(r.split);
  d["source"] = r.source;
  return d;
}

Manifest manifest_from_dicts(const std::vector<py::dict> &rows) {
  std::vector<TrackRecord> records;
  for (const auto &d : rows) {
    TrackRecord r;
    r.track_id = d["track_id"].cast<std::string>();
    r.generator_id = d["generator_id"].cast<std::string>();
    if (d.contains("speaker_id")) r.speaker_id = d["speaker_id"].cast<std::string>();
    if (d.contains("language")) r.language = d["language"].cast<std::string>();
    if (d.contains("split")) r.split = parse_split(d["split"].cast<std::string>());
    if (d.contains("source")) r.source = d["source"].cast<std::string>();
    records.push_back(std::move(r));
  }
  return Manifest(std::move(records));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Source verification for synthetic speech: scoring, protocols, metrics, DSP.";

  py::register_exception<Error>(m, "SrcverError", PyExc_ValueError);

  m.def("l2_norm", [](std::vector<float> v) { return l2_norm(v); });
  m.def("cosine_similarity",
        [](std::vector<float> a, std::vector<float> b) { return cosine_similarity(a, b); });
  m.def(
      "score_trial",
      [](std::vector<float> query, const std::vector<std::vector<float>> &refs,
         const std::string &agg) {
        return score_trial(as_embedding(std::move(query)), as_refset(refs),
                           parse_aggregation(agg));
      },
      py::arg("query"), py::arg("references"), py::arg("agg") = "max");

  m.def(
      "compute_roc",
      [](const std::vector<double> &scores, const std::vector<int> &labels) {
        std::vector<std::tuple<double, double, double>> out;
        for (const auto &p : compute_roc(as_scored(scores, labels)).points)
          out.emplace_back(p.threshold, p.fpr, p.fnr);
        return out;
      },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "compute_eer",
      [](const std::vector<double> &scores, const std::vector<int> &labels) {
        return compute_eer(compute_roc(as_scored(scores, labels)));
      },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "compute_auc",
      [](const std::vector<double> &scores, const std::vector<int> &labels) {
        return compute_auc(as_scored(scores, labels));
      },
      py::arg("scores"), py::arg("labels"));

  m.def(
      "load_audio",
      [](const std::filesystem::path &path, int rate) {
        AudioClip clip = load_audio(path, rate);
        return py::make_tuple(clip.samples, clip.sample_rate);
      },
      py::arg("path"), py::arg("target_rate") = kSampleRate);
  m.def(
      "write_wav",
      [](const std::filesystem::path &path, std::vector<float> samples, int rate) {
        write_wav(path, as_clip(std::move(samples), rate));
      },
      py::arg("path"), py::arg("samples"), py::arg("sample_rate") = kSampleRate);
  m.def(
      "fix_segment",
      [](std::vector<float> samples, double seconds) {
        return fix_segment(as_clip(std::move(samples)), seconds).samples;
      },
      py::arg("samples"), py::arg("seconds") = 4.0);
  m.def(
      "extract_baseline_embedding",
      [](std::vector<float> samples) {
        return extract_baseline_embedding(as_clip(std::move(samples))).values;
      },
      py::arg("samples"));

  m.def(
      "add_noise",
      [](std::vector<float> samples, double snr_db, std::uint64_t seed) {
        return add_noise(as_clip(std::move(samples)), snr_db, seed).samples;
      },
      py::arg("samples"), py::arg("snr_db"), py::arg("seed"));
  m.def("draw_snr", &draw_snr, py::arg("low"), py::arg("high"), py::arg("seed"),
        py::arg("index"));
  m.def(
      "convolve_ir",
      [](std::vector<float> samples, std::vector<float> ir) {
        return convolve_ir(as_clip(std::move(samples)), as_clip(std::move(ir))).samples;
      },
      py::arg("samples"), py::arg("ir"));

  m.def(
      "simulate_corpus",
      [](std::size_t n_generators, std::size_t tracks_per_generator, std::size_t dim,
         double between_spread, double within_spread, double speaker_confound,
         std::size_t n_speakers, std::uint64_t seed) {
        SimSpec spec;
        spec.n_generators = n_generators;
        spec.tracks_per_generator = tracks_per_generator;
        spec.dim = dim;
        spec.between_spread = between_spread;
        spec.within_spread = within_spread;
        spec.speaker_confound = speaker_confound;
        spec.n_speakers = n_speakers;
        spec.seed = seed;
        const SimulatedCorpus corpus = simulate_corpus(spec);
        py::list rows;
        for (const auto &r : corpus.manifest.records()) rows.append(record_dict(r));
        py::dict store;
        for (const auto &e : corpus.store.entries()) store[py::str(e.track_id)] = e.values;
        return py::make_tuple(rows, store);
      },
      py::arg("n_generators") = 10, py::arg("tracks_per_generator") = 30,
      py::arg("dim") = 64, py::arg("between_spread") = 1.0,
      py::arg("within_spread") = 1.0, py::arg("speaker_confound") = 0.0,
      py::arg("n_speakers") = 10, py::arg("seed") = 0);

  m.def(
      "generate_trials",
      [](const std::vector<py::dict> &rows, std::size_t refs, std::uint64_t seed,
         const std::string &policy) {
        const Manifest manifest = manifest_from_dicts(rows);
        ProtocolConfig cfg;
        cfg.references_per_generator = refs;
        cfg.seed = seed;
        cfg.nontarget_policy = parse_policy(policy);
        const ReferenceMembership membership = sample_references(manifest, cfg);
        std::vector<std::tuple<std::string, std::string, int>> trials;
        for (const auto &t : generate_trials(manifest, membership, cfg))
          trials.emplace_back(t.query_track_id, t.reference_generator_id, t.label);
        return py::make_tuple(membership, trials);
      },
      py::arg("manifest"), py::arg("refs") = 5, py::arg("seed") = 0,
      py::arg("policy") = "all");

  m.def(
      "run_cli",
      [](const std::vector<std::string> &args) {
        std::vector<std::string> argv{"srcver"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(argv, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

  m.attr("__version__") = "0.1.0";
}

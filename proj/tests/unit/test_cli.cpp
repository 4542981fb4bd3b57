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

#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "helpers.hpp"
#include "srcver/audio.hpp"
#include "srcver/benchgen.hpp"
#include "srcver/csv.hpp"
#include "srcver/metrics.hpp"
#include "srcver/protocol.hpp"

using namespace srcver;
namespace fs = std::filesystem;
using nlohmann::json;

TEST_SUITE_BEGIN("cli");

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "srcver");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string p(const fs::path &path) { return path.string(); }

// Embedding-mode corpus written through the CLI.
fs::path simulate_embeddings(const fs::path &dir, std::size_t generators = 10,
                             const std::string &extra = "") {
  testing::spit(dir / "sim.json", R"({"mode":"embedding","n_generators":)" +
                                      std::to_string(generators) +
                                      R"(,"tracks_per_generator":12,"dim":16,)"
                                      R"("between_spread":2.0,"within_spread":1.0)" +
                                      extra + "}");
  const Outcome o = invoke({"--seed", "4", "simulate", "--spec", p(dir / "sim.json"), "--out-dir",
                         p(dir / "corpus")});
  REQUIRE(o.code == 0);
  return dir / "corpus";
}

std::size_t count_lines(const std::string &text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kExitUsage);
  const Outcome missing = invoke({"run", "--out-dir", "x"});
  CHECK(missing.code == cli::kExitUsage);
  CHECK(missing.err.find("--manifest") != std::string::npos);
  CHECK(invoke({"--help"}).code == cli::kExitOk);

  const auto dir = testing::scratch("cli_refs0");
  const fs::path corpus = simulate_embeddings(dir);
  CHECK(invoke({"trials", "--manifest", p(corpus / "manifest.csv"), "--refs", "0", "--out",
             p(dir / "t.csv")})
            .code == cli::kExitUsage);
  CHECK(invoke({"trials", "--manifest", p(corpus / "manifest.csv"), "--policy", "most", "--out",
             p(dir / "t.csv")})
            .code == cli::kExitUsage);
}

TEST_CASE("trials writes a refset sidecar and is reproducible") {
  const auto dir = testing::scratch("cli_trials");
  const fs::path corpus = simulate_embeddings(dir);
  const std::vector<std::string> args{"--seed", "9", "trials", "--manifest",
                                      p(corpus / "manifest.csv"), "--store",
                                      p(corpus / "store.jsonl"), "--out", p(dir / "t.csv")};
  REQUIRE(invoke(args).code == 0);
  const std::string refsets = testing::slurp(dir / "t.refsets.csv");
  CHECK(count_lines(refsets) == 1 + 50);
  const std::string first = testing::slurp(dir / "t.csv");
  REQUIRE(invoke(args).code == 0);
  CHECK(testing::slurp(dir / "t.csv") == first);
  CHECK(testing::slurp(dir / "t.refsets.csv") == refsets);

  const json meta = json::parse(testing::slurp(dir / "t.csv.meta.json"));
  CHECK(meta["tool"] == "srcver");
  CHECK(meta["seed"] == 9);
  CHECK(meta.contains("config_hash"));
}

TEST_CASE("score: jobs invariance, empty trials, unresolved ids") {
  const auto dir = testing::scratch("cli_score");
  const fs::path corpus = simulate_embeddings(dir);
  REQUIRE(invoke({"trials", "--manifest", p(corpus / "manifest.csv"), "--out", p(dir / "t.csv")})
              .code == 0);
  auto score = [&](const std::string &jobs, const fs::path &trials, const fs::path &out) {
    return invoke({"--jobs", jobs, "score", "--trials", p(trials), "--store",
                p(corpus / "store.jsonl"), "--refsets", p(dir / "t.refsets.csv"), "--manifest",
                p(corpus / "manifest.csv"), "--out", p(out)})
        .code;
  };
  REQUIRE(score("1", dir / "t.csv", dir / "s1.csv") == 0);
  REQUIRE(score("8", dir / "t.csv", dir / "s8.csv") == 0);
  CHECK(testing::slurp(dir / "s1.csv") == testing::slurp(dir / "s8.csv"));
  CHECK(count_lines(testing::slurp(dir / "s1.csv")) == count_lines(testing::slurp(dir / "t.csv")));

  testing::spit(dir / "empty.csv", "query_track_id,reference_generator_id,label\n");
  REQUIRE(score("2", dir / "empty.csv", dir / "se.csv") == 0);
  CHECK(testing::slurp(dir / "se.csv") == "query_track_id,reference_generator_id,label,score\n");

  testing::spit(dir / "ghost.csv", "query_track_id,reference_generator_id,label\nghost,gen00,1\n");
  CHECK(score("1", dir / "ghost.csv", dir / "sg.csv") == cli::kExitData);
}

TEST_CASE("query duplicating a reference scores 1") {
  const auto dir = testing::scratch("cli_duplicate");
  testing::spit(dir / "store.jsonl",
                R"({"track_id":"r1","dim":2,"values":[1,0]})"
                "\n"
                R"({"track_id":"r2","dim":2,"values":[0,1]})"
                "\n"
                R"({"track_id":"q","dim":2,"values":[1,0]})"
                "\n");
  testing::spit(dir / "refs.csv", "generator_id,track_id\ng,r1\ng,r2\n");
  testing::spit(dir / "t.csv", "query_track_id,reference_generator_id,label\nq,g,1\n");
  REQUIRE(invoke({"score", "--trials", p(dir / "t.csv"), "--store", p(dir / "store.jsonl"),
               "--refsets", p(dir / "refs.csv"), "--out", p(dir / "s.csv")})
              .code == 0);
  const auto scored = read_scores(dir / "s.csv");
  REQUIRE(scored.size() == 1);
  CHECK(scored[0].score == 1.0);
}

TEST_CASE("metrics on hand fixtures") {
  const auto dir = testing::scratch("cli_metrics");
  testing::spit(dir / "fixture.csv",
                "query_track_id,reference_generator_id,label,score\n"
                "a,g,1,0.8\nb,g,1,0.4\nc,g,0,0.6\nd,g,0,0.2\n");
  testing::spit(dir / "perfect.csv",
                "query_track_id,reference_generator_id,label,score\n"
                "a,g,1,0.9\nb,g,1,0.8\nc,g,0,0.2\nd,g,0,0.1\n");
  REQUIRE(invoke({"--format", "json", "metrics", "--scores", p(dir / "fixture.csv"), "--out",
               p(dir / "r.json"), "--roc-out", p(dir / "roc.csv")})
              .code == 0);
  const json r = json::parse(testing::slurp(dir / "r.json"));
  CHECK(r["eer_percent"] == 50.0);
  CHECK(r["auc_percent"] == 75.0);
  CHECK(nlohmann::ordered_json::parse(testing::slurp(dir / "r.json")).begin().key() == "metadata");
  CHECK(count_lines(testing::slurp(dir / "roc.csv")) == 1 + 5);

  REQUIRE(invoke({"metrics", "--scores", p(dir / "perfect.csv"), "--out", p(dir / "p.json")})
              .code == 0);
  const json q = json::parse(testing::slurp(dir / "p.json"));
  CHECK(q["eer_percent"] == 0.0);
  CHECK(q["auc_percent"] == 100.0);

  testing::spit(dir / "onesided.csv",
                "query_track_id,reference_generator_id,label,score\na,g,1,0.8\n");
  CHECK(invoke({"metrics", "--scores", p(dir / "onesided.csv"), "--out", p(dir / "o.json")}).code ==
        cli::kExitData);
  CHECK(invoke({"metrics", "--scores", p(dir / "nope.csv"), "--out", p(dir / "o.json")}).code ==
        cli::kExitIo);
}

TEST_CASE("metrics grouped by language") {
  const auto dir = testing::scratch("cli_grouped");
  const fs::path corpus = simulate_embeddings(dir, 10, R"(,"languages":["en","de","fr"])");
  const Outcome o = invoke({"--format", "json", "run", "--manifest", p(corpus / "manifest.csv"),
                         "--store", p(corpus / "store.jsonl"), "--group-by", "language",
                         "--out-dir", p(dir / "out")});
  REQUIRE(o.code == 0);
  const json r = json::parse(testing::slurp(dir / "out" / "report.json"));
  REQUIRE(r["groups"].size() == 3);
  for (const auto *lang : {"en", "de", "fr"}) CHECK(r["groups"].contains(lang));
  CHECK(r.contains("unweighted_mean"));
  CHECK(!o.out.empty());
}

TEST_CASE("extract: missing audio names the track") {
  const auto dir = testing::scratch("cli_extract");
  std::vector<TrackRecord> records;
  for (int i = 0; i < 4; ++i) {
    const std::string id = "t" + std::to_string(i);
    const AudioClip clip = synthesize_pseudo_speech(i, 4, i);
    write_wav(dir / (id + ".wav"), clip, SampleFormat::kPcm16);
    records.push_back({id, "g", "s", "en", Split::kTest, id + ".wav"});
  }
  write_manifest(dir / "m.csv", Manifest(records));
  REQUIRE(invoke({"extract", "--manifest", p(dir / "m.csv"), "--out", p(dir / "s.jsonl")}).code == 0);
  const std::string first = testing::slurp(dir / "s.jsonl");
  CHECK(count_lines(first) == 4);
  REQUIRE(invoke({"--jobs", "3", "extract", "--manifest", p(dir / "m.csv"), "--out",
               p(dir / "s2.jsonl")})
              .code == 0);
  CHECK(testing::slurp(dir / "s2.jsonl") == first);

  records.push_back({"lost_track", "g", "s", "en", Split::kTest, "lost.wav"});
  write_manifest(dir / "m2.csv", Manifest(records));
  const Outcome o = invoke({"extract", "--manifest", p(dir / "m2.csv"), "--out", p(dir / "s3.jsonl")});
  CHECK(o.code == cli::kExitData);
  CHECK(o.err.find("lost_track") != std::string::npos);
}

TEST_CASE("perturb: noise log, identity IR, failing tool") {
  const auto dir = testing::scratch("cli_perturb");
  std::vector<TrackRecord> records;
  for (int i = 0; i < 3; ++i) {
    const std::string id = "t" + std::to_string(i);
    write_wav(dir / (id + ".wav"), synthesize_pseudo_speech(i, 3, i));
    records.push_back({id, "g", "s", "en", Split::kTest, id + ".wav"});
  }
  write_manifest(dir / "m.csv", Manifest(records));

  testing::spit(dir / "noise.json", R"({"kind":"noise","snr_db_range":[15,25],"seed":2})");
  REQUIRE(invoke({"perturb", "--manifest", p(dir / "m.csv"), "--spec", p(dir / "noise.json"),
               "--out-dir", p(dir / "noisy"), "--out-manifest", p(dir / "noisy.csv")})
              .code == 0);
  const csv::Table log = csv::read(dir / "noisy.csv.perturb.csv");
  REQUIRE(log.rows.size() == 3);
  for (const auto &row : log.rows) {
    const double snr = csv::parse_double(row[2], "snr");
    CHECK(snr >= 15.0);
    CHECK(snr <= 25.0);
  }
  const Manifest noisy = read_manifest(dir / "noisy.csv");
  CHECK(load_audio(dir / noisy.at("t1").source).samples.size() == 64000);

  write_wav(dir / "delta.wav", AudioClip{{1.0f}});
  testing::spit(dir / "ir.json", R"({"kind":"ir_convolve","ir_path":"delta.wav"})");
  REQUIRE(invoke({"perturb", "--manifest", p(dir / "m.csv"), "--spec", p(dir / "ir.json"),
               "--out-dir", p(dir / "ir"), "--out-manifest", p(dir / "ir.csv")})
              .code == 0);
  const Manifest ir = read_manifest(dir / "ir.csv");
  for (const auto &r : records)
    CHECK(load_audio(dir / ir.at(r.track_id).source).samples ==
          load_audio(dir / r.source).samples);

  testing::spit(dir / "ext.json",
                R"({"kind":"external","command_template":"srcver-missing-tool {in} {out}"})");
  const Outcome o = invoke({"perturb", "--manifest", p(dir / "m.csv"), "--spec",
                         p(dir / "ext.json"), "--out-dir", p(dir / "ext"), "--out-manifest",
                         p(dir / "ext.csv")});
  CHECK(o.code == cli::kExitIo);
  CHECK(o.err.find("t0") != std::string::npos);
}

TEST_CASE("simulate: embedding and audio trees are reproducible") {
  const auto a = testing::scratch("cli_sim_a");
  const auto b = testing::scratch("cli_sim_b");
  const std::string spec =
      R"({"mode":"audio","n_generators":2,"tracks_per_generator":3,"fingerprints":"distinct"})";
  testing::spit(a / "sim.json", spec);
  REQUIRE(invoke({"--seed", "3", "simulate", "--spec", p(a / "sim.json"), "--out-dir", p(a / "c")})
              .code == 0);
  REQUIRE(invoke({"--seed", "3", "--jobs", "2", "simulate", "--spec", p(a / "sim.json"), "--out-dir",
               p(b / "c")})
              .code == 0);
  const Manifest m = read_manifest(a / "c" / "manifest.csv");
  REQUIRE(m.size() == 6);
  CHECK(testing::slurp(a / "c" / "manifest.csv") == testing::slurp(b / "c" / "manifest.csv"));
  for (const auto &r : m.records())
    CHECK(testing::slurp(a / "c" / r.source) == testing::slurp(b / "c" / r.source));

  const fs::path corpus = simulate_embeddings(a);
  CHECK(fs::exists(corpus / "store.jsonl"));
  CHECK(fs::exists(corpus / "manifest.csv.meta.json"));
}

TEST_CASE("run matches the staged commands byte for byte") {
  const auto dir = testing::scratch("cli_run");
  testing::spit(dir / "sim.json",
                R"({"mode":"audio","n_generators":3,"tracks_per_generator":8,"seed":5})");
  REQUIRE(invoke({"simulate", "--spec", p(dir / "sim.json"), "--out-dir", p(dir / "c")}).code == 0);
  const std::string m = p(dir / "c" / "manifest.csv");

  REQUIRE(invoke({"--seed", "6", "--jobs", "2", "run", "--manifest", m, "--out-dir",
               p(dir / "run")})
              .code == 0);

  const fs::path s = dir / "staged";
  fs::create_directories(s);
  REQUIRE(invoke({"--seed", "6", "extract", "--manifest", m, "--out", p(s / "store.jsonl")}).code ==
          0);
  REQUIRE(invoke({"--seed", "6", "trials", "--manifest", m, "--store", p(s / "store.jsonl"), "--out",
               p(s / "trials.csv"), "--refsets-out", p(s / "refsets.csv")})
              .code == 0);
  REQUIRE(invoke({"--seed", "6", "score", "--trials", p(s / "trials.csv"), "--store",
               p(s / "store.jsonl"), "--refsets", p(s / "refsets.csv"), "--manifest", m, "--out",
               p(s / "scores.csv")})
              .code == 0);
  REQUIRE(invoke({"--seed", "6", "metrics", "--scores", p(s / "scores.csv"), "--manifest", m,
               "--out", p(s / "report.json")})
              .code == 0);

  for (const char *name : {"store.jsonl", "trials.csv", "refsets.csv", "scores.csv",
                           "report.json", "store.jsonl.meta.json", "trials.csv.meta.json",
                           "scores.csv.meta.json"}) {
    INFO(name);
    CHECK(testing::slurp(dir / "run" / name) == testing::slurp(s / name));
  }
  const json r = json::parse(testing::slurp(dir / "run" / "report.json"));
  CHECK(r["eer_percent"].get<double>() < 10.0);
}

TEST_SUITE_END();

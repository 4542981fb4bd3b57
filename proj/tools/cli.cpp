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

#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "srcver/artifacts.hpp"
#include "srcver/benchgen.hpp"
#include "srcver/csv.hpp"
#include "srcver/error.hpp"
#include "srcver/features.hpp"
#include "srcver/metrics.hpp"
#include "srcver/parallel.hpp"
#include "srcver/perturb.hpp"
#include "srcver/pipeline.hpp"
#include "srcver/protocol.hpp"
#include "srcver/store.hpp"

namespace fs = std::filesystem;

namespace srcver::cli {

namespace {

enum class Level { kError = 0, kWarn, kInfo, kDebug };

struct Globals {
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string format = "human";
  std::string log_level = "warn";
};

class Logger {
 public:
  Logger(std::ostream &err, const std::string &level) : err_(err) {
    if (level == "error") level_ = Level::kError;
    else if (level == "info") level_ = Level::kInfo;
    else if (level == "debug") level_ = Level::kDebug;
  }
  void warn(const std::string &msg) const { emit(Level::kWarn, "warning", msg); }
  void info(const std::string &msg) const { emit(Level::kInfo, "info", msg); }

 private:
  void emit(Level level, const char *tag, const std::string &msg) const {
    if (level <= level_) err_ << "srcver: " << tag << ": " << msg << '\n';
  }
  std::ostream &err_;
  Level level_ = Level::kWarn;
};

// Error carrying its own exit code, for failures that do not map through Errc.
struct ExitError : std::runtime_error {
  ExitError(int code, const std::string &what) : std::runtime_error(what), code(code) {}
  int code;
};

constexpr std::uint64_t kDefaultSeed = 0;

struct ExtractOptions {
  fs::path manifest;
  fs::path out;
  fs::path config;
};

struct TrialsOptions {
  fs::path manifest;
  fs::path store;
  fs::path out;
  fs::path refsets_out;
  std::size_t refs = 5;
  std::string policy = "all";
  std::string language, speaker, generator;
};

struct ScoreOptions {
  fs::path trials;
  fs::path store;
  fs::path refsets;
  fs::path manifest;
  fs::path out;
  std::string agg = "max";
};

struct MetricsOptions {
  fs::path scores;
  fs::path manifest;
  fs::path out;
  fs::path roc_out;
  std::string group_by;
};

struct PerturbOptions {
  fs::path manifest;
  fs::path spec;
  fs::path out_dir;
  fs::path out_manifest;
};

struct SimulateOptions {
  fs::path spec;
  fs::path out_dir;
};

struct RunOptions {
  fs::path manifest;
  fs::path store;
  fs::path out_dir;
  fs::path config;
  std::size_t refs = 5;
  std::string policy = "all";
  std::string agg = "max";
  std::string group_by;
};

ExtractorConfig load_extractor_config(const fs::path &path) {
  if (path.empty()) return {};
  return parse_extractor_config(read_text(path));
}

void ensure_parent(const fs::path &path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(Errc::kIoError, "cannot create '" + path.parent_path().string() + "'");
  }
}

// ---- stages -------------------------------------------------------------

void stage_extract(const ExtractOptions &o, const Globals &g, const Logger &log,
                   std::ostream &err) {
  const Manifest manifest = read_manifest(o.manifest);
  const ExtractorConfig cfg = load_extractor_config(o.config);
  const ExtractionResult result =
      extract_manifest(manifest, o.manifest.parent_path(), cfg, g.jobs);
  ensure_parent(o.out);
  write_embeddings(o.out, result.store);
  write_sidecar(o.out, run_metadata("extract", to_json(cfg)));
  log.info("wrote " + std::to_string(result.store.size()) + " embeddings to " +
           o.out.string());
  if (!result.failures.empty()) {
    for (const auto &f : result.failures)
      err << "srcver: extract failed for track '" << f.track_id << "': " << f.message
          << '\n';
    throw ExitError(kExitData, std::to_string(result.failures.size()) +
                                   " track(s) failed extraction");
  }
}

fs::path default_refsets_path(const fs::path &trials) {
  fs::path p = trials;
  p.replace_extension();
  return fs::path(p.string() + ".refsets.csv");
}

void stage_trials(const TrialsOptions &o, const Globals &g, const Logger &log) {
  const Manifest manifest = read_manifest(o.manifest);
  ProtocolConfig cfg;
  cfg.references_per_generator = o.refs;
  cfg.seed = g.seed.value_or(kDefaultSeed);
  cfg.nontarget_policy = parse_policy(o.policy);
  if (!o.language.empty()) cfg.filter.language = o.language;
  if (!o.speaker.empty()) cfg.filter.speaker_id = o.speaker;
  if (!o.generator.empty()) cfg.filter.generator_id = o.generator;

  const ReferenceMembership membership = sample_references(manifest, cfg);
  if (!o.store.empty()) {
    // Fails early on references the scorer could not resolve.
    resolve_reference_sets(membership, manifest, ingest_embeddings(o.store));
  }
  const std::vector<Trial> trials = generate_trials(manifest, membership, cfg);
  const auto problems = audit_protocol(manifest, membership, trials);
  if (!problems.empty())
    throw Error(Errc::kMalformedRecord, "protocol audit failed: " + problems.front());

  ordered_json config;
  config["references_per_generator"] = cfg.references_per_generator;
  config["nontarget_policy"] = to_string(cfg.nontarget_policy);
  ordered_json filter = ordered_json::object();
  if (cfg.filter.language) filter["language"] = *cfg.filter.language;
  if (cfg.filter.speaker_id) filter["speaker_id"] = *cfg.filter.speaker_id;
  if (cfg.filter.generator_id) filter["generator_id"] = *cfg.filter.generator_id;
  config["filter"] = filter;

  const fs::path refsets = o.refsets_out.empty() ? default_refsets_path(o.out) : o.refsets_out;
  ensure_parent(o.out);
  ensure_parent(refsets);
  write_trials(o.out, trials);
  write_sidecar(o.out, run_metadata("trials", config, cfg.seed));
  write_membership(refsets, membership);
  write_sidecar(refsets, run_metadata("refsets", config, cfg.seed));
  log.info("wrote " + std::to_string(trials.size()) + " trials, " +
           std::to_string(membership.size()) + " reference sets");
}

void stage_score(const ScoreOptions &o, const Globals &g, const Logger &log) {
  const std::vector<Trial> trials = read_trials(o.trials);
  const EmbeddingStore store = ingest_embeddings(o.store);
  const ReferenceMembership membership = read_membership(o.refsets);
  std::optional<Manifest> manifest;
  if (!o.manifest.empty()) manifest = read_manifest(o.manifest);
  const Manifest empty;
  const auto refsets =
      resolve_reference_sets(membership, manifest ? *manifest : empty, store);
  const Aggregation agg = parse_aggregation(o.agg);
  const auto scored = score_trials(trials, refsets, store,
                                   manifest ? &*manifest : nullptr, agg, g.jobs);
  ordered_json config;
  config["aggregation"] = to_string(agg);
  ensure_parent(o.out);
  write_scores(o.out, scored);
  write_sidecar(o.out, run_metadata("score", config));
  log.info("scored " + std::to_string(scored.size()) + " trials");
}

void print_report(const MetricsReport &report, const std::string &group_by,
                  const std::string &format, std::ostream &out) {
  auto fmt1 = [](const std::optional<double> &v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *v);
    return std::string(buf);
  };
  std::vector<std::pair<std::string, const MetricsReport *>> rows{{"pooled", &report}};
  for (const auto &[key, sub] : report.groups)
    rows.emplace_back((group_by.empty() ? "" : group_by + "=") + key, &sub);

  if (format == "json") {
    out << report_to_json(report).dump(2) << '\n';
  } else if (format == "csv") {
    out << "condition,eer_percent,auc_percent,n_target,n_nontarget\n";
    for (const auto &[name, r] : rows) {
      auto v4 = [](const std::optional<double> &v) {
        return v ? csv::format_double(round4(*v)) : std::string();
      };
      out << csv::format_row({name, v4(r->eer_percent), v4(r->auc_percent),
                              std::to_string(r->n_target), std::to_string(r->n_nontarget)})
          << '\n';
    }
  } else {
    std::size_t width = 9;
    for (const auto &row : rows) width = std::max(width, row.first.size());
    char line[256];
    std::snprintf(line, sizeof line, "%-*s  %7s  %7s  %9s  %10s\n", static_cast<int>(width),
                  "condition", "EER (%)", "AUC (%)", "targets", "nontargets");
    out << line;
    for (const auto &[name, r] : rows) {
      std::snprintf(line, sizeof line, "%-*s  %7s  %7s  %9zu  %10zu\n",
                    static_cast<int>(width), name.c_str(), fmt1(r->eer_percent).c_str(),
                    fmt1(r->auc_percent).c_str(), r->n_target, r->n_nontarget);
      out << line;
    }
  }
}

void stage_metrics(const MetricsOptions &o, const Globals &g, const Logger &log,
                   std::ostream &out) {
  const std::vector<ScoredTrial> scored = read_scores(o.scores);
  MetricsReport report;
  ordered_json config;
  config["group_by"] = o.group_by.empty() ? ordered_json(nullptr) : ordered_json(o.group_by);
  if (o.group_by.empty()) {
    report = make_report(scored);
  } else {
    const GroupKey key = parse_group_key(o.group_by);
    std::optional<Manifest> manifest;
    if (!o.manifest.empty()) manifest = read_manifest(o.manifest);
    if (key != GroupKey::kReferenceGenerator && !manifest)
      throw ExitError(kExitUsage, "--group-by " + o.group_by + " requires --manifest");
    report = grouped_report(scored, manifest ? &*manifest : nullptr, key);
  }
  if (!report.eer_percent)
    throw Error(Errc::kDegenerateTrialSet,
                std::to_string(report.n_target) + " target and " +
                    std::to_string(report.n_nontarget) + " nontarget trials");

  ordered_json doc;
  doc["metadata"] = run_metadata("metrics", config);
  const ordered_json body = report_to_json(report);
  for (const auto &[k, v] : body.items()) doc[k] = v;
  if (!report.groups.empty()) {
    std::vector<MetricsReport> subs;
    for (const auto &[key, sub] : report.groups) subs.push_back(sub);
    const MeanMetrics mean = unweighted_mean(subs);
    ordered_json m;
    m["eer_percent"] = mean.eer_percent ? ordered_json(round4(*mean.eer_percent)) : ordered_json(nullptr);
    m["auc_percent"] = mean.auc_percent ? ordered_json(round4(*mean.auc_percent)) : ordered_json(nullptr);
    m["n_groups"] = mean.n_reports;
    doc["unweighted_mean"] = m;
  }
  ensure_parent(o.out);
  write_json(o.out, doc);
  if (!o.roc_out.empty()) {
    ensure_parent(o.roc_out);
    write_roc_csv(o.roc_out, compute_roc(scored));
    write_sidecar(o.roc_out, run_metadata("roc", config));
  }
  print_report(report, o.group_by, g.format, out);
  log.info("wrote report to " + o.out.string());
}

std::string safe_file_stem(const std::string &id) {
  std::string s = id;
  for (char &c : s)
    if (c == '/' || c == '\\' || c == ':') c = '_';
  return s;
}

void stage_perturb(const PerturbOptions &o, const Globals &g, const Logger &log) {
  const Manifest manifest = read_manifest(o.manifest);
  PerturbSpec spec = read_perturb_spec(o.spec);
  if (g.seed) spec.seed = *g.seed;

  std::vector<AudioClip> irs;
  for (const auto &p : spec.ir_paths) irs.push_back(load_audio(p));

  const fs::path audio_dir = o.out_dir / "audio";
  const fs::path work_dir = o.out_dir / "tmp";
  std::error_code ec;
  fs::create_directories(audio_dir, ec);
  if (ec) throw Error(Errc::kIoError, "cannot create '" + audio_dir.string() + "'");
  ensure_parent(o.out_manifest);
  const fs::path manifest_dir =
      o.out_manifest.has_parent_path() ? o.out_manifest.parent_path() : fs::path(".");

  const auto &records = manifest.records();
  std::vector<TrackRecord> out_records = records;
  std::vector<csv::Row> log_rows(records.size());
  std::vector<bool> touched(records.size(), false);
  parallel_for(records.size(), g.jobs, [&](std::size_t i) {
    const TrackRecord &r = records[i];
    if (r.is_embedding_source()) return;
    try {
      const AudioClip clip = load_audio(o.manifest.parent_path() / r.source);
      const PerturbOutcome outcome = apply_perturbation(clip, spec, i, irs, work_dir);
      const fs::path wav = audio_dir / (safe_file_stem(r.track_id) + ".wav");
      write_wav(wav, outcome.clip, SampleFormat::kFloat32);
      out_records[i].source =
          fs::relative(fs::absolute(wav), fs::absolute(manifest_dir)).generic_string();
      log_rows[i] = {r.track_id, to_string(spec.kind),
                     outcome.snr_db ? csv::format_double(*outcome.snr_db) : "",
                     outcome.ir_path};
      touched[i] = true;
    } catch (const Error &e) {
      throw Error(e.code(), "track '" + r.track_id + "': " + e.detail());
    }
  });
  fs::remove_all(work_dir, ec);

  std::vector<csv::Row> rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (touched[i]) rows.push_back(std::move(log_rows[i]));
    else log.warn("track '" + records[i].track_id + "' has an embedding source; copied unchanged");
  }
  write_manifest(o.out_manifest, Manifest(std::move(out_records)));
  const ordered_json config = ordered_json::parse(perturb_spec_json(spec));
  write_sidecar(o.out_manifest, run_metadata("perturb", config, spec.seed));
  const fs::path applied = fs::path(o.out_manifest.string() + ".perturb.csv");
  csv::write(applied, {"track_id", "kind", "snr_db", "ir_path"}, rows);
  log.info("perturbed " + std::to_string(rows.size()) + " tracks");
}

void stage_simulate(const SimulateOptions &o, const Globals &g, const Logger &log) {
  SimRequest req = parse_sim_request(read_text(o.spec));
  if (g.seed) req.spec.seed = *g.seed;
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw Error(Errc::kIoError, "cannot create '" + o.out_dir.string() + "'");
  const fs::path manifest_path = o.out_dir / "manifest.csv";
  const ordered_json meta = run_metadata("simulate", to_json(req), req.spec.seed);
  if (req.mode == SimMode::kEmbedding) {
    const SimulatedCorpus corpus = simulate_corpus(req.spec);
    write_manifest(manifest_path, corpus.manifest);
    write_embeddings(o.out_dir / "store.jsonl", corpus.store);
    write_sidecar(o.out_dir / "store.jsonl", meta);
  } else {
    const auto bank = fingerprint_bank(req.fingerprints, req.spec.n_generators);
    const Manifest manifest = simulate_audio_corpus(req.spec, bank, o.out_dir, g.jobs);
    write_manifest(manifest_path, manifest);
  }
  write_sidecar(manifest_path, meta);
  log.info("simulated corpus in " + o.out_dir.string());
}

void stage_run(const RunOptions &o, const Globals &g, const Logger &log,
               std::ostream &out, std::ostream &err) {
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw Error(Errc::kIoError, "cannot create '" + o.out_dir.string() + "'");
  fs::path store = o.store;
  if (store.empty()) {
    store = o.out_dir / "store.jsonl";
    stage_extract({o.manifest, store, o.config}, g, log, err);
  }
  TrialsOptions t;
  t.manifest = o.manifest;
  t.store = store;
  t.out = o.out_dir / "trials.csv";
  t.refsets_out = o.out_dir / "refsets.csv";
  t.refs = o.refs;
  t.policy = o.policy;
  stage_trials(t, g, log);

  ScoreOptions s;
  s.trials = t.out;
  s.store = store;
  s.refsets = t.refsets_out;
  s.manifest = o.manifest;
  s.out = o.out_dir / "scores.csv";
  s.agg = o.agg;
  stage_score(s, g, log);

  MetricsOptions m;
  m.scores = s.out;
  m.manifest = o.manifest;
  m.out = o.out_dir / "report.json";
  m.group_by = o.group_by;
  stage_metrics(m, g, log, out);
}

int exit_code_for(const Error &e) {
  if (is_io_error(e.code())) return kExitIo;
  if (e.code() == Errc::kInvalidArgument) return kExitUsage;
  return kExitData;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"srcver: source verification for synthetic speech", "srcver"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every randomized stage (default 0)");
  app.add_option("--jobs", g.jobs, "Worker threads; outputs do not depend on it")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Console summary format")
      ->check(CLI::IsMember({"json", "csv", "human"}));
  app.add_option("--log-level", g.log_level, "error|warn|info|debug")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

  ExtractOptions xo;
  auto *extract = app.add_subcommand("extract", "Compute baseline embeddings for a manifest");
  extract->add_option("--manifest", xo.manifest, "Manifest CSV")->required();
  extract->add_option("--out", xo.out, "Embedding store (JSON Lines)")->required();
  extract->add_option("--config", xo.config, "Extractor config JSON");

  TrialsOptions to;
  auto *trials = app.add_subcommand("trials", "Enroll reference sets and emit trials");
  trials->add_option("--manifest", to.manifest, "Manifest CSV")->required();
  trials->add_option("--store", to.store, "Embedding store used to check references");
  trials->add_option("--refs", to.refs, "Reference tracks per generator")
      ->check(CLI::PositiveNumber);
  trials->add_option("--policy", to.policy, "Nontarget policy")
      ->check(CLI::IsMember({"all", "balanced"}));
  trials->add_option("--out", to.out, "Trial CSV")->required();
  trials->add_option("--refsets-out", to.refsets_out,
                     "Reference membership CSV (default <out>.refsets.csv)");
  trials->add_option("--language", to.language, "Keep only tracks in this language");
  trials->add_option("--speaker", to.speaker, "Keep only tracks of this speaker");
  trials->add_option("--generator", to.generator, "Keep only tracks of this generator");

  ScoreOptions so;
  auto *score = app.add_subcommand("score", "Score trials against reference sets");
  score->add_option("--trials", so.trials, "Trial CSV")->required();
  score->add_option("--store", so.store, "Embedding store")->required();
  score->add_option("--refsets", so.refsets, "Reference membership CSV")->required();
  score->add_option("--manifest", so.manifest, "Manifest mapping track ids to store keys");
  score->add_option("--out", so.out, "Score CSV")->required();
  score->add_option("--agg", so.agg, "Aggregation over reference members")
      ->check(CLI::IsMember({"max", "mean", "median"}));

  MetricsOptions mo;
  auto *metrics = app.add_subcommand("metrics", "EER/AUC report from scores");
  metrics->add_option("--scores", mo.scores, "Score CSV")->required();
  metrics->add_option("--group-by", mo.group_by, "Per-group breakdown key")
      ->check(CLI::IsMember({"language", "speaker_id", "reference_generator_id"}));
  metrics->add_option("--manifest", mo.manifest, "Manifest for language/speaker grouping");
  metrics->add_option("--out", mo.out, "Report JSON")->required();
  metrics->add_option("--roc-out", mo.roc_out, "Optional ROC CSV (threshold,fpr,fnr)");

  PerturbOptions po;
  auto *perturb = app.add_subcommand("perturb", "Apply a post-processing operator to a corpus");
  perturb->add_option("--manifest", po.manifest, "Manifest CSV")->required();
  perturb->add_option("--spec", po.spec, "Perturbation spec JSON")->required();
  perturb->add_option("--out-dir", po.out_dir, "Directory for perturbed WAVs")->required();
  perturb->add_option("--out-manifest", po.out_manifest, "Manifest of the perturbed corpus")
      ->required();

  SimulateOptions mo_sim;
  auto *simulate = app.add_subcommand("simulate", "Generate a synthetic benchmark corpus");
  simulate->add_option("--spec", mo_sim.spec, "Simulation spec JSON")->required();
  simulate->add_option("--out-dir", mo_sim.out_dir, "Output directory")->required();

  RunOptions ro;
  auto *runcmd = app.add_subcommand("run", "extract -> trials -> score -> metrics");
  runcmd->add_option("--manifest", ro.manifest, "Manifest CSV")->required();
  runcmd->add_option("--store", ro.store, "Existing embedding store (skips extraction)");
  runcmd->add_option("--refs", ro.refs, "Reference tracks per generator")
      ->check(CLI::PositiveNumber);
  runcmd->add_option("--policy", ro.policy, "Nontarget policy")
      ->check(CLI::IsMember({"all", "balanced"}));
  runcmd->add_option("--agg", ro.agg, "Aggregation")
      ->check(CLI::IsMember({"max", "mean", "median"}));
  runcmd->add_option("--group-by", ro.group_by, "Per-group breakdown key")
      ->check(CLI::IsMember({"language", "speaker_id", "reference_generator_id"}));
  runcmd->add_option("--config", ro.config, "Extractor config JSON");
  runcmd->add_option("--out-dir", ro.out_dir, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    CLI::App *target = &app;
    for (auto *sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    CLI::App *target = &app;
    for (auto *sub : app.get_subcommands()) target = sub;
    err << "srcver: " << e.what() << "\n\n" << target->help();
    return kExitUsage;
  }

  const Logger log(err, g.log_level);
  try {
    if (*extract) stage_extract(xo, g, log, err);
    else if (*trials) stage_trials(to, g, log);
    else if (*score) stage_score(so, g, log);
    else if (*metrics) stage_metrics(mo, g, log, out);
    else if (*perturb) stage_perturb(po, g, log);
    else if (*simulate) stage_simulate(mo_sim, g, log);
    else if (*runcmd) stage_run(ro, g, log, out, err);
  } catch (const ExitError &e) {
    err << "srcver: error: " << e.what() << '\n';
    return e.code;
  } catch (const Error &e) {
    err << "srcver: error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error &e) {
    err << "srcver: error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception &e) {
    err << "srcver: error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace srcver::cli

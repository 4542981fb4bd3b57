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

#include "srcver/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srcver/csv.hpp"
#include "srcver/error.hpp"

namespace srcver {

namespace {

struct ClassCounts {
  std::size_t target = 0;
  std::size_t nontarget = 0;
};

ClassCounts count_classes(std::span<const ScoredTrial> scored) {
  ClassCounts c;
  for (const auto &s : scored) {
    if (!std::isfinite(s.score))
      throw Error(Errc::kNonFinite,
                  "score for query '" + s.trial.query_track_id + "' is not finite");
    (s.trial.label == 1 ? c.target : c.nontarget)++;
  }
  return c;
}

void require_both_classes(const ClassCounts &c) {
  if (c.target == 0 || c.nontarget == 0)
    throw Error(Errc::kDegenerateTrialSet,
                std::to_string(c.target) + " target and " +
                    std::to_string(c.nontarget) + " nontarget trials");
}

}  // namespace

RocCurve compute_roc(std::span<const ScoredTrial> scored) {
  const ClassCounts counts = count_classes(scored);
  require_both_classes(counts);

  std::vector<std::pair<double, int>> sorted;
  sorted.reserve(scored.size());
  for (const auto &s : scored) sorted.emplace_back(s.score, s.trial.label);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto &a, const auto &b) { return a.first > b.first; });

  const double nt = static_cast<double>(counts.target);
  const double nn = static_cast<double>(counts.nontarget);
  RocCurve roc;
  roc.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
  std::size_t accepted_targets = 0, accepted_nontargets = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double threshold = sorted[i].first;
    for (; i < sorted.size() && sorted[i].first == threshold; ++i)
      (sorted[i].second == 1 ? accepted_targets : accepted_nontargets)++;
    roc.points.push_back({threshold, accepted_nontargets / nn,
                          (counts.target - accepted_targets) / nt});
  }
  return roc;
}

double compute_eer(const RocCurve &roc) {
  const auto &p = roc.points;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i].fpr - p[i].fnr;
    if (d < 0.0) continue;
    if (d == 0.0 || i == 0) return 100.0 * p[i].fpr;
    const double d_prev = p[i - 1].fpr - p[i - 1].fnr;
    const double t = -d_prev / (d - d_prev);
    return 100.0 * (p[i - 1].fpr + t * (p[i].fpr - p[i - 1].fpr));
  }
  return 100.0 * p.back().fpr;
}

double compute_auc(std::span<const ScoredTrial> scored) {
  const ClassCounts counts = count_classes(scored);
  require_both_classes(counts);

  std::vector<std::pair<double, int>> sorted;
  sorted.reserve(scored.size());
  for (const auto &s : scored) sorted.emplace_back(s.score, s.trial.label);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });

  // Twice the Mann-Whitney U, accumulated in integers: each tie block
  // contributes 2 * (nontargets strictly below) + (nontargets in block) per
  // target in the block.
  unsigned long long twice_u = 0;
  std::size_t nontargets_below = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i, block_targets = 0, block_nontargets = 0;
    for (; j < sorted.size() && sorted[j].first == sorted[i].first; ++j)
      (sorted[j].second == 1 ? block_targets : block_nontargets)++;
    twice_u += static_cast<unsigned long long>(block_targets) *
               (2 * nontargets_below + block_nontargets);
    nontargets_below += block_nontargets;
    i = j;
  }
  const double pairs = 2.0 * static_cast<double>(counts.target) *
                       static_cast<double>(counts.nontarget);
  return 100.0 * static_cast<double>(twice_u) / pairs;
}

double trapezoidal_auc(const RocCurve &roc) {
  double area = 0.0;
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    const auto &a = roc.points[i - 1];
    const auto &b = roc.points[i];
    area += (b.fpr - a.fpr) * ((1.0 - a.fnr) + (1.0 - b.fnr)) * 0.5;
  }
  return 100.0 * area;
}

MetricsReport make_report(std::span<const ScoredTrial> scored) {
  const ClassCounts counts = count_classes(scored);
  MetricsReport report;
  report.n_target = counts.target;
  report.n_nontarget = counts.nontarget;
  if (counts.target > 0 && counts.nontarget > 0) {
    report.eer_percent = compute_eer(compute_roc(scored));
    report.auc_percent = compute_auc(scored);
  }
  return report;
}

GroupKey parse_group_key(const std::string &text) {
  if (text == "language") return GroupKey::kLanguage;
  if (text == "speaker_id") return GroupKey::kSpeaker;
  if (text == "reference_generator_id") return GroupKey::kReferenceGenerator;
  throw Error(Errc::kInvalidArgument, "unknown group key '" + text + "'");
}

std::string to_string(GroupKey key) {
  switch (key) {
    case GroupKey::kLanguage: return "language";
    case GroupKey::kSpeaker: return "speaker_id";
    case GroupKey::kReferenceGenerator: return "reference_generator_id";
  }
  return "language";
}

MetricsReport grouped_report(std::span<const ScoredTrial> scored,
                             const Manifest *manifest, GroupKey key) {
  if (key != GroupKey::kReferenceGenerator && manifest == nullptr)
    throw Error(Errc::kInvalidArgument,
                "grouping by " + to_string(key) + " needs a manifest");
  std::map<std::string, std::vector<ScoredTrial>> buckets;
  for (const auto &s : scored) {
    std::string value;
    switch (key) {
      case GroupKey::kLanguage:
        value = manifest->at(s.trial.query_track_id).language;
        break;
      case GroupKey::kSpeaker:
        value = manifest->at(s.trial.query_track_id).speaker_id;
        break;
      case GroupKey::kReferenceGenerator:
        value = s.trial.reference_generator_id;
        break;
    }
    buckets[value].push_back(s);
  }
  MetricsReport pooled = make_report(scored);
  for (const auto &[value, trials] : buckets)
    pooled.groups.emplace(value, make_report(trials));
  return pooled;
}

MeanMetrics unweighted_mean(std::span<const MetricsReport> reports) {
  MeanMetrics mean;
  double eer = 0.0, auc = 0.0;
  for (const auto &r : reports) {
    if (!r.eer_percent || !r.auc_percent) continue;
    eer += *r.eer_percent;
    auc += *r.auc_percent;
    ++mean.n_reports;
  }
  if (mean.n_reports > 0) {
    mean.eer_percent = eer / mean.n_reports;
    mean.auc_percent = auc / mean.n_reports;
  }
  return mean;
}

const std::vector<std::string> kScoreHeader = {
    "query_track_id", "reference_generator_id", "label", "score"};

std::vector<ScoredTrial> read_scores(const std::filesystem::path &path) {
  const csv::Table table = csv::read(path, kScoreHeader);
  std::vector<ScoredTrial> scored;
  scored.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto &row = table.rows[i];
    const std::string where = path.string() + ":" + std::to_string(table.lines[i]);
    if (row[2] != "0" && row[2] != "1")
      throw Error(Errc::kMalformedRecord, where + ": label must be 0 or 1");
    const double score = csv::parse_double(row[3], where);
    if (!std::isfinite(score))
      throw Error(Errc::kMalformedRecord, where + ": score is not finite");
    scored.push_back({{row[0], row[1], row[2] == "1" ? 1 : 0}, score});
  }
  return scored;
}

void write_scores(const std::filesystem::path &path,
                  std::span<const ScoredTrial> scored) {
  std::vector<csv::Row> rows;
  rows.reserve(scored.size());
  for (const auto &s : scored)
    rows.push_back({s.trial.query_track_id, s.trial.reference_generator_id,
                    std::to_string(s.trial.label), csv::format_double(s.score)});
  csv::write(path, kScoreHeader, rows);
}

void write_roc_csv(const std::filesystem::path &path, const RocCurve &roc) {
  std::vector<csv::Row> rows;
  rows.reserve(roc.points.size());
  for (const auto &p : roc.points)
    rows.push_back({std::isinf(p.threshold) ? "inf" : csv::format_double(p.threshold),
                    csv::format_double(p.fpr), csv::format_double(p.fnr)});
  csv::write(path, {"threshold", "fpr", "fnr"}, rows);
}

double round4(double value) { return std::round(value * 1e4) / 1e4; }

}  // namespace srcver

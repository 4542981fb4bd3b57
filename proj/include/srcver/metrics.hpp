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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srcver/protocol.hpp"

namespace srcver {

struct ScoredTrial {
  Trial trial;
  double score = 0.0;
};

// A trial is accepted when score >= threshold.
struct RocPoint {
  double threshold;
  double fpr;
  double fnr;
};

// Vertices in order of strictly decreasing threshold, starting at
// (+inf, fpr 0, fnr 1) and ending at (min score, fpr 1, fnr 0).
struct RocCurve {
  std::vector<RocPoint> points;
};

// Ties are processed as one threshold step, so the curve does not depend on
// the order of equal scores. Throws kDegenerateTrialSet when either class is
// missing and kNonFinite on a NaN/Inf score.
RocCurve compute_roc(std::span<const ScoredTrial> scored);

// EER in percent: the first vertex with fpr == fnr, otherwise the linear
// interpolation of the ROC segment on which fpr - fnr changes sign.
double compute_eer(const RocCurve &roc);

// Rank-based (Mann-Whitney) AUC in percent, ties counting one half.
// Throws kDegenerateTrialSet.
double compute_auc(std::span<const ScoredTrial> scored);

// Trapezoidal area under TPR versus FPR, in percent.
double trapezoidal_auc(const RocCurve &roc);

struct MetricsReport {
  // Unset when one class is absent.
  std::optional<double> eer_percent;
  std::optional<double> auc_percent;
  std::size_t n_target = 0;
  std::size_t n_nontarget = 0;
  std::map<std::string, MetricsReport> groups;
};

MetricsReport make_report(std::span<const ScoredTrial> scored);

enum class GroupKey { kLanguage, kSpeaker, kReferenceGenerator };

GroupKey parse_group_key(const std::string &text);
std::string to_string(GroupKey key);

// Pooled report plus one report per group value. Language and speaker keys
// come from the query track's manifest row (kUnknownTrackId if absent).
MetricsReport grouped_report(std::span<const ScoredTrial> scored,
                             const Manifest *manifest, GroupKey key);

// Unweighted mean over reports that define both metrics; unset if none do.
struct MeanMetrics {
  std::optional<double> eer_percent;
  std::optional<double> auc_percent;
  std::size_t n_reports = 0;
};
MeanMetrics unweighted_mean(std::span<const MetricsReport> reports);

extern const std::vector<std::string> kScoreHeader;

std::vector<ScoredTrial> read_scores(const std::filesystem::path &path);
void write_scores(const std::filesystem::path &path,
                  std::span<const ScoredTrial> scored);
void write_roc_csv(const std::filesystem::path &path, const RocCurve &roc);

// Rounds to 4 decimals, the precision of machine-readable reports.
double round4(double value);

}  // namespace srcver

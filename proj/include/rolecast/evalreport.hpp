// Copyright 2026 The Rolecast Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Confusion matrices, per-role metrics and cross-validated experiments.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolecast/hybrid.hpp"

namespace rolecast {

// Rows are true roles, columns predicted roles, both in role order.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t n) : n_(n), counts_(n * n, 0) {}
  ConfusionMatrix(std::size_t n, std::vector<std::uint64_t> counts);

  std::size_t size() const { return n_; }
  void add(std::size_t truth, std::size_t predicted, std::uint64_t count = 1);
  std::uint64_t at(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * n_ + predicted];
  }
  std::uint64_t row_sum(std::size_t truth) const;
  std::uint64_t col_sum(std::size_t predicted) const;
  std::uint64_t trace() const;
  std::uint64_t total() const;
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  bool operator==(const ConfusionMatrix&) const = default;

  nlohmann::json to_json() const;
  static ConfusionMatrix from_json(const nlohmann::json& j);

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> counts_;
};

struct RoleMetrics {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  // Set when the metric's denominator was zero and 0 was reported instead.
  bool recall_degenerate = false;
  bool precision_degenerate = false;
  bool f1_degenerate = false;
  bool operator==(const RoleMetrics&) const = default;
};

// One entry per role, in role order.
std::vector<RoleMetrics> per_role_metrics(const ConfusionMatrix& cm);
// trace / total. Throws std::invalid_argument on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

inline constexpr int kReportVersion = 1;

struct CVReport {
  std::string label;
  nlohmann::json config;
  std::vector<Role> roles;
  std::size_t n_folds = 0;
  std::uint64_t fold_seed = 0;
  std::vector<ConfusionMatrix> folds;
  ConfusionMatrix pooled;
  std::vector<RoleMetrics> metrics;
  double accuracy = 0.0;
  std::vector<double> fold_accuracy;
  // Pooled matrix of each channel's own argmax, in channel order.
  std::vector<std::pair<std::string, ConfusionMatrix>> channels;
  std::size_t image_flagged = 0;
  std::size_t brightness_imputed = 0;
  std::optional<double> seconds;

  bool operator==(const CVReport&) const = default;
};

// "All Features", "Without BF1 (name)", "Without BF1, AF1".
std::string ablation_label(const std::set<FeatureGroup>& drop);

// Outer stratified folds; each fold trains on the rest and predicts itself.
// Folds run on up to config.threads workers with identical results.
CVReport cross_validate(std::span<const PreparedUser> users, const Resources& res,
                        const HybridConfig& config, std::size_t n_folds,
                        const ExternalProbs& external = {});
// Explicit outer folds, e.g. to hold the assignment fixed while held-out
// users change.
CVReport cross_validate(std::span<const PreparedUser> users, const Resources& res,
                        const HybridConfig& config, const FoldAssignment& folds,
                        const ExternalProbs& external = {});
CVReport cross_validate(const UserCorpus& corpus, const Resources& res,
                        const HybridConfig& config, std::size_t n_folds,
                        const ImageLoader& images, const ExternalProbs& external = {});

// Cross-validation with the named groups removed.
CVReport ablation_run(std::span<const PreparedUser> users, const Resources& res,
                      HybridConfig config, const std::set<FeatureGroup>& drop,
                      std::size_t n_folds, const ExternalProbs& external = {});

// Stratified by label with config.seed; what cross_validate uses.
FoldAssignment outer_folds(std::span<const PreparedUser> users, const HybridConfig& config,
                           std::size_t n_folds);
// The model trained for one outer fold, for inspection.
HybridModel train_fold(std::span<const PreparedUser> users, const Resources& res,
                       const HybridConfig& config, const FoldAssignment& folds, std::size_t fold,
                       const ExternalProbs& external = {});
HybridModel train_fold(std::span<const PreparedUser> users, const Resources& res,
                       const HybridConfig& config, std::size_t n_folds, std::size_t fold,
                       const ExternalProbs& external = {});

// "json" or "markdown".
std::string render_report(const CVReport& report, std::string_view format);
nlohmann::json report_to_json(const CVReport& report);
CVReport report_from_json(const nlohmann::json& j);

// One row per report: per-role R/P/F1 and accuracy.
std::string render_comparison_table(std::span<const CVReport> reports,
                                    const std::string& first_column = "Method");

}  // namespace rolecast

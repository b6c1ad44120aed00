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

// Multi-class learners with probability outputs: a Gini CART tree, a random
// forest of such trees, and SAMME AdaBoost over depth-1 trees.
//
// All training is deterministic given the seed. Forests derive one seed per
// tree, so training them on several threads gives bit-identical models.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace rolecast {

// Dense row-major feature matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  const std::vector<double>& values() const { return values_; }

  std::vector<std::string> feature_names;

  // Throws std::invalid_argument on NaN or infinity.
  void require_finite() const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  // Horizontal concatenation; both sides must have the same row count.
  static Matrix hstack(const std::vector<const Matrix*>& parts);

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && values_ == o.values_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// 1 - sum p_i^2 over (possibly weighted) class counts.
double gini_impurity(std::span<const double> class_counts);

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  // Parent impurity minus the size-weighted child impurities.
  double decrease = 0.0;
  bool operator==(const Split&) const = default;
};

// Midpoint of two consecutive distinct sorted values, kept strictly below hi.
double split_midpoint(double lo, double hi);

// Exhaustive search over midpoints of consecutive distinct values of every
// candidate feature. Samples with value <= threshold go left. Ties go to the
// lowest feature index, then the lowest threshold. A split that leaves the
// impurity unchanged is still a split (XOR needs one at the root); nullopt
// means no threshold separates the samples.
std::optional<Split> best_split(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                                std::span<const std::size_t> candidate_features,
                                std::size_t min_samples_leaf = 1);

// Row subset (repeats allowed) with optional per-row weights.
std::optional<Split> best_split_rows(const Matrix& x, std::span<const int> y,
                                     std::size_t n_classes,
                                     std::span<const std::size_t> candidate_features,
                                     std::span<const std::size_t> rows,
                                     std::span<const double> weights,
                                     std::size_t min_samples_leaf);

struct TreeParams {
  std::size_t max_depth = 0;  // 0 is unlimited
  std::size_t min_samples_leaf = 1;
  // Features drawn per node; 0 uses all of them.
  std::size_t features_per_split = 0;
  bool operator==(const TreeParams&) const = default;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<double> counts;  // leaves only
  bool operator==(const TreeNode&) const = default;
};

class TreeModel {
 public:
  std::size_t n_features() const { return n_features_; }
  std::size_t n_classes() const { return n_classes_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  std::vector<double> predict_proba(std::span<const double> x) const;
  const TreeNode& leaf_for(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static TreeModel from_json(const nlohmann::json& j);
  bool operator==(const TreeModel&) const = default;

 private:
  friend TreeModel train_tree_rows(const Matrix&, std::span<const int>, std::size_t,
                                   const TreeParams&, std::span<const std::size_t>,
                                   std::span<const double>, std::uint64_t);
  std::size_t n_features_ = 0;
  std::size_t n_classes_ = 0;
  TreeParams params_;
  std::vector<TreeNode> nodes_;
};

TreeModel train_decision_tree(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                              const TreeParams& params = {}, std::uint64_t seed = 0);
// Trains on a row multiset with optional weights.
TreeModel train_tree_rows(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                          const TreeParams& params, std::span<const std::size_t> rows,
                          std::span<const double> weights, std::uint64_t seed);

struct ForestParams {
  std::size_t n_trees = 100;
  bool bootstrap = true;
  // 0 means ceil(sqrt(d)).
  std::size_t features_per_split = 0;
  std::size_t max_depth = 0;
  std::size_t min_samples_leaf = 1;
  bool operator==(const ForestParams&) const = default;
};

class ForestModel {
 public:
  const std::vector<TreeModel>& trees() const { return trees_; }
  std::size_t n_features() const { return trees_.front().n_features(); }
  std::size_t n_classes() const { return trees_.front().n_classes(); }
  std::uint64_t seed() const { return seed_; }

  std::vector<double> predict_proba(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static ForestModel from_json(const nlohmann::json& j);
  bool operator==(const ForestModel&) const = default;

 private:
  friend ForestModel train_random_forest(const Matrix&, std::span<const int>, std::size_t,
                                         const ForestParams&, std::uint64_t, unsigned);
  ForestParams params_;
  std::uint64_t seed_ = 0;
  std::vector<TreeModel> trees_;
};

ForestModel train_random_forest(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                                const ForestParams& params = {}, std::uint64_t seed = 0,
                                unsigned threads = 1);

struct BoostParams {
  std::size_t n_stages = 50;
  bool operator==(const BoostParams&) const = default;
};

struct BoostStage {
  TreeModel stump;
  double weight = 0.0;
  bool operator==(const BoostStage&) const = default;
};

class BoostModel {
 public:
  const std::vector<BoostStage>& stages() const { return stages_; }
  std::size_t n_classes() const { return n_classes_; }
  std::size_t n_features() const { return stages_.front().stump.n_features(); }

  // Per-class sum of the weights of stages voting for it.
  std::vector<double> votes(std::span<const double> x) const;
  // Softmax over the votes.
  std::vector<double> predict_proba(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static BoostModel from_json(const nlohmann::json& j);
  bool operator==(const BoostModel&) const = default;

 private:
  friend BoostModel train_adaboost(const Matrix&, std::span<const int>, std::size_t,
                                   const BoostParams&, std::uint64_t);
  std::size_t n_classes_ = 0;
  std::vector<BoostStage> stages_;
};

// SAMME. Each stage weight is ln((1-err)/err) + ln(K-1). Stops early when a
// stage is perfect (kept with weight 1) or no better than chance (dropped,
// unless it is the first stage, which is kept with weight 1).
BoostModel train_adaboost(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                          const BoostParams& params = {}, std::uint64_t seed = 0);

enum class ClassifierKind { Tree, Forest, AdaBoost };
std::string_view classifier_name(ClassifierKind k);
ClassifierKind parse_classifier(std::string_view s);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::Forest;
  TreeParams tree;
  ForestParams forest;
  BoostParams boost;

  nlohmann::json to_json() const;
  static ClassifierSpec from_json(const nlohmann::json& j);
  bool operator==(const ClassifierSpec&) const = default;
};

// Any trained learner behind one interface.
class Classifier {
 public:
  Classifier() = default;
  explicit Classifier(TreeModel m) : model_(std::move(m)) {}
  explicit Classifier(ForestModel m) : model_(std::move(m)) {}
  explicit Classifier(BoostModel m) : model_(std::move(m)) {}

  ClassifierKind kind() const;
  std::size_t n_features() const;
  std::size_t n_classes() const;
  // Throws std::invalid_argument when x has the wrong width.
  std::vector<double> predict_proba(std::span<const double> x) const;
  int predict(std::span<const double> x) const;
  const auto& model() const { return model_; }

  nlohmann::json to_json() const;
  static Classifier from_json(const nlohmann::json& j);
  bool operator==(const Classifier&) const = default;

 private:
  std::variant<TreeModel, ForestModel, BoostModel> model_;
};

Classifier train_classifier(const ClassifierSpec& spec, const Matrix& x, std::span<const int> y,
                            std::size_t n_classes, std::uint64_t seed, unsigned threads = 1);

// Index of the largest entry; ties go to the lowest index.
int argmax(std::span<const double> p);

}  // namespace rolecast

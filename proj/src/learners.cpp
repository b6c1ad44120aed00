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

#include "rolecast/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rolecast/common.hpp"
#include "rolecast/util.hpp"

namespace rolecast {

using nlohmann::json;

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) throw std::invalid_argument("matrix is not rectangular");
}

void Matrix::require_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("matrix contains a non-finite value");
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  out.feature_names = feature_names;
  return out;
}

Matrix Matrix::hstack(const std::vector<const Matrix*>& parts) {
  if (parts.empty()) return {};
  const std::size_t rows = parts.front()->rows();
  std::size_t cols = 0;
  for (const auto* p : parts) {
    if (p->rows() != rows) throw std::invalid_argument("hstack row count mismatch");
    cols += p->cols();
  }
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t c = 0;
    for (const auto* p : parts) {
      auto src = p->row(r);
      std::copy(src.begin(), src.end(), out.row(r).begin() + static_cast<std::ptrdiff_t>(c));
      c += p->cols();
    }
  }
  for (const auto* p : parts) {
    if (p->feature_names.size() != p->cols()) {
      out.feature_names.clear();
      break;
    }
    out.feature_names.insert(out.feature_names.end(), p->feature_names.begin(),
                             p->feature_names.end());
  }
  return out;
}

namespace {

double gini_from(std::span<const double> counts, double total) {
  double sum_sq = 0.0;
  for (double c : counts) {
    const double p = c / total;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

void check_labels(const Matrix& x, std::span<const int> y, std::size_t n_classes) {
  if (y.size() != x.rows())
    throw std::invalid_argument("feature matrix has " + std::to_string(x.rows()) +
                                " rows but there are " + std::to_string(y.size()) + " labels");
  if (x.rows() == 0) throw std::invalid_argument("cannot train on zero samples");
  if (n_classes == 0) throw std::invalid_argument("need at least one class");
  for (int l : y)
    if (l < 0 || static_cast<std::size_t>(l) >= n_classes)
      throw std::invalid_argument("label outside the class set");
  x.require_finite();
}

void check_width(std::span<const double> x, std::size_t n_features) {
  if (x.size() != n_features)
    throw std::invalid_argument("expected " + std::to_string(n_features) + " features, got " +
                                std::to_string(x.size()));
}

std::vector<double> normalized(std::vector<double> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0.0) {
    std::fill(counts.begin(), counts.end(), 1.0 / static_cast<double>(counts.size()));
    return counts;
  }
  for (double& c : counts) c /= total;
  return counts;
}

std::size_t ceil_sqrt(std::size_t d) {
  std::size_t k = 0;
  while (k * k < d) ++k;
  return k;
}

}  // namespace

double gini_impurity(std::span<const double> class_counts) {
  const double total = std::accumulate(class_counts.begin(), class_counts.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("gini impurity of an empty node");
  return gini_from(class_counts, total);
}

double split_midpoint(double lo, double hi) {
  double mid = 0.5 * (lo + hi);
  if (!std::isfinite(mid)) mid = lo / 2 + hi / 2;
  if (mid >= hi) mid = lo;
  return mid;
}

std::optional<Split> best_split_rows(const Matrix& x, std::span<const int> y,
                                     std::size_t n_classes,
                                     std::span<const std::size_t> candidate_features,
                                     std::span<const std::size_t> rows,
                                     std::span<const double> weights,
                                     std::size_t min_samples_leaf) {
  const std::size_t n = rows.size();
  if (n < 2 || candidate_features.empty()) return std::nullopt;
  const std::size_t min_leaf = std::max<std::size_t>(min_samples_leaf, 1);
  auto weight = [&](std::size_t r) { return weights.empty() ? 1.0 : weights[r]; };

  std::vector<double> parent(n_classes, 0.0);
  double total = 0.0;
  for (std::size_t r : rows) {
    parent[static_cast<std::size_t>(y[r])] += weight(r);
    total += weight(r);
  }
  const double parent_impurity = gini_from(parent, total);

  std::vector<std::size_t> features(candidate_features.begin(), candidate_features.end());
  std::sort(features.begin(), features.end());

  std::optional<Split> best;
  std::vector<std::pair<double, std::size_t>> order(n);
  std::vector<double> left(n_classes), right(n_classes);
  for (std::size_t f : features) {
    for (std::size_t i = 0; i < n; ++i) order[i] = {x(rows[i], f), rows[i]};
    std::sort(order.begin(), order.end());
    std::fill(left.begin(), left.end(), 0.0);
    double left_total = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const std::size_t r = order[k].second;
      left[static_cast<std::size_t>(y[r])] += weight(r);
      left_total += weight(r);
      const double v = order[k].first;
      const double next = order[k + 1].first;
      if (v == next) continue;
      const std::size_t n_left = k + 1;
      if (n_left < min_leaf || n - n_left < min_leaf) continue;
      for (std::size_t c = 0; c < n_classes; ++c) right[c] = std::max(parent[c] - left[c], 0.0);
      const double right_total = total - left_total;
      if (!(left_total > 0.0) || !(right_total > 0.0)) continue;
      const double decrease = parent_impurity - (left_total / total) * gini_from(left, left_total) -
                              (right_total / total) * gini_from(right, right_total);
      if (!best || decrease > best->decrease)
        best = Split{f, split_midpoint(v, next), decrease};
    }
  }
  return best;
}

std::optional<Split> best_split(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                                std::span<const std::size_t> candidate_features,
                                std::size_t min_samples_leaf) {
  if (y.size() != x.rows()) throw std::invalid_argument("label count does not match rows");
  for (std::size_t f : candidate_features)
    if (f >= x.cols()) throw std::invalid_argument("candidate feature out of range");
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return best_split_rows(x, y, n_classes, candidate_features, rows, {}, min_samples_leaf);
}

// ---------------------------------------------------------------------------
// Trees

TreeModel train_tree_rows(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                          const TreeParams& params, std::span<const std::size_t> rows,
                          std::span<const double> weights, std::uint64_t seed) {
  check_labels(x, y, n_classes);
  if (rows.empty()) throw std::invalid_argument("cannot train a tree on zero rows");
  TreeModel model;
  model.n_features_ = x.cols();
  model.n_classes_ = n_classes;
  model.params_ = params;

  const std::size_t d = x.cols();
  const std::size_t per_split =
      params.features_per_split == 0 ? d : std::min(params.features_per_split, d);
  const std::size_t min_leaf = std::max<std::size_t>(params.min_samples_leaf, 1);
  std::vector<std::size_t> all_features(d);
  std::iota(all_features.begin(), all_features.end(), std::size_t{0});
  Rng rng(seed);

  struct Work {
    std::size_t node;
    std::vector<std::size_t> rows;
    std::size_t depth;
  };
  std::vector<Work> stack;
  model.nodes_.emplace_back();
  stack.push_back({0, std::vector<std::size_t>(rows.begin(), rows.end()), 0});
  auto weight = [&](std::size_t r) { return weights.empty() ? 1.0 : weights[r]; };

  while (!stack.empty()) {
    Work work = std::move(stack.back());
    stack.pop_back();

    std::vector<double> counts(n_classes, 0.0);
    for (std::size_t r : work.rows) counts[static_cast<std::size_t>(y[r])] += weight(r);
    const auto populated = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; });

    std::optional<Split> split;
    const bool depth_ok = params.max_depth == 0 || work.depth < params.max_depth;
    if (populated > 1 && depth_ok && work.rows.size() >= 2 * min_leaf && d > 0) {
      std::vector<std::size_t> candidates;
      if (per_split >= d) {
        candidates = all_features;
      } else {
        std::vector<std::size_t> pool = all_features;
        for (std::size_t i = 0; i < per_split; ++i) std::swap(pool[i], pool[i + rng.below(d - i)]);
        candidates.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(per_split));
      }
      split = best_split_rows(x, y, n_classes, candidates, work.rows, weights, min_leaf);
    }

    if (!split) {
      model.nodes_[work.node].counts = std::move(counts);
      continue;
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : work.rows)
      (x(r, split->feature) <= split->threshold ? left_rows : right_rows).push_back(r);
    const std::size_t left = model.nodes_.size();
    model.nodes_.emplace_back();
    model.nodes_.emplace_back();
    TreeNode& node = model.nodes_[work.node];
    node.feature = static_cast<int>(split->feature);
    node.threshold = split->threshold;
    node.left = left;
    node.right = left + 1;
    stack.push_back({left + 1, std::move(right_rows), work.depth + 1});
    stack.push_back({left, std::move(left_rows), work.depth + 1});
  }
  return model;
}

TreeModel train_decision_tree(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                              const TreeParams& params, std::uint64_t seed) {
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return train_tree_rows(x, y, n_classes, params, rows, {}, seed);
}

const TreeNode& TreeModel::leaf_for(std::span<const double> x) const {
  check_width(x, n_features_);
  std::size_t i = 0;
  while (nodes_[i].feature >= 0) {
    const TreeNode& n = nodes_[i];
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes_[i];
}

std::vector<double> TreeModel::predict_proba(std::span<const double> x) const {
  return normalized(leaf_for(x).counts);
}

std::size_t TreeModel::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes_[i].feature >= 0) {
      stack.push_back({nodes_[i].left, d + 1});
      stack.push_back({nodes_[i].right, d + 1});
    }
  }
  return best;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

json TreeModel::to_json() const {
  json nodes = json::array();
  for (const auto& n : nodes_) {
    if (n.feature < 0)
      nodes.push_back({{"c", n.counts}});
    else
      nodes.push_back({{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right}});
  }
  return {{"type", "tree"},
          {"n_features", n_features_},
          {"n_classes", n_classes_},
          {"params",
           {{"max_depth", params_.max_depth},
            {"min_samples_leaf", params_.min_samples_leaf},
            {"features_per_split", params_.features_per_split}}},
          {"nodes", std::move(nodes)}};
}

TreeModel TreeModel::from_json(const json& j) {
  if (j.at("type") != "tree") throw DataError("expected a tree model");
  TreeModel m;
  m.n_features_ = j.at("n_features").get<std::size_t>();
  m.n_classes_ = j.at("n_classes").get<std::size_t>();
  const auto& p = j.at("params");
  m.params_.max_depth = p.at("max_depth").get<std::size_t>();
  m.params_.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
  m.params_.features_per_split = p.at("features_per_split").get<std::size_t>();
  for (const auto& n : j.at("nodes")) {
    TreeNode node;
    if (n.contains("c")) {
      node.counts = n.at("c").get<std::vector<double>>();
      if (node.counts.size() != m.n_classes_) throw DataError("tree leaf has wrong class count");
    } else {
      node.feature = n.at("f").get<int>();
      node.threshold = n.at("t").get<double>();
      node.left = n.at("l").get<std::size_t>();
      node.right = n.at("r").get<std::size_t>();
    }
    m.nodes_.push_back(std::move(node));
  }
  if (m.nodes_.empty()) throw DataError("tree has no nodes");
  for (const auto& n : m.nodes_)
    if (n.feature >= 0 && (n.left >= m.nodes_.size() || n.right >= m.nodes_.size() ||
                           static_cast<std::size_t>(n.feature) >= m.n_features_))
      throw DataError("tree node references are out of range");
  return m;
}

// ---------------------------------------------------------------------------
// Forests

ForestModel train_random_forest(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                                const ForestParams& params, std::uint64_t seed,
                                unsigned threads) {
  check_labels(x, y, n_classes);
  if (params.n_trees == 0) throw ConfigError("a forest needs at least one tree");
  ForestModel model;
  model.params_ = params;
  model.seed_ = seed;
  model.trees_.resize(params.n_trees);
  TreeParams tree_params;
  tree_params.max_depth = params.max_depth;
  tree_params.min_samples_leaf = params.min_samples_leaf;
  tree_params.features_per_split =
      params.features_per_split == 0 ? ceil_sqrt(x.cols()) : params.features_per_split;
  const std::size_t n = x.rows();

  parallel_for(params.n_trees, threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    std::vector<std::size_t> rows(n);
    if (params.bootstrap) {
      for (auto& r : rows) r = rng.below(n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    model.trees_[t] = train_tree_rows(x, y, n_classes, tree_params, rows, {}, rng.next());
  });
  return model;
}

std::vector<double> ForestModel::predict_proba(std::span<const double> x) const {
  std::vector<double> sum(n_classes(), 0.0);
  for (const auto& tree : trees_) {
    const auto p = tree.predict_proba(x);
    for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += p[c];
  }
  for (double& s : sum) s /= static_cast<double>(trees_.size());
  return sum;
}

json ForestModel::to_json() const {
  json trees = json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return {{"type", "forest"},
          {"seed", seed_},
          {"params",
           {{"n_trees", params_.n_trees},
            {"bootstrap", params_.bootstrap},
            {"features_per_split", params_.features_per_split},
            {"max_depth", params_.max_depth},
            {"min_samples_leaf", params_.min_samples_leaf}}},
          {"trees", std::move(trees)}};
}

ForestModel ForestModel::from_json(const json& j) {
  if (j.at("type") != "forest") throw DataError("expected a forest model");
  ForestModel m;
  m.seed_ = j.at("seed").get<std::uint64_t>();
  const auto& p = j.at("params");
  m.params_.n_trees = p.at("n_trees").get<std::size_t>();
  m.params_.bootstrap = p.at("bootstrap").get<bool>();
  m.params_.features_per_split = p.at("features_per_split").get<std::size_t>();
  m.params_.max_depth = p.at("max_depth").get<std::size_t>();
  m.params_.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
  for (const auto& t : j.at("trees")) m.trees_.push_back(TreeModel::from_json(t));
  if (m.trees_.empty()) throw DataError("forest has no trees");
  for (const auto& t : m.trees_)
    if (t.n_features() != m.trees_.front().n_features() ||
        t.n_classes() != m.trees_.front().n_classes())
      throw DataError("forest trees disagree on dimensions");
  return m;
}

// ---------------------------------------------------------------------------
// AdaBoost (SAMME)

BoostModel train_adaboost(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                          const BoostParams& params, std::uint64_t seed) {
  check_labels(x, y, n_classes);
  if (n_classes < 2) throw std::invalid_argument("boosting needs at least two classes");
  if (params.n_stages == 0) throw ConfigError("boosting needs at least one stage");
  const std::size_t n = x.rows();
  const double k = static_cast<double>(n_classes);
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  TreeParams stump_params;
  stump_params.max_depth = 1;

  BoostModel model;
  model.n_classes_ = n_classes;
  std::vector<char> miss(n);
  for (std::size_t m = 0; m < params.n_stages; ++m) {
    TreeModel stump = train_tree_rows(x, y, n_classes, stump_params, rows, w, derive_seed(seed, m));
    double err = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int pred = argmax(stump.leaf_for(x.row(i)).counts);
      miss[i] = pred != y[i];
      if (miss[i]) err += w[i];
      total += w[i];
    }
    err /= total;
    if (err <= 0.0) {
      model.stages_.push_back({std::move(stump), 1.0});
      break;
    }
    if (err >= 1.0 - 1.0 / k) {
      if (model.stages_.empty()) model.stages_.push_back({std::move(stump), 1.0});
      break;
    }
    const double alpha = std::log((1.0 - err) / err) + std::log(k - 1.0);
    model.stages_.push_back({std::move(stump), alpha});
    const double boost = std::exp(alpha);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (miss[i]) w[i] *= boost;
      sum += w[i];
    }
    for (double& wi : w) wi /= sum;
  }
  return model;
}

std::vector<double> BoostModel::votes(std::span<const double> x) const {
  std::vector<double> v(n_classes_, 0.0);
  for (const auto& s : stages_) v[static_cast<std::size_t>(argmax(s.stump.leaf_for(x).counts))] += s.weight;
  return v;
}

std::vector<double> BoostModel::predict_proba(std::span<const double> x) const {
  std::vector<double> v = votes(x);
  const double top = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& e : v) {
    e = std::exp(e - top);
    sum += e;
  }
  for (double& e : v) e /= sum;
  return v;
}

json BoostModel::to_json() const {
  json stages = json::array();
  for (const auto& s : stages_) stages.push_back({{"weight", s.weight}, {"stump", s.stump.to_json()}});
  return {{"type", "adaboost"}, {"n_classes", n_classes_}, {"stages", std::move(stages)}};
}

BoostModel BoostModel::from_json(const json& j) {
  if (j.at("type") != "adaboost") throw DataError("expected an adaboost model");
  BoostModel m;
  m.n_classes_ = j.at("n_classes").get<std::size_t>();
  for (const auto& s : j.at("stages")) {
    BoostStage stage{TreeModel::from_json(s.at("stump")), s.at("weight").get<double>()};
    if (!std::isfinite(stage.weight) || stage.weight < 0.0)
      throw DataError("boost stage weight must be finite and non-negative");
    m.stages_.push_back(std::move(stage));
  }
  if (m.stages_.empty()) throw DataError("boost model has no stages");
  return m;
}

// ---------------------------------------------------------------------------

std::string_view classifier_name(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::Tree: return "tree";
    case ClassifierKind::Forest: return "forest";
    case ClassifierKind::AdaBoost: return "adaboost";
  }
  return "?";
}

ClassifierKind parse_classifier(std::string_view s) {
  if (s == "tree") return ClassifierKind::Tree;
  if (s == "forest") return ClassifierKind::Forest;
  if (s == "adaboost") return ClassifierKind::AdaBoost;
  throw ConfigError("unknown classifier '" + std::string(s) + "' (expected tree|forest|adaboost)");
}

json ClassifierSpec::to_json() const {
  return {{"kind", classifier_name(kind)},
          {"tree",
           {{"max_depth", tree.max_depth},
            {"min_samples_leaf", tree.min_samples_leaf},
            {"features_per_split", tree.features_per_split}}},
          {"forest",
           {{"n_trees", forest.n_trees},
            {"bootstrap", forest.bootstrap},
            {"features_per_split", forest.features_per_split},
            {"max_depth", forest.max_depth},
            {"min_samples_leaf", forest.min_samples_leaf}}},
          {"boost", {{"n_stages", boost.n_stages}}}};
}

ClassifierSpec ClassifierSpec::from_json(const json& j) {
  ClassifierSpec s;
  s.kind = parse_classifier(j.at("kind").get<std::string>());
  const auto& t = j.at("tree");
  s.tree.max_depth = t.at("max_depth").get<std::size_t>();
  s.tree.min_samples_leaf = t.at("min_samples_leaf").get<std::size_t>();
  s.tree.features_per_split = t.at("features_per_split").get<std::size_t>();
  const auto& f = j.at("forest");
  s.forest.n_trees = f.at("n_trees").get<std::size_t>();
  s.forest.bootstrap = f.at("bootstrap").get<bool>();
  s.forest.features_per_split = f.at("features_per_split").get<std::size_t>();
  s.forest.max_depth = f.at("max_depth").get<std::size_t>();
  s.forest.min_samples_leaf = f.at("min_samples_leaf").get<std::size_t>();
  s.boost.n_stages = j.at("boost").at("n_stages").get<std::size_t>();
  return s;
}

ClassifierKind Classifier::kind() const {
  return static_cast<ClassifierKind>(model_.index());
}

std::size_t Classifier::n_features() const {
  return std::visit([](const auto& m) { return m.n_features(); }, model_);
}

std::size_t Classifier::n_classes() const {
  return std::visit([](const auto& m) { return m.n_classes(); }, model_);
}

std::vector<double> Classifier::predict_proba(std::span<const double> x) const {
  check_width(x, n_features());
  return std::visit([&](const auto& m) { return m.predict_proba(x); }, model_);
}

int Classifier::predict(std::span<const double> x) const { return argmax(predict_proba(x)); }

json Classifier::to_json() const {
  return std::visit([](const auto& m) { return m.to_json(); }, model_);
}

Classifier Classifier::from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "tree") return Classifier(TreeModel::from_json(j));
  if (type == "forest") return Classifier(ForestModel::from_json(j));
  if (type == "adaboost") return Classifier(BoostModel::from_json(j));
  throw DataError("unknown model type '" + type + "'");
}

Classifier train_classifier(const ClassifierSpec& spec, const Matrix& x, std::span<const int> y,
                            std::size_t n_classes, std::uint64_t seed, unsigned threads) {
  switch (spec.kind) {
    case ClassifierKind::Tree:
      return Classifier(train_decision_tree(x, y, n_classes, spec.tree, seed));
    case ClassifierKind::Forest:
      return Classifier(train_random_forest(x, y, n_classes, spec.forest, seed, threads));
    case ClassifierKind::AdaBoost:
      return Classifier(train_adaboost(x, y, n_classes, spec.boost, seed));
  }
  throw ConfigError("unknown classifier kind");
}

int argmax(std::span<const double> p) {
  int best = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return best;
}

}  // namespace rolecast

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

#include "rolecast/evalreport.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "rolecast/util.hpp"

namespace rolecast {

using nlohmann::json;

ConfusionMatrix::ConfusionMatrix(std::size_t n, std::vector<std::uint64_t> counts)
    : n_(n), counts_(std::move(counts)) {
  if (counts_.size() != n * n) throw std::invalid_argument("confusion matrix must be n x n");
}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::uint64_t count) {
  if (truth >= n_ || predicted >= n_) throw std::invalid_argument("class index out of range");
  counts_[truth * n_ + predicted] += count;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < n_; ++p) s += at(truth, p);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
  std::uint64_t s = 0;
  for (std::size_t t = 0; t < n_; ++t) s += at(t, predicted);
  return s;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < n_; ++i) s += at(i, i);
  return s;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  if (o.n_ != n_) throw std::invalid_argument("confusion matrix sizes differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
  return *this;
}

json ConfusionMatrix::to_json() const {
  json rows = json::array();
  for (std::size_t t = 0; t < n_; ++t) {
    json row = json::array();
    for (std::size_t p = 0; p < n_; ++p) row.push_back(at(t, p));
    rows.push_back(std::move(row));
  }
  return rows;
}

ConfusionMatrix ConfusionMatrix::from_json(const json& j) {
  const std::size_t n = j.size();
  ConfusionMatrix cm(n);
  for (std::size_t t = 0; t < n; ++t) {
    if (j[t].size() != n) throw DataError("confusion matrix rows must have n entries");
    for (std::size_t p = 0; p < n; ++p) cm.add(t, p, j[t][p].get<std::uint64_t>());
  }
  return cm;
}

std::vector<RoleMetrics> per_role_metrics(const ConfusionMatrix& cm) {
  std::vector<RoleMetrics> out(cm.size());
  for (std::size_t r = 0; r < cm.size(); ++r) {
    RoleMetrics& m = out[r];
    const auto diag = static_cast<double>(cm.at(r, r));
    const auto row = cm.row_sum(r);
    const auto col = cm.col_sum(r);
    if (row == 0)
      m.recall_degenerate = true;
    else
      m.recall = diag / static_cast<double>(row);
    if (col == 0)
      m.precision_degenerate = true;
    else
      m.precision = diag / static_cast<double>(col);
    if (m.recall + m.precision == 0.0)
      m.f1_degenerate = true;
    else
      m.f1 = 2.0 * m.recall * m.precision / (m.recall + m.precision);
  }
  return out;
}

double accuracy(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw std::invalid_argument("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

std::string ablation_label(const std::set<FeatureGroup>& drop) {
  if (drop.empty()) return "All Features";
  if (drop.size() == 1) {
    const FeatureGroup g = *drop.begin();
    return "Without " + std::string(group_name(g)) + " (" + std::string(group_caption(g)) + ")";
  }
  std::string out = "Without ";
  bool first = true;
  for (FeatureGroup g : drop) {
    if (!first) out += ", ";
    out += group_name(g);
    first = false;
  }
  return out;
}

namespace {

std::vector<int> labels_of(std::span<const PreparedUser> users, ClassMode mode) {
  std::vector<int> y;
  y.reserve(users.size());
  for (const auto& u : users) {
    if (!u.label) throw DataError("user '" + u.user_id + "' has no label");
    if (mode == ClassMode::Bi && *u.label == Role::Brand)
      throw DataError("user '" + u.user_id + "' is labeled brand; the two-class variant takes male and female users only");
    y.push_back(class_index(*u.label));
  }
  return y;
}

std::vector<PreparedUser> pick_rows(std::span<const PreparedUser> users,
                                    const std::vector<std::size_t>& rows) {
  std::vector<PreparedUser> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(users[r]);
  return out;
}

template <class Fn>
auto with_fold(std::size_t fold, Fn&& fn) {
  const std::string where = "fold " + std::to_string(fold) + ": ";
  try {
    return fn();
  } catch (const DataError& e) {
    throw DataError(where + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(where + e.what());
  }
}

struct FoldResult {
  ConfusionMatrix cm;
  std::vector<std::pair<std::string, ConfusionMatrix>> channels;
  std::size_t image_flagged = 0;
  std::size_t brightness_imputed = 0;
};

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

FoldAssignment outer_folds(std::span<const PreparedUser> users, const HybridConfig& config,
                           std::size_t n_folds) {
  if (n_folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  const auto y = labels_of(users, config.mode);
  return stratified_folds(y, class_count(config.mode), n_folds, config.seed);
}

HybridModel train_fold(std::span<const PreparedUser> users, const Resources& res,
                       const HybridConfig& config, const FoldAssignment& folds, std::size_t fold,
                       const ExternalProbs& external) {
  if (folds.folds().size() != users.size())
    throw std::invalid_argument("fold assignment does not match the users");
  if (fold >= folds.n_folds()) throw std::invalid_argument("fold index out of range");
  return with_fold(fold, [&] {
    return train_hybrid(pick_rows(users, folds.train_rows(fold)), res, config, external);
  });
}

HybridModel train_fold(std::span<const PreparedUser> users, const Resources& res,
                       const HybridConfig& config, std::size_t n_folds, std::size_t fold,
                       const ExternalProbs& external) {
  return train_fold(users, res, config, outer_folds(users, config, n_folds), fold, external);
}

CVReport cross_validate(std::span<const PreparedUser> users, const Resources& res,
                        const HybridConfig& config, std::size_t n_folds,
                        const ExternalProbs& external) {
  config.validate();
  return cross_validate(users, res, config, outer_folds(users, config, n_folds), external);
}

CVReport cross_validate(std::span<const PreparedUser> users, const Resources& res,
                        const HybridConfig& config, const FoldAssignment& folds,
                        const ExternalProbs& external) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  if (folds.folds().size() != users.size())
    throw std::invalid_argument("fold assignment does not match the users");
  const std::size_t n_folds = folds.n_folds();
  const std::size_t n = class_count(config.mode);
  const auto y = labels_of(users, config.mode);

  HybridConfig fold_config = config;
  if (config.threads > 1) fold_config.threads = 1;
  std::vector<FoldResult> results(n_folds);
  parallel_for(n_folds, config.threads, [&](std::size_t f) {
    const HybridModel model = train_fold(users, res, fold_config, folds, f, external);
    FoldResult& out = results[f];
    out.cm = ConfusionMatrix(n);
    for (const auto& name : model.channel_names()) out.channels.emplace_back(name, ConfusionMatrix(n));
    for (std::size_t r : folds.test_rows(f)) {
      const RolePrediction p = with_fold(f, [&] { return model.predict(users[r], res); });
      const auto truth = static_cast<std::size_t>(y[r]);
      out.cm.add(truth, static_cast<std::size_t>(class_index(p.role)));
      for (std::size_t c = 0; c < p.channels.size(); ++c)
        out.channels[c].second.add(truth, static_cast<std::size_t>(argmax(p.channels[c].probs)));
      out.image_flagged += p.image_flagged;
      out.brightness_imputed += p.brightness_imputed;
    }
  });

  CVReport report;
  report.label = ablation_label(config.drop);
  report.config = config.to_json();
  report.roles = roles_of(config.mode);
  report.n_folds = n_folds;
  report.fold_seed = config.seed;
  report.pooled = ConfusionMatrix(n);
  report.channels = results.front().channels;
  for (auto& [name, cm] : report.channels) cm = ConfusionMatrix(n);
  for (const auto& r : results) {
    report.folds.push_back(r.cm);
    report.pooled += r.cm;
    report.fold_accuracy.push_back(accuracy(r.cm));
    for (std::size_t c = 0; c < r.channels.size(); ++c) report.channels[c].second += r.channels[c].second;
    report.image_flagged += r.image_flagged;
    report.brightness_imputed += r.brightness_imputed;
  }
  report.metrics = per_role_metrics(report.pooled);
  report.accuracy = accuracy(report.pooled);
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

CVReport cross_validate(const UserCorpus& corpus, const Resources& res,
                        const HybridConfig& config, std::size_t n_folds,
                        const ImageLoader& images, const ExternalProbs& external) {
  const auto prepared = prepare_users(corpus, res, images, config.threads, config.impute_images);
  return cross_validate(prepared, res, config, n_folds, external);
}

CVReport ablation_run(std::span<const PreparedUser> users, const Resources& res,
                      HybridConfig config, const std::set<FeatureGroup>& drop,
                      std::size_t n_folds, const ExternalProbs& external) {
  config.drop = drop;
  return cross_validate(users, res, config, n_folds, external);
}

// ---------------------------------------------------------------------------

json report_to_json(const CVReport& report) {
  json roles = json::array();
  for (Role r : report.roles) roles.push_back(role_name(r));
  json folds = json::array();
  for (const auto& f : report.folds) folds.push_back(f.to_json());
  json metrics = json::array();
  for (std::size_t i = 0; i < report.metrics.size(); ++i) {
    const auto& m = report.metrics[i];
    metrics.push_back({{"role", role_name(report.roles.at(i))},
                       {"recall", m.recall},
                       {"precision", m.precision},
                       {"f1", m.f1},
                       {"recall_degenerate", m.recall_degenerate},
                       {"precision_degenerate", m.precision_degenerate},
                       {"f1_degenerate", m.f1_degenerate}});
  }
  json channels = json::array();
  for (const auto& [name, cm] : report.channels)
    channels.push_back({{"name", name}, {"pooled", cm.to_json()}, {"accuracy", accuracy(cm)}});
  json j{{"schema", "rolecast-cv-report"},
         {"version", kReportVersion},
         {"label", report.label},
         {"config", report.config},
         {"roles", std::move(roles)},
         {"n_folds", report.n_folds},
         {"fold_seed", report.fold_seed},
         {"folds", std::move(folds)},
         {"pooled", report.pooled.to_json()},
         {"metrics", std::move(metrics)},
         {"accuracy", report.accuracy},
         {"fold_accuracy", report.fold_accuracy},
         {"channels", std::move(channels)},
         {"image_flagged", report.image_flagged},
         {"brightness_imputed", report.brightness_imputed}};
  if (report.seconds) j["seconds"] = *report.seconds;
  return j;
}

CVReport report_from_json(const json& j) {
  try {
    if (j.at("schema") != "rolecast-cv-report") throw DataError("not a rolecast report");
    if (j.at("version").get<int>() != kReportVersion) throw DataError("unsupported report version");
    CVReport r;
    r.label = j.at("label").get<std::string>();
    r.config = j.at("config");
    for (const auto& role : j.at("roles")) {
      auto parsed = parse_role(role.get<std::string>());
      if (!parsed) throw DataError("unknown role in report");
      r.roles.push_back(*parsed);
    }
    r.n_folds = j.at("n_folds").get<std::size_t>();
    r.fold_seed = j.at("fold_seed").get<std::uint64_t>();
    for (const auto& f : j.at("folds")) r.folds.push_back(ConfusionMatrix::from_json(f));
    r.pooled = ConfusionMatrix::from_json(j.at("pooled"));
    for (const auto& m : j.at("metrics"))
      r.metrics.push_back({m.at("recall").get<double>(), m.at("precision").get<double>(),
                           m.at("f1").get<double>(), m.at("recall_degenerate").get<bool>(),
                           m.at("precision_degenerate").get<bool>(),
                           m.at("f1_degenerate").get<bool>()});
    r.accuracy = j.at("accuracy").get<double>();
    r.fold_accuracy = j.at("fold_accuracy").get<std::vector<double>>();
    for (const auto& c : j.at("channels"))
      r.channels.emplace_back(c.at("name").get<std::string>(),
                              ConfusionMatrix::from_json(c.at("pooled")));
    r.image_flagged = j.at("image_flagged").get<std::size_t>();
    r.brightness_imputed = j.at("brightness_imputed").get<std::size_t>();
    if (j.contains("seconds")) r.seconds = j.at("seconds").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

std::string render_report(const CVReport& report, std::string_view format) {
  if (format == "json") return report_to_json(report).dump(2) + "\n";
  if (format != "markdown")
    throw ConfigError("unknown report format '" + std::string(format) + "' (expected json|markdown)");
  auto cell = [](double v, bool degenerate) { return fmt3(v) + (degenerate ? "*" : ""); };
  std::ostringstream out;
  out << "## " << report.label << "\n\n";
  out << "| Role | R | P | F1 |\n|---|---|---|---|\n";
  bool any_degenerate = false;
  for (std::size_t i = 0; i < report.metrics.size(); ++i) {
    const auto& m = report.metrics[i];
    any_degenerate = any_degenerate || m.recall_degenerate || m.precision_degenerate || m.f1_degenerate;
    out << "| " << role_title(report.roles[i]) << " | " << cell(m.recall, m.recall_degenerate)
        << " | " << cell(m.precision, m.precision_degenerate) << " | "
        << cell(m.f1, m.f1_degenerate) << " |\n";
  }
  out << "\n**Acc: " << fmt3(report.accuracy) << "** (" << report.pooled.total() << " users, "
      << report.n_folds << " folds)\n";
  if (any_degenerate) out << "\n\\* zero denominator, reported as 0\n";
  out << "\nPer-fold accuracy:";
  for (double a : report.fold_accuracy) out << " " << fmt3(a);
  out << "\n";
  if (!report.channels.empty()) {
    out << "\nChannel accuracy:";
    for (const auto& [name, cm] : report.channels) out << " " << name << " " << fmt3(accuracy(cm));
    out << "\n";
  }
  out << "\nConfusion matrix (rows true, columns predicted):\n\n|   |";
  for (Role r : report.roles) out << " " << role_title(r) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < report.roles.size(); ++i) out << "---|";
  out << "\n";
  for (std::size_t t = 0; t < report.roles.size(); ++t) {
    out << "| " << role_title(report.roles[t]) << " |";
    for (std::size_t p = 0; p < report.roles.size(); ++p) out << " " << report.pooled.at(t, p) << " |";
    out << "\n";
  }
  if (report.image_flagged || report.brightness_imputed)
    out << "\nImage channel fallbacks: " << report.image_flagged
        << "; imputed brightness: " << report.brightness_imputed << "\n";
  if (report.seconds) out << "\nTime: " << fmt3(*report.seconds) << " s\n";
  return out.str();
}

std::string render_comparison_table(std::span<const CVReport> reports,
                                    const std::string& first_column) {
  if (reports.empty()) return {};
  const auto& roles = reports.front().roles;
  std::ostringstream out;
  out << "| " << first_column << " |";
  for (Role r : roles) out << " " << role_title(r) << " R | " << role_title(r) << " P | "
                           << role_title(r) << " F1 |";
  out << " Acc |\n|---|";
  for (std::size_t i = 0; i < roles.size() * 3 + 1; ++i) out << "---|";
  out << "\n";
  for (const auto& rep : reports) {
    if (rep.roles != roles) throw std::invalid_argument("reports cover different roles");
    out << "| " << rep.label << " |";
    for (const auto& m : rep.metrics)
      out << " " << fmt3(m.recall) << " | " << fmt3(m.precision) << " | " << fmt3(m.f1) << " |";
    out << " " << fmt3(rep.accuracy) << " |\n";
  }
  return out.str();
}

}  // namespace rolecast

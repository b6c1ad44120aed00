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

// rolecast: command-line front end.
//
// Exit codes: 0 success, 1 invalid data, 2 invalid configuration.

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rolecast/analysis.hpp"
#include "rolecast/evalreport.hpp"
#include "rolecast/hybrid.hpp"
#include "rolecast/synthetic.hpp"
#include "rolecast/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rolecast;

namespace {

struct CommonFlags {
  std::optional<std::string> resources;
  std::size_t min_tweets = 1;
  std::string classifier = "forest";
  std::size_t k = 20;
  std::string window = "all";
  std::string image_mode = "fallback";
  std::string image_probs;
  std::string mode = "tri";
  std::uint64_t seed = 0;
  std::string stacking = "oof";
  std::size_t inner_folds = 5;
  std::size_t trees = 100;
  std::size_t stages = 50;
  std::size_t max_depth = 0;
  bool no_impute = false;
  unsigned threads = 1;
};

void add_resource_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--resources", f.resources,
                  "Resource directory (default: $ROLECAST_RESOURCES, then the bundled set)");
  cmd->add_option("--min-tweets", f.min_tweets, "Skip users with fewer tweets")->capture_default_str();
}

void add_config_flags(CLI::App* cmd, CommonFlags& f) {
  add_resource_flags(cmd, f);
  cmd->add_option("--classifier", f.classifier, "tree|forest|adaboost")->capture_default_str();
  cmd->add_option("--k", f.k, "k-top words per role")->capture_default_str();
  cmd->add_option("--window", f.window, "Tweets for the word-list scores: all or N")->capture_default_str();
  cmd->add_option("--image-mode", f.image_mode, "external|fallback|uniform")->capture_default_str();
  cmd->add_option("--image-probs", f.image_probs, "File of `user_id p_male p_female [p_brand]` lines");
  cmd->add_option("--mode", f.mode, "tri|bi")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  cmd->add_option("--stacking", f.stacking, "oof|resub")->capture_default_str();
  cmd->add_option("--inner-folds", f.inner_folds, "Folds for out-of-fold stacking")->capture_default_str();
  cmd->add_option("--trees", f.trees, "Trees per forest")->capture_default_str();
  cmd->add_option("--stages", f.stages, "AdaBoost stages")->capture_default_str();
  cmd->add_option("--max-depth", f.max_depth, "Tree depth limit, 0 for none")->capture_default_str();
  cmd->add_flag("--no-impute", f.no_impute, "Fail on users without a usable image");
  cmd->add_option("--threads", f.threads, "Worker threads; results do not depend on it")
      ->capture_default_str();
}

HybridConfig make_config(const CommonFlags& f) {
  HybridConfig c;
  c.classifier.kind = parse_classifier(f.classifier);
  c.classifier.forest.n_trees = f.trees;
  c.classifier.forest.max_depth = f.max_depth;
  c.classifier.tree.max_depth = f.max_depth;
  c.classifier.boost.n_stages = f.stages;
  c.k = f.k;
  c.window = TweetWindow::parse(f.window);
  c.image_mode = parse_image_mode(f.image_mode);
  c.mode = parse_mode(f.mode);
  c.seed = f.seed;
  c.stacking = parse_stacking(f.stacking);
  c.inner_folds = f.inner_folds;
  c.impute_images = !f.no_impute;
  c.threads = std::max(1u, f.threads);
  c.validate();
  return c;
}

Resources resources_for(const CommonFlags& f) {
  return load_resources(resolve_resource_dir(f.resources));
}

ExternalProbs external_for(const CommonFlags& f) {
  return f.image_probs.empty() ? ExternalProbs{} : load_external_probs(f.image_probs);
}

UserCorpus load(const std::string& path, const CommonFlags& f, bool require_labels) {
  LoadOptions opts;
  opts.require_labels = require_labels;
  opts.min_tweets = f.min_tweets;
  UserCorpus corpus = load_dataset(path, opts);
  for (const auto& s : corpus.skipped())
    std::cerr << "skipped line " << s.line << ": " << s.reason << "\n";
  return corpus;
}

std::set<FeatureGroup> parse_drop_list(const std::string& list) {
  std::set<FeatureGroup> drop;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    if (item == "all") {
      drop.insert(kAllGroups.begin(), kAllGroups.end());
      continue;
    }
    drop.insert(parse_group(item));
  }
  return drop;
}

void write_reports(const std::string& prefix, const CVReport& report) {
  write_file(prefix + ".json", render_report(report, "json"));
  write_file(prefix + ".md", render_report(report, "markdown"));
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& dataset, bool require_labels, const CommonFlags& f) {
  const UserCorpus corpus = load(dataset, f, require_labels);
  std::size_t labeled = 0;
  std::array<std::size_t, 3> per_role{};
  for (const auto& u : corpus.users())
    if (u.label) {
      ++labeled;
      ++per_role[static_cast<std::size_t>(class_index(*u.label))];
    }
  std::cout << "ok: " << corpus.size() << " users (" << labeled << " labeled: " << per_role[0]
            << " male, " << per_role[1] << " female, " << per_role[2] << " brand), "
            << corpus.skipped().size() << " skipped\n";
  return 0;
}

int cmd_featurize(const std::string& dataset, const std::string& out,
                  const std::string& vocab_in, std::string vocab_out, const CommonFlags& f) {
  const HybridConfig config = make_config(f);
  const Resources res = resources_for(f);
  const UserCorpus corpus = load(dataset, f, vocab_in.empty());
  const auto users = prepare_users(corpus, res, file_image_loader(corpus), config.threads,
                                   config.impute_images);
  KTopVocabulary vocab;
  if (!vocab_in.empty()) {
    vocab = KTopVocabulary::from_text(read_file(vocab_in));
  } else {
    std::vector<KTopTrainingUser> training;
    for (const auto& u : users) {
      if (config.mode == ClassMode::Bi && u.label == Role::Brand) continue;
      training.push_back({*u.label, u.content});
    }
    vocab = build_ktop_vocabulary(training, config.k, roles_of(config.mode));
  }
  double fill_sum = 0.0;
  std::size_t fill_n = 0;
  for (const auto& u : users)
    if (u.brightness) {
      fill_sum += *u.brightness;
      ++fill_n;
    }
  const double fill = fill_n ? fill_sum / static_cast<double>(fill_n) : 0.5;

  std::string text;
  for (const auto& u : users) {
    const BFVector bf = assemble_bf(u, res, config.window, fill);
    json line{{"user_id", u.user_id},
              {"label", u.label ? json(role_name(*u.label)) : json(nullptr)},
              {"bf", bf},
              {"af", ktop_score_vector(std::span<const TokenSet>(u.tweets), vocab)},
              {"brightness_imputed", !u.brightness.has_value()}};
    text += line.dump() + "\n";
  }
  write_file(out, text);
  if (vocab_out.empty()) vocab_out = out + ".vocab.txt";
  write_file(vocab_out, vocab.to_text());
  std::cerr << "wrote " << users.size() << " feature rows to " << out << " and the vocabulary to "
            << vocab_out << "\n";
  return 0;
}

int cmd_train(const std::string& dataset, const std::string& out, const CommonFlags& f) {
  const HybridConfig config = make_config(f);
  const Resources res = resources_for(f);
  const UserCorpus corpus = load(dataset, f, true);
  const HybridModel model =
      train_hybrid(corpus, res, config, file_image_loader(corpus), external_for(f));
  write_file(out, model.to_json().dump() + "\n");
  std::cerr << "trained on " << corpus.size() << " users; final input width "
            << model.final_width() << "\n";
  return 0;
}

int cmd_evaluate(const std::string& dataset, const std::string& prefix, std::size_t folds,
                 bool timing, const CommonFlags& f) {
  const HybridConfig config = make_config(f);
  if (folds < 2) throw ConfigError("--folds must be at least 2");
  const Resources res = resources_for(f);
  const UserCorpus corpus = load(dataset, f, true);
  CVReport report =
      cross_validate(corpus, res, config, folds, file_image_loader(corpus), external_for(f));
  if (!timing) report.seconds.reset();
  write_reports(prefix, report);
  std::cout << render_report(report, "markdown");
  return 0;
}

int cmd_ablate(const std::string& dataset, const std::string& prefix, const std::string& drop,
               bool sweep, std::size_t folds, bool timing, const CommonFlags& f) {
  const HybridConfig config = make_config(f);
  if (folds < 2) throw ConfigError("--folds must be at least 2");
  if (sweep && !drop.empty()) throw ConfigError("--sweep and --drop are exclusive");
  const std::set<FeatureGroup> groups = parse_drop_list(drop);
  if (groups.size() == kAllGroups.size()) throw ConfigError("cannot drop every feature group");
  const Resources res = resources_for(f);
  const UserCorpus corpus = load(dataset, f, true);
  const auto users = prepare_users(corpus, res, file_image_loader(corpus), config.threads,
                                   config.impute_images);
  const ExternalProbs external = external_for(f);
  if (!sweep) {
    CVReport report = ablation_run(users, res, config, groups, folds, external);
    if (!timing) report.seconds.reset();
    write_reports(prefix, report);
    std::cout << render_report(report, "markdown");
    return 0;
  }
  std::vector<CVReport> reports;
  json all = json::array();
  std::vector<std::set<FeatureGroup>> runs{{}};
  for (FeatureGroup g : kAllGroups) runs.push_back({g});
  for (std::size_t i = 0; i < runs.size(); ++i) {
    CVReport r = ablation_run(users, res, config, runs[i], folds, external);
    if (!timing) r.seconds.reset();
    r.label = std::to_string(i) + ". " + r.label;
    all.push_back(report_to_json(r));
    reports.push_back(std::move(r));
  }
  write_file(prefix + ".json", all.dump(2) + "\n");
  const std::string table = render_comparison_table(reports, "Features");
  write_file(prefix + ".md", table);
  std::cout << table;
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& dataset, const std::string& out,
                const CommonFlags& f) {
  const Resources res = resources_for(f);
  const HybridModel model =
      HybridModel::from_json(json::parse(read_file(model_path)), external_for(f));
  model.check_fingerprints(res);
  const UserCorpus corpus = load(dataset, f, false);
  const auto users = prepare_users(corpus, res, file_image_loader(corpus), std::max(1u, f.threads),
                                   model.config().impute_images);
  const auto roles = roles_of(model.mode());
  std::string text = "# user_id\trole";
  for (Role r : roles) text += "\tp_" + std::string(role_name(r));
  text += "\n";
  ConfusionMatrix cm(roles.size());
  bool labeled = false;
  char buf[32];
  for (const auto& u : users) {
    const RolePrediction p = model.predict(u, res);
    text += u.user_id + "\t" + std::string(role_name(p.role));
    for (double v : p.probs) {
      std::snprintf(buf, sizeof buf, "\t%.6f", v);
      text += buf;
    }
    text += "\n";
    if (u.label && static_cast<std::size_t>(class_index(*u.label)) < roles.size()) {
      labeled = true;
      cm.add(static_cast<std::size_t>(class_index(*u.label)),
             static_cast<std::size_t>(class_index(p.role)));
    }
  }
  write_file(out, text);
  if (labeled) {
    std::cout << "Confusion matrix (rows true, columns predicted):\n\n|   |";
    for (Role r : roles) std::cout << " " << role_title(r) << " |";
    std::cout << "\n|---|";
    for (std::size_t i = 0; i < roles.size(); ++i) std::cout << "---|";
    std::cout << "\n";
    for (std::size_t t = 0; t < roles.size(); ++t) {
      std::cout << "| " << role_title(roles[t]) << " |";
      for (std::size_t p = 0; p < roles.size(); ++p) std::cout << " " << cm.at(t, p) << " |";
      std::cout << "\n";
    }
    std::snprintf(buf, sizeof buf, "%.3f", accuracy(cm));
    std::cout << "\nAcc: " << buf << "\n";
  }
  return 0;
}

int cmd_analyze(const std::string& dataset, const std::string& feature, const std::string& format,
                const std::string& out, const CommonFlags& f) {
  const AnalysisFeature which = parse_analysis_feature(feature);
  const TweetWindow window = TweetWindow::parse(f.window);
  const Resources res = resources_for(f);
  const UserCorpus corpus = load(dataset, f, true);
  const auto users = prepare_users(corpus, res, file_image_loader(corpus), std::max(1u, f.threads));
  const std::string text = render_distribution(analyze_feature(users, res, which, window), format);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return 0;
}

int cmd_generate(const std::string& out, std::size_t users, double separability,
                 std::uint64_t seed, const std::string& planted, const std::string& mode) {
  SyntheticSpec spec;
  spec.separability = separability;
  spec.mode = parse_mode(mode);
  if (!planted.empty()) spec.planted = parse_drop_list(planted);
  const SyntheticData data = generate_synthetic_corpus(spec, users, seed);
  write_synthetic(data, out);
  std::cerr << "wrote " << users << " users to " << (fs::path(out) / "users.jsonl").string()
            << " with resources in " << (fs::path(out) / "resources").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify social-media users as male, female or brand."};
  app.require_subcommand(1);
  CommonFlags f;

  std::string dataset, out, model_path, vocab_in, vocab_out, drop, feature, format = "markdown";
  bool require_labels = false, timing = false, sweep = false;
  std::size_t folds = 10;

  auto* validate = app.add_subcommand("validate", "Check a dataset against the schema");
  validate->add_option("dataset", dataset, "JSON-lines user file")->required();
  validate->add_flag("--require-labels", require_labels, "Every user must carry a label");
  validate->add_option("--min-tweets", f.min_tweets, "Skip users with fewer tweets")->capture_default_str();

  auto* featurize = app.add_subcommand("featurize", "Write BF and AF vectors per user");
  featurize->add_option("dataset", dataset)->required();
  featurize->add_option("--out", out, "Output JSON-lines file")->required();
  featurize->add_option("--vocab", vocab_in, "Use this vocabulary instead of building one");
  featurize->add_option("--vocab-out", vocab_out, "Vocabulary output (default: OUT.vocab.txt)");
  add_config_flags(featurize, f);

  auto* train = app.add_subcommand("train", "Train a model on a labeled dataset");
  train->add_option("dataset", dataset)->required();
  train->add_option("--out", out, "Model file")->required();
  add_config_flags(train, f);

  auto* evaluate = app.add_subcommand("evaluate", "Stratified cross-validation");
  evaluate->add_option("dataset", dataset)->required();
  evaluate->add_option("--out", out, "Report prefix; writes PREFIX.json and PREFIX.md")->required();
  evaluate->add_option("--folds", folds, "Number of folds")->capture_default_str();
  evaluate->add_flag("--timing", timing, "Include wall-clock time in the reports");
  add_config_flags(evaluate, f);

  auto* ablate = app.add_subcommand("ablate", "Cross-validation without some feature groups");
  ablate->add_option("dataset", dataset)->required();
  ablate->add_option("--out", out, "Report prefix")->required();
  ablate->add_option("--drop", drop, "Comma-separated groups: BF1..BF5, AF1, IMG");
  ablate->add_flag("--sweep", sweep, "Baseline plus one run per dropped group");
  ablate->add_option("--folds", folds, "Number of folds")->capture_default_str();
  ablate->add_flag("--timing", timing, "Include wall-clock time in the reports");
  add_config_flags(ablate, f);

  auto* predict = app.add_subcommand("predict", "Predict roles with a trained model");
  predict->add_option("model", model_path)->required();
  predict->add_option("dataset", dataset)->required();
  predict->add_option("--out", out, "Prediction file (TSV)")->required();
  predict->add_option("--image-probs", f.image_probs, "External image probabilities");
  predict->add_option("--threads", f.threads, "Worker threads")->capture_default_str();
  add_resource_flags(predict, f);

  auto* analyze = app.add_subcommand("analyze", "Per-role feature distributions and t-tests");
  analyze->add_option("dataset", dataset)->required();
  analyze->add_option("--feature", feature, "fp_tweet|brightness")->required();
  analyze->add_option("--format", format, "markdown|json")->capture_default_str();
  analyze->add_option("--out", out, "Output file (default: stdout)");
  analyze->add_option("--window", f.window, "Tweets for fp_tweet: all or N")->capture_default_str();
  analyze->add_option("--threads", f.threads, "Worker threads")->capture_default_str();
  add_resource_flags(analyze, f);

  std::size_t n_users = 300;
  double separability = 1.0;
  std::string planted;
  auto* generate = app.add_subcommand("generate", "Write a synthetic corpus with resources");
  generate->add_option("--out", out, "Output directory")->required();
  generate->add_option("--users", n_users, "Number of users")->capture_default_str();
  generate->add_option("--separability", separability, "Signal strength in [0, 1]")->capture_default_str();
  generate->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  generate->add_option("--planted", planted, "Groups carrying signal (default: all)");
  generate->add_option("--mode", f.mode, "tri|bi")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(dataset, require_labels, f);
    if (*featurize) return cmd_featurize(dataset, out, vocab_in, vocab_out, f);
    if (*train) return cmd_train(dataset, out, f);
    if (*evaluate) return cmd_evaluate(dataset, out, folds, timing, f);
    if (*ablate) return cmd_ablate(dataset, out, drop, sweep, folds, timing, f);
    if (*predict) return cmd_predict(model_path, dataset, out, f);
    if (*analyze) return cmd_analyze(dataset, feature, format, out, f);
    if (*generate) return cmd_generate(out, n_users, separability, f.seed, planted, f.mode);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

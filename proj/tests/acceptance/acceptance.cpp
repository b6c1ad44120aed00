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
// One line per acceptance criterion: PASS or FAIL, the measured values, and
// the wall time against the criterion's limit. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../oracles.hpp"
#include "rolecast/evalreport.hpp"
#include "rolecast/synthetic.hpp"
#include "rolecast/util.hpp"

using namespace rolecast;

namespace {

// Tolerances and limits, pinned.
constexpr double kJohnScore = -0.998;
constexpr double kJohnTolerance = 0.0005;
constexpr double kDpCostTolerance = 1e-12;  // relative
constexpr double kMetricTolerance = 1e-12;
constexpr double kSeparableFloor = 0.95;
constexpr double kChanceLow = 0.25;
constexpr double kChanceHigh = 0.42;
constexpr double kDominanceSlack = 0.02;
constexpr std::size_t kSyntheticUsers = 300;
constexpr std::size_t kFolds = 10;
constexpr std::size_t kSeeds = 10;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

int failures = 0;

void run(int id, const std::string& name, double limit_seconds,
         const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << "[exception: " << e.what() << "] ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    out.pass = false;
    out.detail << "[over time limit] ";
  }
  if (!out.pass) ++failures;
  char timing[96];
  if (limit_seconds > 0)
    std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, limit_seconds);
  else
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
  std::printf("[%s] AC%d %s: %s(%s)\n", out.pass ? "PASS" : "FAIL", id, name.c_str(),
              out.detail.str().c_str(), timing);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(ROLECAST_FIXTURE_DIR) / rel;
}

CVReport synthetic_cv(double separability, std::uint64_t seed,
                      const std::set<FeatureGroup>& planted = {kAllGroups.begin(), kAllGroups.end()},
                      const std::set<FeatureGroup>& drop = {}) {
  SyntheticSpec spec;
  spec.separability = separability;
  spec.planted = planted;
  const auto data = generate_synthetic_corpus(spec, kSyntheticUsers, seed);
  HybridConfig config;
  config.drop = drop;
  return cross_validate(data.corpus, data.resources, config, kFolds, data.loader());
}

std::string channel_accuracy(const CVReport& r, const std::string& name) {
  for (const auto& [n, cm] : r.channels)
    if (n == name) return fmt(accuracy(cm));
  return "n/a";
}

void formula_fidelity(Outcome& out) {
  NameDictionary d;
  d.add("john", Role::Female, 445);
  d.add("john", Role::Male, 256166);
  const double john = name_score("john", d);
  out.detail << "name_score(john)=" << fmt(john) << " ";
  out.require(std::abs(john - kJohnScore) <= kJohnTolerance, "john score");
  out.require(tff_score(0, 0) == 0.0, "tff(0,0)");
  const WordList first(WordListKind::FirstPerson, {"i", "am", "my"});
  const WordList brand(WordListKind::BrandWord, {"official", "we", "our"});
  const double cells[4] = {description_first_person_score("i am a runner", first, brand),
                           description_first_person_score("official news from our team", first, brand),
                           description_first_person_score("i am our official voice", first, brand),
                           description_first_person_score("coffee and code", first, brand)};
  out.detail << "fp_desc cells=(" << cells[0] << "," << cells[1] << "," << cells[2] << ","
             << cells[3] << ") ";
  out.require(cells[0] == 1.0 && cells[1] == -1.0 && cells[2] == 0.0 && cells[3] == 0.0,
              "fp_desc truth table");
}

void segmentation_fixture(Outcome& out) {
  const std::vector<std::filesystem::path> names = {fixture("segmentation/names.csv")};
  const auto dict = load_name_dictionary(names);
  std::unordered_set<std::string> words;
  for (const auto& w : read_lines(fixture("segmentation/words.txt"))) words.insert(w);
  const auto lexicon = load_lexicon(fixture("segmentation/lexicon.txt"));
  const ScreenNameSegmenter seg(dict, Vocabulary(std::move(words)), lexicon);
  const auto a = seg.segment("clemsonjohn").tokens;
  const auto b = seg.segment("123tommy").tokens;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& t : v) s += (s.empty() ? "" : ",") + t;
    return s;
  };
  out.detail << "clemsonjohn=[" << join(a) << "] 123tommy=[" << join(b) << "] ";
  out.require(a == std::vector<std::string>{"clemson", "john"}, "clemsonjohn");
  out.require(b == std::vector<std::string>{"tommy"}, "123tommy");
}

void split_oracle(Outcome& out) {
  Rng rng(20240601);
  std::size_t matched = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const std::size_t d = 1 + rng.below(3);
    const std::size_t k = 2 + rng.below(2);
    Matrix x(n, d);
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<int>(rng.below(k));
      for (std::size_t j = 0; j < d; ++j)
        rows[i][j] = x(i, j) = rng.below(2) ? static_cast<double>(rng.below(4)) : rng.normal(0, 1);
    }
    std::vector<std::size_t> features(d);
    std::iota(features.begin(), features.end(), std::size_t{0});
    const auto got = best_split(x, y, k, features);
    const auto want = oracle::best_split(rows, y, k, d);
    bool same = got.has_value() == want.has_value();
    if (same && got)
      same = got->feature == want->feature && got->threshold == want->threshold &&
             got->decrease == want->decrease;
    matched += same;
  }
  out.detail << matched << "/200 exact ";
  out.require(matched == 200, "split mismatch");
}

void dp_oracle(Outcome& out) {
  Rng rng(77);
  const std::string alphabet = "abc";
  std::size_t matched = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> words;
    while (words.size() < 5) {
      std::string w;
      const std::size_t len = 1 + rng.below(4);
      for (std::size_t j = 0; j < len; ++j) w += alphabet[rng.below(alphabet.size())];
      if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
    }
    std::string s;
    const std::size_t len = 1 + rng.below(10);
    for (std::size_t j = 0; j < len; ++j) s += alphabet[rng.below(alphabet.size())];
    const double got = dp_word_split_with_cost(s, Lexicon(words)).cost;
    const double want = oracle::min_segmentation_cost(s, words);
    const double rel = std::abs(got - want) / std::max(1.0, std::abs(want));
    worst = std::max(worst, rel);
    matched += rel <= kDpCostTolerance;
  }
  out.detail << matched << "/500 within " << kDpCostTolerance << " (worst " << worst << ") ";
  out.require(matched == 500, "dp cost mismatch");
}

void end_to_end(Outcome& out) {
  const auto sep = synthetic_cv(1.0, 42);
  out.detail << "separability 1: acc=" << fmt(sep.accuracy) << " (BF " << channel_accuracy(sep, "BF")
             << ", AF " << channel_accuracy(sep, "AF") << ", IMG " << channel_accuracy(sep, "IMG")
             << "); ";
  out.require(sep.accuracy >= kSeparableFloor, "separable accuracy");
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) sum += synthetic_cv(0.0, seed).accuracy;
  const double mean = sum / kSeeds;
  out.detail << "separability 0: mean acc over " << kSeeds << " seeds=" << fmt(mean) << " ";
  out.require(mean >= kChanceLow && mean <= kChanceHigh, "chance band");
}

void stacker_dominance(Outcome& out) {
  double hybrid = 0.0;
  std::map<std::string, double> channel;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    const auto r = synthetic_cv(0.6, seed);
    hybrid += r.accuracy / kSeeds;
    for (const auto& [name, cm] : r.channels) channel[name] += accuracy(cm) / kSeeds;
  }
  out.detail << "mean hybrid=" << fmt(hybrid);
  for (const auto& [name, acc] : channel) {
    out.detail << " " << name << "=" << fmt(acc);
    out.require(hybrid >= acc - kDominanceSlack, "hybrid below " + name);
  }
  out.detail << " ";
}

void no_leakage(Outcome& out) {
  const auto data = generate_synthetic_corpus({}, 120, 8);
  HybridConfig config;
  config.classifier.forest.n_trees = 30;
  const auto users = prepare_users(data.corpus, data.resources, data.loader());
  const FoldAssignment folds = outer_folds(users, config, 5);
  std::size_t identical = 0;
  for (std::size_t f = 0; f < folds.n_folds(); ++f) {
    // Held-out users get foreign tweets and rotated labels.
    std::vector<UserRecord> mutated = data.corpus.users();
    for (std::size_t r : folds.test_rows(f)) {
      auto& u = mutated[r];
      u.label = static_cast<Role>((class_index(*u.label) + 1) % 3);
      for (auto& t : u.tweets) t = "leak leak #leakage zzzleak " + t;
      u.tweets.push_back("leak");
    }
    const auto mutated_users = prepare_users(UserCorpus(mutated), data.resources, data.loader());
    const auto a = train_fold(users, data.resources, config, folds, f);
    const auto b = train_fold(mutated_users, data.resources, config, folds, f);
    const bool same = a.to_json().dump() == b.to_json().dump() && a.vocabulary() == b.vocabulary();
    identical += same;
  }
  out.detail << identical << "/" << folds.n_folds() << " fold models and vocabularies bit-identical ";
  out.require(identical == folds.n_folds(), "fold model changed");
}

void metric_fidelity(Outcome& out) {
  struct Case {
    std::vector<std::uint64_t> cm;
    std::vector<double> r, p, f1;
    double acc;
  };
  // Values worked by hand.
  const std::vector<Case> cases = {
      {{8, 2, 0, 1, 9, 0, 0, 0, 10}, {0.8, 0.9, 1.0}, {8.0 / 9.0, 9.0 / 11.0, 1.0},
       {16.0 / 19.0, 6.0 / 7.0, 1.0}, 0.9},
      {{10, 0, 0, 0, 10, 0, 0, 0, 10}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}, 1.0},
      {{5, 0, 0, 0, 5, 0, 3, 2, 0}, {1, 1, 0}, {5.0 / 8.0, 5.0 / 7.0, 0}, {10.0 / 13.0, 10.0 / 12.0, 0}, 10.0 / 15.0},
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    const ConfusionMatrix cm(3, c.cm);
    const auto m = per_role_metrics(cm);
    for (std::size_t r = 0; r < 3; ++r) {
      worst = std::max({worst, std::abs(m[r].recall - c.r[r]), std::abs(m[r].precision - c.p[r]),
                        std::abs(m[r].f1 - c.f1[r])});
    }
    worst = std::max(worst, std::abs(accuracy(cm) - c.acc));
  }
  out.detail << "hand matrices max error=" << worst << "; ";
  out.require(worst <= kMetricTolerance, "hand values");
  Rng rng(3);
  std::size_t bound_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::uint64_t> v(9);
    for (auto& x : v) x = rng.below(3) == 0 ? 0 : rng.below(50);
    v[rng.below(9)] += 1;
    bool ok = true;
    for (const auto& m : per_role_metrics(ConfusionMatrix(3, v))) {
      if (m.recall == 0.0 && m.precision == 0.0)
        ok = ok && m.f1 == 0.0;
      else
        ok = ok && m.f1 >= std::min(m.recall, m.precision) - kMetricTolerance &&
             m.f1 <= std::max(m.recall, m.precision) + kMetricTolerance;
    }
    bound_ok += ok;
  }
  out.detail << "F1 bounds " << bound_ok << "/1000 ";
  out.require(bound_ok == 1000, "F1 bounds");
}

int sh(const std::string& cmd) { return std::system((cmd + " >/dev/null 2>&1").c_str()); }

void determinism(Outcome& out) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("rolecast-acceptance-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string cli = ROLECAST_CLI;
  const std::string d = dir.string();
  const std::string common = " --resources " + d + "/syn/resources --seed 5 --trees 40";
  out.require(sh(cli + " generate --out " + d + "/syn --users 120 --separability 0.7 --seed 3") == 0,
              "generate");
  const std::string data = d + "/syn/users.jsonl";
  out.require(sh(cli + " train " + data + " --out " + d + "/m1.json --threads 1" + common) == 0, "train");
  out.require(sh(cli + " train " + data + " --out " + d + "/m2.json --threads 1" + common) == 0, "train");
  out.require(sh(cli + " train " + data + " --out " + d + "/m3.json --threads 4" + common) == 0, "train");
  out.require(sh(cli + " evaluate " + data + " --out " + d + "/e1 --threads 1 --folds 5" + common) == 0, "evaluate");
  out.require(sh(cli + " evaluate " + data + " --out " + d + "/e2 --threads 1 --folds 5" + common) == 0, "evaluate");
  out.require(sh(cli + " evaluate " + data + " --out " + d + "/e3 --threads 3 --folds 5" + common) == 0, "evaluate");
  if (out.pass) {
    const auto m1 = read_file(dir / "m1.json");
    const bool models = m1 == read_file(dir / "m2.json") && m1 == read_file(dir / "m3.json");
    bool reports = true;
    for (const char* ext : {".json", ".md"}) {
      const auto e1 = read_file(d + "/e1" + ext);
      reports = reports && e1 == read_file(d + "/e2" + ext) && e1 == read_file(d + "/e3" + ext);
    }
    out.detail << "models " << (models ? "identical" : "differ") << " (" << m1.size()
               << " bytes), reports " << (reports ? "identical" : "differ") << " ";
    out.require(models, "model bytes");
    out.require(reports, "report bytes");
  }
  std::filesystem::remove_all(dir);
}

void ablation(Outcome& out) {
  const std::set<FeatureGroup> names_only = {FeatureGroup::BF1};
  const auto full = synthetic_cv(1.0, 42, names_only);
  const auto dropped = synthetic_cv(1.0, 42, names_only, names_only);
  out.detail << "signal only in BF1: all features acc=" << fmt(full.accuracy)
             << ", without BF1 acc=" << fmt(dropped.accuracy) << " ";
  out.require(full.accuracy >= kSeparableFloor, "planted signal not learned");
  out.require(dropped.accuracy >= kChanceLow && dropped.accuracy <= kChanceHigh, "chance band");
}

}  // namespace

int main() {
  run(1, "formula fidelity", 1, formula_fidelity);
  run(2, "screen-name segmentation", 1, segmentation_fixture);
  run(3, "split oracle", 10, split_oracle);
  run(4, "DP oracle", 10, dp_oracle);
  run(5, "end-to-end synthetic", 300, end_to_end);
  run(6, "stacker dominance", 600, stacker_dominance);
  run(7, "no leakage", 0, no_leakage);
  run(8, "metric fidelity", 0, metric_fidelity);
  run(9, "determinism", 0, determinism);
  run(10, "ablation mechanics", 0, ablation);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}

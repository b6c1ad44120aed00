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
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "rolecast/evalreport.hpp"
#include "rolecast/hybrid.hpp"
#include "rolecast/synthetic.hpp"
#include "rolecast/util.hpp"
#include "support.hpp"

using namespace rolecast;
using rolecast::testing::fixture;

namespace {

HybridConfig small_config() {
  HybridConfig c;
  c.classifier.forest.n_trees = 20;
  c.k = 5;
  c.seed = 3;
  return c;
}

const SyntheticData& separable() {
  static const SyntheticData data = generate_synthetic_corpus({}, 90, 11);
  return data;
}

const std::vector<PreparedUser>& separable_prepared() {
  static const std::vector<PreparedUser> users =
      prepare_users(separable().corpus, separable().resources, separable().loader());
  return users;
}

Resources fixture_resources() {
  Resources res;
  res.names.add("john", Role::Female, 445);
  res.names.add("john", Role::Male, 256166);
  res.names.add("mary", Role::Female, 900);
  res.lexicon = Lexicon({"clemson", "john", "mary", "hill", "acme", "coffee"});
  res.first_person = WordList(WordListKind::FirstPerson, {"i", "am", "my", "me", "i'm"});
  res.brand = WordList(WordListKind::BrandWord, {"official", "we", "our", "account"});
  res.interjections = WordList(WordListKind::Interjection, {"omg", "wow"});
  res.emotions = WordList(WordListKind::Emotion, {"love", "happy"});
  res.stoplist = WordList(WordListKind::Stop, {"the", "a", "is", "this", "with", "on", "are"});
  return res;
}

}  // namespace

TEST_CASE("BF vector composes the individual features") {
  const auto corpus = load_dataset(fixture("data/valid.jsonl"));
  const auto res = fixture_resources();
  const auto users = prepare_users(corpus, res, file_image_loader(corpus));
  REQUIRE(users.size() == 3);

  const auto& u = corpus[0];
  const auto bf = assemble_bf(users[0], res, {}, 0.5);
  CHECK(bf[0] == display_name_score(u.display_name, res.names));
  CHECK(bf[0] == doctest::Approx(-0.9982628451863245));
  CHECK(bf[1] == screen_name_score(u.screen_name, res.names, res.lexicon));
  CHECK(bf[2] == description_first_person_score(u.description, res.first_person, res.brand));
  CHECK(bf[2] == 1.0);
  CHECK(bf[3] == static_cast<double>(description_term_count(u.description)));
  CHECK(bf[4] == tff_score(u.followers, u.friends));
  CHECK(bf[5] == doctest::Approx(200.0 / 255.0));
  const auto t = tweet_scores(std::span<const std::string>(u.tweets), res.first_person,
                              res.interjections, res.emotions);
  CHECK(bf[6] == t.fp_tweet);
  CHECK(bf[7] == t.i_tweet);
  CHECK(bf[8] == t.e_tweet);

  // No image path: brightness takes the fill value; inline probabilities are kept.
  CHECK_FALSE(users[2].brightness.has_value());
  CHECK(assemble_bf(users[2], res, {}, 0.25)[5] == 0.25);
  REQUIRE(users[2].inline_probs.has_value());
  CHECK((*users[2].inline_probs)[2] == doctest::Approx(0.8));

  UserRecord blank = u;
  blank.description.clear();
  const ScreenNameSegmenter seg(res.names, res.lexicon);
  const auto pb = prepare_user(blank, res, seg, file_image_loader(corpus));
  const auto bb = assemble_bf(pb, res, {}, 0.5);
  CHECK(bb[2] == 0.0);
  CHECK(bb[3] == 0.0);
  for (std::size_t i : {0, 1, 4, 5, 6, 7, 8}) CHECK(bb[i] == bf[i]);
}

TEST_CASE("feature groups") {
  CHECK(parse_group("bf1") == FeatureGroup::BF1);
  CHECK(parse_group("IMG") == FeatureGroup::IMG);
  CHECK_THROWS_AS(parse_group("BF9"), ConfigError);
  std::vector<std::size_t> all;
  for (auto g : {FeatureGroup::BF1, FeatureGroup::BF2, FeatureGroup::BF3, FeatureGroup::BF4, FeatureGroup::BF5})
    for (auto c : bf_columns_of(g)) all.push_back(c);
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expect(kBFWidth);
  std::iota(expect.begin(), expect.end(), std::size_t{0});
  CHECK(all == expect);
  CHECK(ablation_label({}) == "All Features");
  CHECK(ablation_label({FeatureGroup::BF1}) == "Without BF1 (name)");
}

TEST_CASE("out-of-fold probabilities never see their own row") {
  // Alternating labels: any model that has not seen a row predicts the
  // opposite class for it.
  Matrix x(6, 1, {0, 1, 2, 3, 4, 5});
  const std::vector<int> y = {0, 1, 0, 1, 0, 1};
  ClassifierSpec spec;
  spec.kind = ClassifierKind::Tree;
  const auto oof = out_of_fold_probs(x, y, 2, spec, 6, 1);
  REQUIRE(oof.rows() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(oof(i, static_cast<std::size_t>(y[i])) == 0.0);
  // A model trained on all rows gets every row right.
  const auto full = train_classifier(spec, x, y, 2, 1);
  for (std::size_t i = 0; i < 6; ++i) CHECK(full.predict(x.row(i)) == y[i]);
  CHECK(out_of_fold_probs(x, y, 2, spec, 6, 1) == oof);
  CHECK_THROWS_AS(out_of_fold_probs(x, y, 2, spec, 7, 1), DataError);
}

TEST_CASE("out-of-fold probabilities on separable data") {
  Rng rng(2);
  Matrix x(60, 2);
  std::vector<int> y(60);
  for (std::size_t i = 0; i < 60; ++i) {
    y[i] = static_cast<int>(i % 3);
    x(i, 0) = 10.0 * y[i] + rng.normal(0, 1);
    x(i, 1) = rng.normal(0, 1);
  }
  ClassifierSpec spec;
  spec.forest.n_trees = 20;
  const auto oof = out_of_fold_probs(x, y, 3, spec, 5, 9, 3);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < 60; ++i) ok += argmax(oof.row(i)) == y[i];
  CHECK(ok >= 54);
  CHECK(out_of_fold_probs(x, y, 3, spec, 5, 9, 1) == oof);
}

TEST_CASE("stacker maps agreeing channels to their role") {
  Matrix x(30, 9);
  std::vector<int> y(30);
  for (std::size_t i = 0; i < 30; ++i) {
    y[i] = static_cast<int>(i % 3);
    for (std::size_t c = 0; c < 3; ++c) x(i, 3 * c + static_cast<std::size_t>(y[i])) = 1.0;
  }
  ClassifierSpec spec;
  const auto m = train_classifier(spec, x, y, 3, 0);
  const std::vector<double> male = {1, 0, 0, 1, 0, 0, 1, 0, 0};
  CHECK(m.predict(male) == class_index(Role::Male));
}

TEST_CASE("width contract") {
  const auto& users = separable_prepared();
  const auto& res = separable().resources;
  auto cfg = small_config();
  const auto tri = train_hybrid(users, res, cfg);
  CHECK(tri.channel_names() == std::vector<std::string>{"BF", "AF", "IMG"});
  CHECK(tri.final_width() == 9);
  CHECK(tri.final_model().n_features() == 9);

  cfg.drop = {FeatureGroup::AF1, FeatureGroup::IMG};
  const auto bf_only = train_hybrid(users, res, cfg);
  CHECK(bf_only.final_model().n_features() == 3);
  CHECK_FALSE(bf_only.vocabulary().has_value());

  cfg.drop = {FeatureGroup::BF1, FeatureGroup::BF2, FeatureGroup::BF3, FeatureGroup::BF4,
              FeatureGroup::BF5, FeatureGroup::AF1, FeatureGroup::IMG};
  CHECK_THROWS_AS(train_hybrid(users, res, cfg), ConfigError);

  cfg.drop = {FeatureGroup::BF1};
  const auto no_names = train_hybrid(users, res, cfg);
  CHECK(std::find(no_names.bf_columns().begin(), no_names.bf_columns().end(), 0) ==
        no_names.bf_columns().end());
}

TEST_CASE("two-class variant") {
  SyntheticSpec spec;
  spec.mode = ClassMode::Bi;
  const auto data = generate_synthetic_corpus(spec, 60, 4);
  auto cfg = small_config();
  const auto m = train_binary_variant(data.corpus, data.resources, cfg, data.loader());
  CHECK(m.channel_names() == std::vector<std::string>{"BF+AF", "IMG"});
  CHECK(m.final_model().n_features() == 4);
  CHECK(m.vocabulary()->width() == 2 * cfg.k);
  CHECK_THROWS_AS(train_binary_variant(separable().corpus, separable().resources, cfg,
                                       separable().loader()),
                  DataError);

  cfg.mode = ClassMode::Bi;
  const auto report = cross_validate(data.corpus, data.resources, cfg, 5, data.loader());
  CHECK(report.accuracy >= 0.9);
}

TEST_CASE("training is deterministic and models round-trip") {
  const auto& users = separable_prepared();
  const auto& res = separable().resources;
  auto cfg = small_config();
  const auto a = train_hybrid(users, res, cfg);
  cfg.threads = 4;
  const auto b = train_hybrid(users, res, cfg);
  CHECK(a.to_json().dump() == b.to_json().dump());

  const auto back = HybridModel::from_json(nlohmann::json::parse(a.to_json().dump()));
  CHECK(back.to_json() == a.to_json());
  for (const auto& u : users) {
    const auto p = a.predict(u, res);
    const auto q = back.predict(u, res);
    CHECK(p.probs == q.probs);
    CHECK(p.role == q.role);
  }
  // Training prototypes are recovered.
  std::size_t ok = 0;
  for (const auto& u : users) ok += a.predict(u, res).role == *u.label;
  CHECK(ok == users.size());
}

TEST_CASE("fingerprints guard the resources") {
  const auto& users = separable_prepared();
  auto res = separable().resources;
  const auto m = train_hybrid(users, res, small_config());
  CHECK_NOTHROW(m.check_fingerprints(res));
  res.names.add("zed", Role::Male, 3);
  CHECK_THROWS_AS(m.check_fingerprints(res), ConfigError);
}

TEST_CASE("image modes") {
  const auto& users = separable_prepared();
  const auto& res = separable().resources;
  auto cfg = small_config();
  cfg.image_mode = ImageMode::Uniform;
  const auto uni = train_hybrid(users, res, cfg);
  CHECK(uni.final_width() == 9);
  const auto p = uni.predict(users[0], res);
  CHECK(p.channels[2].probs == std::vector<double>(3, 1.0 / 3.0));

  cfg.image_mode = ImageMode::External;
  ExternalProbs ext;
  for (const auto& u : users) {
    std::vector<double> v(3, 0.1);
    v[static_cast<std::size_t>(class_index(*u.label))] = 0.8;
    ext[u.user_id] = v;
  }
  const auto em = train_hybrid(users, res, cfg, ext);
  const auto back = HybridModel::from_json(em.to_json(), ext);
  CHECK(back.predict(users[1], res).probs == em.predict(users[1], res).probs);
  PreparedUser stranger = users[1];
  stranger.user_id = "nobody";
  CHECK(em.predict(stranger, res).image_flagged);
}

TEST_CASE("missing images are imputed or rejected") {
  const auto& res = separable().resources;
  auto users = separable_prepared();
  users[0].brightness.reset();
  users[0].image_stats.reset();
  auto cfg = small_config();
  const auto m = train_hybrid(users, res, cfg);
  const auto p = m.predict(users[0], res);
  CHECK(p.brightness_imputed);
  CHECK(p.image_flagged);
  cfg.impute_images = false;
  CHECK_THROWS_AS(train_hybrid(users, res, cfg), DataError);
}

TEST_CASE("property: uniform rescaling of a tree channel keeps predictions") {
  Rng rng(12);
  Matrix x(45, 3);
  std::vector<int> y(45);
  for (std::size_t i = 0; i < 45; ++i) {
    y[i] = static_cast<int>(i % 3);
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal(j == static_cast<std::size_t>(y[i]) ? 1.0 : 0.0, 1.0);
  }
  for (double scale : {0.01, 3.0, 1000.0}) {
    Matrix scaled = x;
    for (std::size_t i = 0; i < 45; ++i)
      for (std::size_t j = 0; j < 3; ++j) scaled(i, j) *= scale;
    ClassifierSpec spec;
    spec.forest.n_trees = 15;
    const auto a = train_classifier(spec, x, y, 3, 5);
    const auto b = train_classifier(spec, scaled, y, 3, 5);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> q = {rng.normal(0, 2), rng.normal(0, 2), rng.normal(0, 2)};
      std::vector<double> qs = q;
      for (auto& v : qs) v *= scale;
      CHECK(a.predict(q) == b.predict(qs));
    }
  }
}

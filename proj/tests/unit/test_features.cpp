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
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "rolecast/imagechannel.hpp"
#include "rolecast/profilefeat.hpp"
#include "rolecast/tweetfeat.hpp"
#include "rolecast/util.hpp"
#include "support.hpp"

using namespace rolecast;
using rolecast::testing::fixture;
using rolecast::testing::TempDir;
using Tokens = std::vector<std::string>;

namespace {

WordList list(WordListKind kind, std::unordered_set<std::string> words) {
  return WordList(kind, std::move(words));
}

const WordList kFirst = list(WordListKind::FirstPerson, {"i", "am", "my", "me", "i'm"});
const WordList kBrand = list(WordListKind::BrandWord, {"official", "we", "our", "account"});

// Per-pixel max channel over 255, averaged.
double brightness_oracle(const Raster& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.pixels(); ++i) {
    int m = 0;
    for (int c = 0; c < 3; ++c) m = std::max<int>(m, r.rgb[3 * i + c]);
    s += m / 255.0;
  }
  return s / static_cast<double>(r.pixels());
}

Raster random_raster(Rng& rng, std::size_t w, std::size_t h) {
  Raster r{w, h, std::vector<std::uint8_t>(w * h * 3)};
  for (auto& v : r.rgb) v = static_cast<std::uint8_t>(rng.below(256));
  return r;
}

}  // namespace

TEST_CASE("strip_entities") {
  CHECK(strip_entities("fan of #nba @espn http://x.co") == "fan of");
  CHECK(strip_entities("") == "");
  CHECK(strip_entities("no entities here") == "no entities here");
}

TEST_CASE("description first-person score branches") {
  CHECK(description_first_person_score("I am a runner", kFirst, kBrand) == 1.0);
  CHECK(description_first_person_score("Official account of Acme", kFirst, kBrand) == -1.0);
  CHECK(description_first_person_score("I am the official account", kFirst, kBrand) == 0.0);
  CHECK(description_first_person_score("coffee and code", kFirst, kBrand) == 0.0);
  CHECK(description_first_person_score("", kFirst, kBrand) == 0.0);
}

TEST_CASE("description term count") {
  CHECK(description_term_count("fan of #nba") == 2);
  CHECK(description_term_count("") == 0);
  CHECK(description_term_count("#a @b http://c") == 0);
}

TEST_CASE("tff") {
  CHECK(tff_score(0, 0) == 0.0);
  CHECK(tff_score(3, 9) == 0.0);
  CHECK(tff_score(1, 0) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
  CHECK_THROWS_AS(tff_score(-1, 0), std::invalid_argument);
}

TEST_CASE("property: tff monotonicity") {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const auto f = static_cast<std::int64_t>(rng.below(100000));
    const auto r = static_cast<std::int64_t>(rng.below(100000));
    CHECK(tff_score(f + 1, r) > tff_score(f, r));
    CHECK(tff_score(f, r + 1) < tff_score(f, r));
  }
}

TEST_CASE("brightness") {
  CHECK(image_brightness(Raster::filled(3, 2, 0, 0, 0)) == 0.0);
  CHECK(image_brightness(Raster::filled(3, 2, 255, 255, 255)) == 1.0);
  CHECK(image_brightness(Raster::filled(3, 2, 255, 0, 0)) == 1.0);
  Raster half = Raster::filled(2, 1, 0, 0, 0);
  half.rgb[3] = half.rgb[4] = half.rgb[5] = 255;
  CHECK(image_brightness(half) == 0.5);
  CHECK_THROWS_AS(image_brightness(Raster{}), DataError);
}

TEST_CASE("property: brightness matches the oracle and ignores layout") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    Raster r = random_raster(rng, 1 + rng.below(6), 1 + rng.below(6));
    const double b = image_brightness(r);
    CHECK(b == doctest::Approx(brightness_oracle(r)).epsilon(1e-12));
    // Pixel permutation.
    std::vector<std::size_t> perm(r.pixels());
    for (std::size_t p = 0; p < perm.size(); ++p) perm[p] = p;
    rng.shuffle(perm);
    Raster shuffled = r;
    for (std::size_t p = 0; p < perm.size(); ++p)
      for (int c = 0; c < 3; ++c) shuffled.rgb[3 * p + c] = r.rgb[3 * perm[p] + c];
    CHECK(image_brightness(shuffled) == doctest::Approx(b).epsilon(1e-12));
    // Red and blue swapped.
    Raster swapped = r;
    for (std::size_t p = 0; p < r.pixels(); ++p) std::swap(swapped.rgb[3 * p], swapped.rgb[3 * p + 2]);
    CHECK(image_brightness(swapped) == b);
  }
}

TEST_CASE("image decoding") {
  const Raster png = decode_image(fixture("data/img/a1.png"));
  CHECK(png.width == 4);
  CHECK(png.rgb[2] == 200);
  CHECK(image_brightness(png) == doctest::Approx(200.0 / 255.0));
  const Raster jpg = decode_image(fixture("data/img/a2.jpg"));
  CHECK(jpg.height == 4);
  CHECK(image_brightness(jpg) == doctest::Approx(1.0).epsilon(0.01));
  TempDir tmp;
  Rng rng(2);
  const Raster r = random_raster(rng, 5, 3);
  write_png(tmp / "r.png", r);
  CHECK(decode_image(tmp / "r.png").rgb == r.rgb);
  write_file(tmp / "junk.png", "not an image");
  CHECK_THROWS_AS(decode_image(tmp / "junk.png"), DataError);
  CHECK_THROWS_AS(decode_image(tmp / "absent.png"), DataError);
}

TEST_CASE("tweet tokenizer") {
  CHECK(tokenize_tweet("I'm SO happy :) #blessed @bob http://t.co") ==
        Tokens{"i'm", "so", "happy", ":)", "#blessed"});
  CHECK(tokenize_tweet("").empty());
  CHECK(tokenize_tweet("#A #a") == Tokens{"#a", "#a"});
  CHECK(token_set("#A #a b") == Tokens{"#a", "b"});
  CHECK(is_emoticon(":)"));
  CHECK_FALSE(is_emoticon("abc"));
}

TEST_CASE("list match score") {
  const std::vector<std::string> tweets = {"i love tea", "rainy day"};
  CHECK(list_match_score(std::span<const std::string>(tweets), kFirst) == 0.5);
  const std::vector<std::string> none = {"tea", "rain"};
  CHECK(list_match_score(std::span<const std::string>(none), kFirst) == 0.0);
  const std::vector<std::string> all = {"i", "my tea"};
  CHECK(list_match_score(std::span<const std::string>(all), kFirst) == 1.0);
  const std::vector<std::string> dup = {"i i i love tea", "rainy day"};
  CHECK(list_match_score(std::span<const std::string>(dup), kFirst) == 0.5);
  // Newest first: a window of 1 sees only the first tweet.
  CHECK(list_match_score(std::span<const std::string>(tweets), kFirst, TweetWindow::most_recent(1)) == 1.0);
  const std::vector<std::string> five = {"i", "x", "y", "z", "w"};
  CHECK(list_match_score(std::span<const std::string>(five), kFirst, TweetWindow::most_recent(10)) ==
        doctest::Approx(0.2));
}

TEST_CASE("property: a non-matching tweet lowers the score") {
  Rng rng(4);
  const std::vector<std::string> pool = {"i", "my", "tea", "rain", "day", "am", "cat"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> tweets;
    const std::size_t n = 1 + rng.below(6);
    for (std::size_t i = 0; i < n; ++i) tweets.push_back(pool[rng.below(pool.size())] + " " + pool[rng.below(pool.size())]);
    const double before = list_match_score(std::span<const std::string>(tweets), kFirst);
    if (before == 0.0) continue;
    tweets.push_back("tea cat");
    CHECK(list_match_score(std::span<const std::string>(tweets), kFirst) < before);
  }
}

TEST_CASE("tweet scores") {
  const WordList inter = list(WordListKind::Interjection, {"wow"});
  const WordList emo = list(WordListKind::Emotion, {"sad", "happy"});
  const std::vector<std::string> plain = {"tea time", "rain"};
  const auto z = tweet_scores(std::span<const std::string>(plain), kFirst, inter, emo);
  CHECK(z.fp_tweet == 0.0);
  CHECK(z.i_tweet == 0.0);
  CHECK(z.e_tweet == 0.0);
  const std::vector<std::string> emotional = {"so sad today", "tea", "happy happy", "rain"};
  const auto e = tweet_scores(std::span<const std::string>(emotional), kFirst, inter, emo);
  CHECK(e.fp_tweet == 0.0);
  CHECK(e.i_tweet == 0.0);
  CHECK(e.e_tweet == 0.5);
}

TEST_CASE("k-top vocabulary") {
  std::vector<KTopTrainingUser> users = {
      {Role::Male, {"beer", "football", "tea"}},
      {Role::Male, {"beer", "football"}},
      {Role::Male, {"beer", "grill"}},
      {Role::Female, {"nails", "tea", "yoga"}},
      {Role::Female, {"nails", "yoga"}},
      {Role::Brand, {"promo", "sale"}},
      {Role::Brand, {"sale"}},
  };
  const auto v = build_ktop_vocabulary(users, 2, roles_of(ClassMode::Tri));
  CHECK(v.words() == Tokens{"beer", "football", "nails", "yoga", "sale", "promo"});
  const auto v1 = build_ktop_vocabulary(users, 1, roles_of(ClassMode::Tri));
  CHECK(v1.width() == 3);
  CHECK(v1.words() == Tokens{"beer", "nails", "sale"});
  CHECK(KTopVocabulary::from_text(v.to_text()) == v);
  CHECK_THROWS_AS(build_ktop_vocabulary(users, 0, roles_of(ClassMode::Tri)), ConfigError);
  CHECK_THROWS_AS(build_ktop_vocabulary(users, 4, roles_of(ClassMode::Tri)), DataError);
  const KTopVocabulary hashtags(1, {Role::Male}, {"#nba"});
  CHECK(KTopVocabulary::from_text(hashtags.to_text()) == hashtags);
}

TEST_CASE("k-top score vector") {
  const KTopVocabulary v(1, roles_of(ClassMode::Tri), {"beer", "nails", "sale"});
  const std::vector<std::string> none = {"tea", "rain"};
  CHECK(ktop_score_vector(std::span<const std::string>(none), v) == std::vector<double>{0, 0, 0});
  const std::vector<std::string> one = {"nails"};
  CHECK(ktop_score_vector(std::span<const std::string>(one), v) == std::vector<double>{0, 1, 0});
  const std::vector<std::string> four = {"beer now", "more beer", "tea", "beer beer"};
  CHECK(ktop_score_vector(std::span<const std::string>(four), v)[0] == 0.75);
}

TEST_CASE("property: k-top scores are bounded and order-free") {
  const KTopVocabulary v(2, roles_of(ClassMode::Tri), {"a", "b", "c", "d", "e", "f"});
  Rng rng(6);
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f", "g", "h"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> tweets;
    const std::size_t n = 1 + rng.below(8);
    for (std::size_t i = 0; i < n; ++i) tweets.push_back(pool[rng.below(8)] + " " + pool[rng.below(8)]);
    const auto s = ktop_score_vector(std::span<const std::string>(tweets), v);
    for (double x : s) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
    rng.shuffle(tweets);
    CHECK(ktop_score_vector(std::span<const std::string>(tweets), v) == s);
  }
}

TEST_CASE("external probability files") {
  const auto p = parse_external_probs({"# comment", "u1 0.2 0.3 0.5", "u2 0.5 0.5 0.004"});
  CHECK(p.at("u1") == std::vector<double>{0.2, 0.3, 0.5});
  double s = 0.0;
  for (double x : p.at("u2")) s += x;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(parse_external_probs({"u1 -0.1 0.6 0.5"}), DataError);
  CHECK_THROWS_AS(parse_external_probs({"u1 0.2 0.2 0.2"}), DataError);
  CHECK_THROWS_AS(parse_external_probs({"u1 0.2 0.3 0.5", "u1 0.2 0.3 0.5"}), DataError);
  CHECK(fit_to_classes({0.2, 0.2, 0.6}, 2) == std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(fit_to_classes({0.5, 0.5}, 3), ConfigError);
}

TEST_CASE("image statistics") {
  const auto white = image_stat_vector(Raster::filled(2, 2, 255, 255, 255));
  CHECK(white == ImageStats{1, 1, 0, 1, 0, 1, 0});
  CHECK(image_stat_vector(Raster::filled(2, 2, 0, 0, 0)) == ImageStats{});
  const auto gray = image_stat_vector(Raster::filled(3, 3, 128, 128, 128));
  for (std::size_t i : {0, 1, 3, 5}) CHECK(gray[i] == doctest::Approx(128.0 / 255.0));
  for (std::size_t i : {2, 4, 6}) CHECK(gray[i] == 0.0);
}

TEST_CASE("image probability sources") {
  const auto uni = ImageProbSource::uniform(3);
  const auto u = uni.channel_probs({"x", std::nullopt, std::nullopt});
  CHECK(u.probs == std::vector<double>(3, 1.0 / 3.0));
  CHECK_FALSE(u.flagged);

  const auto ext = ImageProbSource::external({{"u1", {0.1, 0.2, 0.7}}}, 3);
  CHECK(ext.channel_probs({"u1", std::nullopt, std::nullopt}).probs == std::vector<double>{0.1, 0.2, 0.7});
  const auto inl = ext.channel_probs({"u9", std::vector<double>{0.6, 0.3, 0.1}, std::nullopt});
  CHECK(inl.probs == std::vector<double>{0.6, 0.3, 0.1});
  const auto missing = ext.channel_probs({"u2", std::nullopt, std::nullopt});
  CHECK(missing.flagged);
  CHECK(missing.probs == std::vector<double>(3, 1.0 / 3.0));

  const auto round = ImageProbSource::from_json(ext.to_json(), {{"u1", {0.1, 0.2, 0.7}}});
  CHECK(round.channel_probs({"u1", std::nullopt, std::nullopt}).probs == std::vector<double>{0.1, 0.2, 0.7});
}

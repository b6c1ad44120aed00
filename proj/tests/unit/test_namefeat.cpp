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
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "doctest.h"
#include "rolecast/namefeat.hpp"
#include "rolecast/util.hpp"
#include "support.hpp"

using namespace rolecast;
using rolecast::testing::fixture;
using Tokens = std::vector<std::string>;

namespace {

NameDictionary john_dict() {
  NameDictionary d;
  d.add("john", Role::Female, 445);
  d.add("john", Role::Male, 256166);
  return d;
}

struct SegmentationFixture {
  NameDictionary names;
  Vocabulary words;
  Lexicon lexicon;
  SegmentationFixture() {
    const std::vector<std::filesystem::path> files = {fixture("segmentation/names.csv")};
    names = load_name_dictionary(files);
    std::unordered_set<std::string> w;
    for (const auto& line : read_lines(fixture("segmentation/words.txt"))) w.insert(line);
    words = Vocabulary(std::move(w));
    lexicon = load_lexicon(fixture("segmentation/lexicon.txt"));
  }
};

}  // namespace

TEST_CASE("name_score") {
  const auto d = john_dict();
  CHECK(name_score("john", d) == doctest::Approx(-0.9982628451863245).epsilon(1e-15));
  CHECK(name_score("nobody", d) == 0.0);
  CHECK(name_score(NameFrequency{406, 167}) == doctest::Approx(0.5886699507389163).epsilon(1e-15));
  CHECK(name_score(NameFrequency{7, 7}) == 0.0);
  CHECK(name_score(NameFrequency{0, 3}) == -1.0);
  CHECK(name_score(NameFrequency{3, 0}) == 1.0);
}

TEST_CASE("property: name_score range and antisymmetry") {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t f = rng.below(1000);
    const std::uint64_t m = rng.below(1000);
    const double s = name_score(NameFrequency{f, m});
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    CHECK(name_score(NameFrequency{m, f}) == -s);
    const bool extreme = (f == 0) != (m == 0);
    CHECK((std::abs(s) == 1.0) == extreme);
  }
}

TEST_CASE("display name uses the first dictionary hit") {
  const auto d = john_dict();
  CHECK(display_name_score("John Clemson", d) == doctest::Approx(-0.9982628451863245));
  CHECK(display_name_score("", d) == 0.0);
  CHECK(display_name_score("xqzt77 John", d) == doctest::Approx(-0.9982628451863245));
  CHECK(name_tokens("Anne-Marie o'Neil") == Tokens{"anne", "marie", "o", "neil"});
}

TEST_CASE("greedy splits") {
  Vocabulary names({"clem", "son", "john"});
  CHECK(greedy_dictionary_split("clemsonjohn", names) == Tokens{"clem", "son", "john"});
  Vocabulary words({"tommy"});
  CHECK(greedy_dictionary_split("tommy", words) == Tokens{"tommy"});
  CHECK(greedy_dictionary_split("", words).empty());
}

TEST_CASE("dp split") {
  Lexicon lex({"clemson", "john"});
  CHECK(dp_word_split("clemsonjohn", lex) == Tokens{"clemson", "john"});
  CHECK(dp_word_split("123tommy", lex) == Tokens{"1", "2", "3", "t", "o", "m", "m", "y"});
  CHECK(dp_word_split("john", lex) == Tokens{"john"});
  CHECK(dp_word_split("", lex).empty());
  CHECK(lex.unknown_char_cost() > lex.word_cost(lex.size()));
}

TEST_CASE("screen-name candidates on the fixture dictionaries") {
  const SegmentationFixture t;
  const ScreenNameSegmenter seg(t.names, t.words, t.lexicon);
  const auto a = seg.candidates("clemsonjohn");
  CHECK(a[0].tokens == Tokens{"cl", "ems", "on", "john"});
  CHECK(a[1].tokens == Tokens{"clem", "son", "john"});
  CHECK(a[2].tokens == Tokens{"clem", "son", "john"});
  CHECK(a[3].tokens == Tokens{"clemson", "john"});
  const auto b = seg.candidates("123tommy");
  CHECK(b[0].tokens == Tokens{"tommy"});
  CHECK(b[1].tokens == Tokens{"tommy"});
  CHECK(b[2].tokens == Tokens{"tom", "my"});
  CHECK(b[3].tokens == Tokens{"1", "2", "3", "t", "o", "m", "m", "y"});

  const auto sa = seg.segment("clemsonjohn");
  CHECK(sa.method == SegmentMethod::DpSplit);
  CHECK(sa.tokens == Tokens{"clemson", "john"});
  const auto sb = seg.segment("123tommy");
  CHECK(sb.method == SegmentMethod::WordBased);
  CHECK(sb.tokens == Tokens{"tommy"});
  CHECK(seg.segment("john").tokens == Tokens{"john"});
}

TEST_CASE("screen name score") {
  const SegmentationFixture t;
  const ScreenNameSegmenter seg(t.names, t.words, t.lexicon);
  CHECK(seg.score("clemsonjohn") == doctest::Approx(-0.9982628451863245));
  CHECK(seg.score("zzzqqq") == 0.0);
  NameDictionary with_tommy = t.names;
  with_tommy.add("tommy", Role::Male, 5000);
  with_tommy.add("tommy", Role::Female, 20);
  const ScreenNameSegmenter seg2(with_tommy, t.words, t.lexicon);
  CHECK(seg2.score("123tommy") < 0.0);
}

TEST_CASE("property: chosen segmentation is never longer than any candidate") {
  const SegmentationFixture t;
  const ScreenNameSegmenter seg(t.names, t.words, t.lexicon);
  Rng rng(17);
  const std::string alphabet = "clemsonjhty12_";
  for (int i = 0; i < 500; ++i) {
    std::string s;
    const std::size_t len = 1 + rng.below(14);
    for (std::size_t j = 0; j < len; ++j) s += alphabet[rng.below(alphabet.size())];
    const auto chosen = seg.segment(s);
    for (const auto& c : seg.candidates(s))
      if (!c.tokens.empty()) CHECK(chosen.tokens.size() <= c.tokens.size());
  }
}

TEST_CASE("dp cost matches exhaustive enumeration") {
  Rng rng(5);
  const std::string alphabet = "abcd";
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> words;
    while (words.size() < 5) {
      std::string w;
      const std::size_t len = 1 + rng.below(3);
      for (std::size_t j = 0; j < len; ++j) w += alphabet[rng.below(alphabet.size())];
      if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
    }
    const Lexicon lex(words);
    std::string s;
    const std::size_t len = 1 + rng.below(10);
    for (std::size_t j = 0; j < len; ++j) s += alphabet[rng.below(alphabet.size())];
    const auto dp = dp_word_split_with_cost(s, lex);
    CHECK(dp.cost == doctest::Approx(oracle::min_segmentation_cost(s, words)).epsilon(1e-12));
    std::string joined;
    for (const auto& tok : dp.tokens) joined += tok;
    CHECK(joined == s);
  }
}

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

// Gender scores for display names and screen names.
//
// A screen name has no spaces, so it is segmented four ways: greedy
// longest-match against the name dictionary, against an English word
// vocabulary, against both, and a Zipf-cost dynamic program over a ranked
// lexicon. The candidate with the fewest tokens wins.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rolecast/corpus.hpp"

namespace rolecast {

// Set of words with a cached maximum length for longest-match scans.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::unordered_set<std::string> words);

  bool contains(const std::string& w) const { return words_.count(w) != 0; }
  std::size_t max_length() const { return max_length_; }
  std::size_t size() const { return words_.size(); }
  const std::unordered_set<std::string>& words() const { return words_; }
  std::string fingerprint() const;

  static Vocabulary from_names(const NameDictionary& dict);

 private:
  std::unordered_set<std::string> words_;
  std::size_t max_length_ = 0;
};

// Ranked word list; rank 1 is the most frequent word.
class Lexicon {
 public:
  Lexicon() = default;
  // Words in rank order. Later duplicates are ignored.
  explicit Lexicon(const std::vector<std::string>& ranked_words);

  std::size_t size() const { return ordered_.size(); }
  // 0 when absent.
  std::size_t rank(const std::string& w) const;
  bool contains(const std::string& w) const { return rank_.count(w) != 0; }
  std::size_t max_length() const { return max_length_; }
  const std::vector<std::string>& words() const { return ordered_; }

  // log(rank * log(size + 1)) for a lexicon word.
  double word_cost(std::size_t rank) const;
  // Cost of a single character outside the lexicon. Strictly above every
  // word cost and positive.
  double unknown_char_cost() const { return unknown_cost_; }
  std::string fingerprint() const;

 private:
  std::unordered_map<std::string, std::size_t> rank_;
  std::vector<std::string> ordered_;
  std::size_t max_length_ = 0;
  double log_size_ = 0.0;
  double unknown_cost_ = 1.0;
};

// One word per line; line order is rank. Accepts gzip files.
Lexicon load_lexicon(const std::filesystem::path& path);

// Signed gender score: (tf_f - tf_m) / max(tf_f, tf_m), or 0 for unknown terms.
double name_score(const NameFrequency& freq);
double name_score(const std::string& term, const NameDictionary& dict);

// Lowercased runs of ASCII letters; everything else separates.
std::vector<std::string> name_tokens(std::string_view text);

// Score of the first token that is a dictionary name, else 0.
double first_hit_score(const std::vector<std::string>& tokens, const NameDictionary& dict);
double display_name_score(std::string_view display_name, const NameDictionary& dict);

// Left-to-right longest match. A position no vocabulary word starts at is
// emitted as a single character.
std::vector<std::string> greedy_dictionary_split(std::string_view s, const Vocabulary& vocab);
// Longest match over the union of two vocabularies.
std::vector<std::string> greedy_dictionary_split(std::string_view s, const Vocabulary& a,
                                                 const Vocabulary& b);

struct DpSplit {
  std::vector<std::string> tokens;
  double cost = 0.0;
};

// Minimum-cost segmentation. Ties go to fewer tokens, then to the longer
// leftmost token.
DpSplit dp_word_split_with_cost(std::string_view s, const Lexicon& lexicon);
std::vector<std::string> dp_word_split(std::string_view s, const Lexicon& lexicon);

enum class SegmentMethod { WordBased, NameWordBased, NameBased, DpSplit };
std::string_view segment_method_name(SegmentMethod m);

struct Segmentation {
  SegmentMethod method = SegmentMethod::DpSplit;
  std::vector<std::string> tokens;
};

// Holds the three greedy vocabularies so repeated calls do not rebuild them.
// The word vocabulary defaults to the lexicon's words.
class ScreenNameSegmenter {
 public:
  ScreenNameSegmenter(const NameDictionary& dict, const Lexicon& lexicon);
  ScreenNameSegmenter(const NameDictionary& dict, Vocabulary words, const Lexicon& lexicon);

  // All four candidates, in priority order.
  std::vector<Segmentation> candidates(std::string_view screen_name) const;
  Segmentation segment(std::string_view screen_name) const;
  double score(std::string_view screen_name) const;

 private:
  const NameDictionary* dict_;
  const Lexicon* lexicon_;
  Vocabulary names_;
  Vocabulary words_;
};

Segmentation segment_screen_name(std::string_view screen_name, const NameDictionary& dict,
                                 const Lexicon& lexicon);
double screen_name_score(std::string_view screen_name, const NameDictionary& dict,
                         const Lexicon& lexicon);

}  // namespace rolecast

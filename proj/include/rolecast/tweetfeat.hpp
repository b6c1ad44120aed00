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

// Tweet tokenization, word-list match rates and the k-top words vector.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rolecast/corpus.hpp"

namespace rolecast {

// Lowercased tokens with URLs and @mentions removed. Hashtags keep their '#',
// emoticons are single tokens and apostrophes stay inside words ("i'm").
std::vector<std::string> tokenize_tweet(std::string_view text);

// Sorted, deduplicated tokens of one tweet.
using TokenSet = std::vector<std::string>;
TokenSet token_set(std::string_view text);

bool is_emoticon(std::string_view token);
// Hashtags, emoticons, and alphabetic words outside the stoplist.
bool is_content_token(const std::string& token, const WordList& stoplist);

// Either every tweet or the n most recent ones.
struct TweetWindow {
  std::size_t recent = 0;  // 0 means all tweets

  static TweetWindow all() { return {}; }
  static TweetWindow most_recent(std::size_t n) { return {n}; }
  static TweetWindow parse(std::string_view s);
  std::string name() const;
  bool operator==(const TweetWindow&) const = default;
};

// Fraction of tweets in the window whose tokens intersect the list. Tweets
// are stored newest first, so the window is a prefix.
double list_match_score(std::span<const TokenSet> tweets, const WordList& list,
                        TweetWindow window = {});
double list_match_score(std::span<const std::string> tweets, const WordList& list,
                        TweetWindow window = {});

struct TweetScores {
  double fp_tweet = 0.0;
  double i_tweet = 0.0;
  double e_tweet = 0.0;
};

TweetScores tweet_scores(std::span<const TokenSet> tweets, const WordList& first,
                         const WordList& interjections, const WordList& emotions,
                         TweetWindow window = {});
TweetScores tweet_scores(std::span<const std::string> tweets, const WordList& first,
                         const WordList& interjections, const WordList& emotions,
                         TweetWindow window = {});

// k words per role, concatenated in role order. Duplicates across roles are
// allowed.
class KTopVocabulary {
 public:
  KTopVocabulary() = default;
  KTopVocabulary(std::size_t k, std::vector<Role> roles, std::vector<std::string> words);

  std::size_t k() const { return k_; }
  const std::vector<Role>& roles() const { return roles_; }
  const std::vector<std::string>& words() const { return words_; }
  std::size_t width() const { return words_.size(); }

  // Role-annotated text export, one word per line.
  std::string to_text() const;
  static KTopVocabulary from_text(std::string_view text);

  bool operator==(const KTopVocabulary&) const = default;

 private:
  std::size_t k_ = 0;
  std::vector<Role> roles_;
  std::vector<std::string> words_;
};

// Content tokens of one labeled training user, used to rank candidates.
struct KTopTrainingUser {
  Role role;
  // Sorted, distinct content tokens over all of the user's tweets.
  std::vector<std::string> content_tokens;
};

std::vector<std::string> content_tokens(std::span<const TokenSet> tweets,
                                        const WordList& stoplist);

// Ranks each role's candidates by the number of that role's users using
// them; ties go to the lexicographically smaller token.
KTopVocabulary build_ktop_vocabulary(std::span<const KTopTrainingUser> training,
                                     std::size_t k, const std::vector<Role>& roles);
KTopVocabulary build_ktop_vocabulary(const UserCorpus& training, std::size_t k,
                                     const WordList& stoplist,
                                     const std::vector<Role>& roles = roles_of(ClassMode::Tri));

// Entry j: fraction of the user's tweets containing vocabulary word j.
std::vector<double> ktop_score_vector(std::span<const TokenSet> tweets,
                                      const KTopVocabulary& vocab);
std::vector<double> ktop_score_vector(std::span<const std::string> tweets,
                                      const KTopVocabulary& vocab);

}  // namespace rolecast

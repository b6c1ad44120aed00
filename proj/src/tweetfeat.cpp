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

#include "rolecast/tweetfeat.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>
#include <unordered_map>

#include "rolecast/util.hpp"

namespace rolecast {

namespace {

// Longest first, so ":-)" wins over ":-".
constexpr std::array<std::string_view, 20> kEmoticons = {
    ":-)", ":-(", ":-D", ":-P", ":-p", ";-)", ":'(", ":)", ":(", ":D",
    ":P",  ":p",  ";)",  ":/",  ":|",  ":o",  ":O",  "<3", "=)", "=("};

bool is_word_byte(char c) {
  return is_ascii_alnum(c) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

// Word characters for plain tokens exclude '_' so "good_night" splits.
bool is_plain_word_byte(char c) {
  return is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80;
}

bool is_url(std::string_view chunk) {
  const std::string lc = to_lower(chunk);
  return lc.rfind("http://", 0) == 0 || lc.rfind("https://", 0) == 0 ||
         lc.rfind("www.", 0) == 0 || lc.find("://") != std::string::npos;
}

std::size_t match_emoticon(std::string_view s, std::size_t i) {
  for (auto e : kEmoticons)
    if (s.substr(i, e.size()) == e) return e.size();
  return 0;
}

}  // namespace

bool is_emoticon(std::string_view token) {
  return std::find(kEmoticons.begin(), kEmoticons.end(), token) != kEmoticons.end();
}

std::vector<std::string> tokenize_tweet(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    const std::string_view chunk = text.substr(pos, end - pos);
    pos = end;
    if (chunk.empty() || is_url(chunk)) continue;

    std::size_t i = 0;
    while (i < chunk.size()) {
      if (std::size_t len = match_emoticon(chunk, i)) {
        tokens.emplace_back(chunk.substr(i, len));
        i += len;
        continue;
      }
      const char c = chunk[i];
      if ((c == '@' || c == '#') && i + 1 < chunk.size() && is_word_byte(chunk[i + 1])) {
        std::size_t j = i + 1;
        while (j < chunk.size() && is_word_byte(chunk[j])) ++j;
        if (c == '#') tokens.push_back(to_lower(chunk.substr(i, j - i)));
        i = j;
        continue;
      }
      if (is_plain_word_byte(c)) {
        std::size_t j = i;
        while (j < chunk.size()) {
          if (is_plain_word_byte(chunk[j])) {
            ++j;
          } else if (chunk[j] == '\'' && j + 1 < chunk.size() && is_plain_word_byte(chunk[j + 1])) {
            j += 2;
          } else {
            break;
          }
        }
        tokens.push_back(to_lower(chunk.substr(i, j - i)));
        i = j;
        continue;
      }
      ++i;
    }
  }
  return tokens;
}

TokenSet token_set(std::string_view text) {
  TokenSet t = tokenize_tweet(text);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

bool is_content_token(const std::string& token, const WordList& stoplist) {
  if (token.size() > 1 && token[0] == '#') return true;
  if (is_emoticon(token)) return true;
  bool has_letter = false;
  for (char c : token) {
    if (is_ascii_alpha(c) || static_cast<unsigned char>(c) >= 0x80)
      has_letter = true;
    else if (c != '\'')
      return false;
  }
  return has_letter && !stoplist.contains(token);
}

TweetWindow TweetWindow::parse(std::string_view s) {
  if (s == "all") return all();
  std::string_view digits = s;
  if (digits.rfind("recent", 0) == 0) digits.remove_prefix(6);
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || n == 0)
    throw ConfigError("invalid tweet window '" + std::string(s) + "' (expected all or N > 0)");
  return most_recent(n);
}

std::string TweetWindow::name() const {
  return recent == 0 ? "all" : std::to_string(recent);
}

double list_match_score(std::span<const TokenSet> tweets, const WordList& list,
                        TweetWindow window) {
  const std::size_t n = window.recent == 0 ? tweets.size() : std::min(window.recent, tweets.size());
  if (n == 0) throw DataError("empty tweet collection");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = tweets[i];
    if (std::any_of(t.begin(), t.end(), [&](const std::string& w) { return list.contains(w); }))
      ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

namespace {

std::vector<TokenSet> token_sets(std::span<const std::string> tweets) {
  std::vector<TokenSet> out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) out.push_back(token_set(t));
  return out;
}

}  // namespace

double list_match_score(std::span<const std::string> tweets, const WordList& list,
                        TweetWindow window) {
  const auto sets = token_sets(tweets);
  return list_match_score(std::span<const TokenSet>(sets), list, window);
}

TweetScores tweet_scores(std::span<const TokenSet> tweets, const WordList& first,
                         const WordList& interjections, const WordList& emotions,
                         TweetWindow window) {
  return {list_match_score(tweets, first, window), list_match_score(tweets, interjections, window),
          list_match_score(tweets, emotions, window)};
}

TweetScores tweet_scores(std::span<const std::string> tweets, const WordList& first,
                         const WordList& interjections, const WordList& emotions,
                         TweetWindow window) {
  const auto sets = token_sets(tweets);
  return tweet_scores(std::span<const TokenSet>(sets), first, interjections, emotions, window);
}

KTopVocabulary::KTopVocabulary(std::size_t k, std::vector<Role> roles,
                               std::vector<std::string> words)
    : k_(k), roles_(std::move(roles)), words_(std::move(words)) {
  if (words_.size() != k_ * roles_.size())
    throw std::invalid_argument("k-top vocabulary must hold k words per role");
}

std::string KTopVocabulary::to_text() const {
  std::ostringstream out;
  out << "# k-top vocabulary, k=" << k_ << "\n";
  for (std::size_t r = 0; r < roles_.size(); ++r) {
    out << "[" << role_name(roles_[r]) << "]\n";
    for (std::size_t j = 0; j < k_; ++j) out << words_[r * k_ + j] << "\n";
  }
  return out.str();
}

KTopVocabulary KTopVocabulary::from_text(std::string_view text) {
  std::vector<Role> roles;
  std::vector<std::vector<std::string>> blocks;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    // Hashtag words also start with '#', so comments need "# ".
    if (line.empty() || line == "#" || line.rfind("# ", 0) == 0) continue;
    if (line.front() == '[' && line.back() == ']') {
      auto role = parse_role(line.substr(1, line.size() - 2));
      if (!role) throw DataError("unknown role block " + line, line_no);
      roles.push_back(*role);
      blocks.emplace_back();
      continue;
    }
    if (blocks.empty()) throw DataError("word outside a role block", line_no);
    blocks.back().push_back(line);
  }
  if (blocks.empty()) throw DataError("vocabulary has no role blocks");
  const std::size_t k = blocks.front().size();
  std::vector<std::string> words;
  for (auto& b : blocks) {
    if (b.size() != k) throw DataError("role blocks differ in size");
    words.insert(words.end(), b.begin(), b.end());
  }
  return KTopVocabulary(k, std::move(roles), std::move(words));
}

std::vector<std::string> content_tokens(std::span<const TokenSet> tweets,
                                        const WordList& stoplist) {
  std::vector<std::string> out;
  for (const auto& t : tweets)
    for (const auto& w : t)
      if (is_content_token(w, stoplist)) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

KTopVocabulary build_ktop_vocabulary(std::span<const KTopTrainingUser> training,
                                     std::size_t k, const std::vector<Role>& roles) {
  if (k == 0) throw ConfigError("k must be at least 1");
  std::vector<std::string> words;
  words.reserve(k * roles.size());
  for (Role role : roles) {
    std::unordered_map<std::string, std::size_t> df;
    std::size_t users = 0;
    for (const auto& u : training) {
      if (u.role != role) continue;
      ++users;
      for (const auto& w : u.content_tokens) ++df[w];
    }
    if (users == 0)
      throw DataError("no training users with role " + std::string(role_name(role)));
    if (df.size() < k)
      throw DataError("role " + std::string(role_name(role)) + " has only " +
                      std::to_string(df.size()) + " candidate words, fewer than k=" +
                      std::to_string(k));
    std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k),
                      ranked.end(), [](const auto& a, const auto& b) {
                        return a.second != b.second ? a.second > b.second : a.first < b.first;
                      });
    for (std::size_t j = 0; j < k; ++j) words.push_back(ranked[j].first);
  }
  return KTopVocabulary(k, roles, std::move(words));
}

KTopVocabulary build_ktop_vocabulary(const UserCorpus& training, std::size_t k,
                                     const WordList& stoplist, const std::vector<Role>& roles) {
  std::vector<KTopTrainingUser> users;
  users.reserve(training.size());
  for (const auto& u : training.users()) {
    if (!u.label) throw DataError("user '" + u.user_id + "' has no label");
    const auto sets = token_sets(u.tweets);
    users.push_back({*u.label, content_tokens(sets, stoplist)});
  }
  return build_ktop_vocabulary(users, k, roles);
}

std::vector<double> ktop_score_vector(std::span<const TokenSet> tweets,
                                      const KTopVocabulary& vocab) {
  if (tweets.empty()) throw DataError("empty tweet collection");
  std::vector<double> out(vocab.width(), 0.0);
  const auto& words = vocab.words();
  for (std::size_t j = 0; j < words.size(); ++j) {
    std::size_t hits = 0;
    for (const auto& t : tweets)
      if (std::binary_search(t.begin(), t.end(), words[j])) ++hits;
    out[j] = static_cast<double>(hits) / static_cast<double>(tweets.size());
  }
  return out;
}

std::vector<double> ktop_score_vector(std::span<const std::string> tweets,
                                      const KTopVocabulary& vocab) {
  const auto sets = token_sets(tweets);
  return ktop_score_vector(std::span<const TokenSet>(sets), vocab);
}

}  // namespace rolecast

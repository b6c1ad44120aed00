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

#include "rolecast/namefeat.hpp"

#include <algorithm>
#include <cmath>

#include "rolecast/util.hpp"

namespace rolecast {

Vocabulary::Vocabulary(std::unordered_set<std::string> words) : words_(std::move(words)) {
  for (const auto& w : words_) max_length_ = std::max(max_length_, w.size());
}

Vocabulary Vocabulary::from_names(const NameDictionary& dict) {
  std::unordered_set<std::string> words;
  words.reserve(dict.size());
  for (const auto& [name, freq] : dict.entries()) words.insert(name);
  return Vocabulary(std::move(words));
}

std::string Vocabulary::fingerprint() const {
  std::vector<std::string> sorted(words_.begin(), words_.end());
  std::sort(sorted.begin(), sorted.end());
  Fingerprint fp;
  for (const auto& w : sorted) {
    fp.update(w);
    fp.update("\n");
  }
  return fp.hex();
}

Lexicon::Lexicon(const std::vector<std::string>& ranked_words) {
  for (const auto& w : ranked_words) {
    if (w.empty() || rank_.count(w)) continue;
    ordered_.push_back(w);
    rank_.emplace(w, ordered_.size());
    max_length_ = std::max(max_length_, w.size());
  }
  log_size_ = std::log(static_cast<double>(ordered_.size()) + 1.0);
  const double worst = ordered_.empty() ? 0.0 : word_cost(ordered_.size());
  unknown_cost_ = std::max(worst, 0.0) + 10.0;
}

std::size_t Lexicon::rank(const std::string& w) const {
  auto it = rank_.find(w);
  return it == rank_.end() ? 0 : it->second;
}

double Lexicon::word_cost(std::size_t rank) const {
  return std::log(static_cast<double>(rank) * log_size_);
}

std::string Lexicon::fingerprint() const {
  Fingerprint fp;
  for (const auto& w : ordered_) {
    fp.update(w);
    fp.update("\n");
  }
  return fp.hex();
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::vector<std::string> words;
  for (const auto& line : read_lines(path)) {
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_first_of(" \t", b);
    words.push_back(to_lower(line.substr(b, e == std::string::npos ? e : e - b)));
  }
  if (words.empty()) throw DataError(path.string() + ": lexicon is empty");
  return Lexicon(words);
}

double name_score(const NameFrequency& freq) {
  const auto f = static_cast<double>(freq.female);
  const auto m = static_cast<double>(freq.male);
  const double denom = std::max(f, m);
  if (denom <= 0.0) return 0.0;
  return (f - m) / denom;
}

double name_score(const std::string& term, const NameDictionary& dict) {
  const NameFrequency* freq = dict.find(term);
  return freq ? name_score(*freq) : 0.0;
}

std::vector<std::string> name_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    // Bytes of multi-byte UTF-8 sequences stay inside the token.
    if (is_ascii_alpha(c) || static_cast<unsigned char>(c) >= 0x80) {
      current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double first_hit_score(const std::vector<std::string>& tokens, const NameDictionary& dict) {
  for (const auto& t : tokens)
    if (const NameFrequency* f = dict.find(t)) return name_score(*f);
  return 0.0;
}

double display_name_score(std::string_view display_name, const NameDictionary& dict) {
  return first_hit_score(name_tokens(display_name), dict);
}

namespace {

template <class Contains>
std::vector<std::string> greedy_split(std::string_view s, std::size_t max_len,
                                      Contains&& contains) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t take = 1;
    for (std::size_t len = std::min(max_len, s.size() - i); len >= 1; --len) {
      if (contains(std::string(s.substr(i, len)))) {
        take = len;
        break;
      }
    }
    tokens.emplace_back(s.substr(i, take));
    i += take;
  }
  return tokens;
}

}  // namespace

std::vector<std::string> greedy_dictionary_split(std::string_view s, const Vocabulary& vocab) {
  return greedy_split(s, vocab.max_length(),
                      [&](const std::string& w) { return vocab.contains(w); });
}

std::vector<std::string> greedy_dictionary_split(std::string_view s, const Vocabulary& a,
                                                 const Vocabulary& b) {
  return greedy_split(s, std::max(a.max_length(), b.max_length()),
                      [&](const std::string& w) { return a.contains(w) || b.contains(w); });
}

DpSplit dp_word_split_with_cost(std::string_view s, const Lexicon& lexicon) {
  constexpr double kTieEps = 1e-9;
  struct Cell {
    double cost = 0.0;
    std::size_t tokens = 0;
    std::size_t first_len = 0;
  };
  const std::size_t n = s.size();
  // best[i] is the optimal segmentation of the suffix s[i..).
  std::vector<Cell> best(n + 1);
  const std::size_t max_len = std::max<std::size_t>(lexicon.max_length(), 1);
  for (std::size_t i = n; i-- > 0;) {
    Cell cur;
    bool have = false;
    for (std::size_t len = 1; len <= std::min(max_len, n - i); ++len) {
      const std::size_t r = lexicon.rank(std::string(s.substr(i, len)));
      double c;
      if (r != 0)
        c = lexicon.word_cost(r);
      else if (len == 1)
        c = lexicon.unknown_char_cost();
      else
        continue;
      const Cell cand{c + best[i + len].cost, best[i + len].tokens + 1, len};
      bool better = !have || cand.cost < cur.cost - kTieEps;
      if (!better && std::abs(cand.cost - cur.cost) <= kTieEps) {
        better = cand.tokens < cur.tokens ||
                 (cand.tokens == cur.tokens && cand.first_len > cur.first_len);
      }
      if (better) {
        cur = cand;
        have = true;
      }
    }
    best[i] = cur;
  }
  DpSplit out;
  out.cost = best[0].cost;
  for (std::size_t i = 0; i < n; i += best[i].first_len) out.tokens.emplace_back(s.substr(i, best[i].first_len));
  return out;
}

std::vector<std::string> dp_word_split(std::string_view s, const Lexicon& lexicon) {
  return dp_word_split_with_cost(s, lexicon).tokens;
}

std::string_view segment_method_name(SegmentMethod m) {
  switch (m) {
    case SegmentMethod::WordBased: return "word-based";
    case SegmentMethod::NameWordBased: return "name-word-based";
    case SegmentMethod::NameBased: return "name-based";
    case SegmentMethod::DpSplit: return "dp-split";
  }
  return "?";
}

ScreenNameSegmenter::ScreenNameSegmenter(const NameDictionary& dict, const Lexicon& lexicon)
    : ScreenNameSegmenter(dict,
                          Vocabulary(std::unordered_set<std::string>(lexicon.words().begin(),
                                                                     lexicon.words().end())),
                          lexicon) {}

ScreenNameSegmenter::ScreenNameSegmenter(const NameDictionary& dict, Vocabulary words,
                                         const Lexicon& lexicon)
    : dict_(&dict), lexicon_(&lexicon), names_(Vocabulary::from_names(dict)),
      words_(std::move(words)) {}

std::vector<Segmentation> ScreenNameSegmenter::candidates(std::string_view screen_name) const {
  std::string letters;
  std::string alnum;
  for (char c : screen_name) {
    const char lc = (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    if (is_ascii_alpha(lc)) letters += lc;
    if (is_ascii_alnum(lc)) alnum += lc;
  }
  return {
      {SegmentMethod::WordBased, greedy_dictionary_split(letters, words_)},
      {SegmentMethod::NameWordBased, greedy_dictionary_split(letters, names_, words_)},
      {SegmentMethod::NameBased, greedy_dictionary_split(letters, names_)},
      {SegmentMethod::DpSplit, dp_word_split(alnum, *lexicon_)},
  };
}

Segmentation ScreenNameSegmenter::segment(std::string_view screen_name) const {
  auto all = candidates(screen_name);
  const Segmentation* best = nullptr;
  for (const auto& c : all) {
    // An empty candidate (e.g. greedy methods on an all-digit name) carries
    // no information and must not win on token count.
    if (c.tokens.empty()) continue;
    if (!best || c.tokens.size() < best->tokens.size()) best = &c;
  }
  return best ? *best : all.back();
}

double ScreenNameSegmenter::score(std::string_view screen_name) const {
  return first_hit_score(segment(screen_name).tokens, *dict_);
}

Segmentation segment_screen_name(std::string_view screen_name, const NameDictionary& dict,
                                 const Lexicon& lexicon) {
  return ScreenNameSegmenter(dict, lexicon).segment(screen_name);
}

double screen_name_score(std::string_view screen_name, const NameDictionary& dict,
                         const Lexicon& lexicon) {
  return ScreenNameSegmenter(dict, lexicon).score(screen_name);
}

}  // namespace rolecast

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

// Datasets, name dictionaries, word lists and fold assignment.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rolecast/common.hpp"

namespace rolecast {

struct UserRecord {
  std::string user_id;
  std::optional<Role> label;
  std::string display_name;
  std::string screen_name;
  std::string description;
  std::int64_t followers = 0;
  std::int64_t friends = 0;
  // Newest first, as returned by a user timeline.
  std::vector<std::string> tweets;
  std::optional<std::string> image_path;
  std::optional<std::array<double, 3>> image_probs;

  bool operator==(const UserRecord&) const = default;
};

struct SkippedRecord {
  std::size_t line;
  std::string reason;
};

class UserCorpus {
 public:
  UserCorpus() = default;
  explicit UserCorpus(std::vector<UserRecord> users, std::filesystem::path base_dir = {});

  const std::vector<UserRecord>& users() const { return users_; }
  std::size_t size() const { return users_.size(); }
  const UserRecord& operator[](std::size_t i) const { return users_[i]; }
  const UserRecord* find(const std::string& user_id) const;

  // Directory relative image paths are resolved against.
  const std::filesystem::path& base_dir() const { return base_dir_; }
  std::filesystem::path resolve_image(const std::string& image_path) const;

  // Records dropped by the min-tweets gate.
  const std::vector<SkippedRecord>& skipped() const { return skipped_; }
  void set_skipped(std::vector<SkippedRecord> s) { skipped_ = std::move(s); }

  bool operator==(const UserCorpus& o) const { return users_ == o.users_; }

 private:
  std::vector<UserRecord> users_;
  std::unordered_map<std::string, std::size_t> index_;
  std::filesystem::path base_dir_;
  std::vector<SkippedRecord> skipped_;
};

struct LoadOptions {
  bool require_labels = false;
  // Users with fewer tweets are skipped (not rejected).
  std::size_t min_tweets = 1;
};

// Parses one JSON-lines record. Throws DataError naming the offending field.
UserRecord parse_user_record(std::string_view json_line, std::size_t line_no,
                             bool require_labels);
std::string serialize_user_record(const UserRecord& user);

UserCorpus load_dataset(const std::filesystem::path& path, const LoadOptions& opts = {});
void save_dataset(const UserCorpus& corpus, const std::filesystem::path& path);

struct NameFrequency {
  std::uint64_t female = 0;
  std::uint64_t male = 0;
  bool operator==(const NameFrequency&) const = default;
};

class NameDictionary {
 public:
  // Adds to any existing counts for the name.
  void add(const std::string& name, Role gender, std::uint64_t frequency);
  const NameFrequency* find(const std::string& name) const;
  std::size_t size() const { return entries_.size(); }
  const std::unordered_map<std::string, NameFrequency>& entries() const { return entries_; }
  std::string fingerprint() const;

  bool operator==(const NameDictionary& o) const { return entries_ == o.entries_; }

 private:
  std::unordered_map<std::string, NameFrequency> entries_;
};

// Merges `name,gender,frequency` CSV files. Rows repeating a (name, gender)
// pair sum their frequencies.
NameDictionary load_name_dictionary(std::span<const std::filesystem::path> paths);

enum class WordListKind { FirstPerson, BrandWord, Interjection, Emotion, Stop };

class WordList {
 public:
  WordList() = default;
  WordList(WordListKind kind, std::unordered_set<std::string> words);

  WordListKind kind() const { return kind_; }
  bool contains(const std::string& w) const { return words_.count(w) != 0; }
  const std::unordered_set<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  std::string fingerprint() const;

 private:
  WordListKind kind_ = WordListKind::FirstPerson;
  std::unordered_set<std::string> words_;
};

// One token per line, '#' starts a comment line.
WordList load_word_list(const std::filesystem::path& path, WordListKind kind);
WordList parse_word_list(const std::vector<std::string>& lines, WordListKind kind,
                         const std::string& source = "<memory>");

class FoldAssignment {
 public:
  FoldAssignment(std::size_t n_folds, std::vector<std::size_t> fold_of)
      : n_folds_(n_folds), fold_of_(std::move(fold_of)) {}

  std::size_t n_folds() const { return n_folds_; }
  // Fold index of the i-th corpus user.
  std::size_t fold_of(std::size_t i) const { return fold_of_[i]; }
  const std::vector<std::size_t>& folds() const { return fold_of_; }
  std::vector<std::size_t> train_rows(std::size_t fold) const;
  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::map<std::string, std::size_t> by_user(const UserCorpus& corpus) const;

  bool operator==(const FoldAssignment&) const = default;

 private:
  std::size_t n_folds_;
  std::vector<std::size_t> fold_of_;
};

// Shuffles each class with the seed and deals its members round-robin, so
// every fold holds floor or ceil of its class share. Each class must have at
// least n_folds members.
FoldAssignment stratified_folds(std::span<const int> labels, std::size_t n_classes,
                                std::size_t n_folds, std::uint64_t seed);
FoldAssignment stratified_folds(const UserCorpus& corpus, std::size_t n_folds,
                                std::uint64_t seed);
// Same dealing without the per-class minimum; folds may miss small classes.
FoldAssignment deal_stratified(std::span<const int> labels, std::size_t n_classes,
                               std::size_t n_folds, std::uint64_t seed);

}  // namespace rolecast

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

#include "rolecast/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "rolecast/util.hpp"

namespace rolecast {

using nlohmann::json;

UserCorpus::UserCorpus(std::vector<UserRecord> users, std::filesystem::path base_dir)
    : users_(std::move(users)), base_dir_(std::move(base_dir)) {
  for (std::size_t i = 0; i < users_.size(); ++i) {
    if (!index_.emplace(users_[i].user_id, i).second)
      throw DataError("duplicate user_id '" + users_[i].user_id + "'");
  }
}

const UserRecord* UserCorpus::find(const std::string& user_id) const {
  auto it = index_.find(user_id);
  return it == index_.end() ? nullptr : &users_[it->second];
}

std::filesystem::path UserCorpus::resolve_image(const std::string& image_path) const {
  std::filesystem::path p(image_path);
  if (p.is_relative() && !base_dir_.empty()) return base_dir_ / p;
  return p;
}

namespace {

std::string require_string(const json& j, const char* field, std::size_t line, bool required) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) {
    if (required) throw DataError(std::string("missing field '") + field + "'", line);
    return {};
  }
  if (!it->is_string()) throw DataError(std::string("field '") + field + "' must be a string", line);
  return it->get<std::string>();
}

std::int64_t require_count(const json& j, const char* field, std::size_t line) {
  auto it = j.find(field);
  if (it == j.end()) throw DataError(std::string("missing field '") + field + "'", line);
  if (!it->is_number_integer())
    throw DataError(std::string("field '") + field + "' must be an integer", line);
  if (it->is_number_unsigned()) {
    const auto v = it->get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(INT64_MAX))
      throw DataError(std::string("field '") + field + "' is out of range", line);
    return static_cast<std::int64_t>(v);
  }
  const auto v = it->get<std::int64_t>();
  if (v < 0)
    throw DataError(std::string("field '") + field + "' must be non-negative, got " +
                        std::to_string(v),
                    line);
  return v;
}

}  // namespace

UserRecord parse_user_record(std::string_view json_line, std::size_t line_no,
                             bool require_labels) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what(), line_no);
  }
  if (!j.is_object()) throw DataError("record must be a JSON object", line_no);

  UserRecord u;
  u.user_id = require_string(j, "user_id", line_no, true);
  if (u.user_id.empty()) throw DataError("field 'user_id' must be non-empty", line_no);

  const std::string label = require_string(j, "label", line_no, false);
  if (!label.empty()) {
    u.label = parse_role(label);
    if (!u.label)
      throw DataError("field 'label' must be male|female|brand, got '" + label + "'", line_no);
  } else if (require_labels) {
    throw DataError("missing field 'label'", line_no);
  }

  u.display_name = require_string(j, "display_name", line_no, false);
  u.screen_name = require_string(j, "screen_name", line_no, true);
  if (u.screen_name.empty()) throw DataError("field 'screen_name' must be non-empty", line_no);
  u.description = require_string(j, "description", line_no, false);
  u.followers = require_count(j, "followers", line_no);
  u.friends = require_count(j, "friends", line_no);

  auto tw = j.find("tweets");
  if (tw == j.end()) throw DataError("missing field 'tweets'", line_no);
  if (!tw->is_array()) throw DataError("field 'tweets' must be an array of strings", line_no);
  for (const auto& t : *tw) {
    if (!t.is_string()) throw DataError("field 'tweets' must be an array of strings", line_no);
    u.tweets.push_back(t.get<std::string>());
  }

  const std::string image = require_string(j, "image_path", line_no, false);
  if (!image.empty()) u.image_path = image;

  auto probs = j.find("image_probs");
  if (probs != j.end() && !probs->is_null()) {
    if (!probs->is_array() || probs->size() != 3)
      throw DataError("field 'image_probs' must be an array of 3 numbers", line_no);
    std::array<double, 3> p{};
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(*probs)[i].is_number())
        throw DataError("field 'image_probs' must be an array of 3 numbers", line_no);
      p[i] = (*probs)[i].get<double>();
      if (!std::isfinite(p[i]) || p[i] < 0.0)
        throw DataError("field 'image_probs' has a negative or non-finite entry", line_no);
      sum += p[i];
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw DataError("field 'image_probs' must sum to 1 (got " + std::to_string(sum) + ")",
                      line_no);
    u.image_probs = p;
  }
  return u;
}

std::string serialize_user_record(const UserRecord& u) {
  json j = json::object();
  j["user_id"] = u.user_id;
  if (u.label) j["label"] = std::string(role_name(*u.label));
  j["display_name"] = u.display_name;
  j["screen_name"] = u.screen_name;
  j["description"] = u.description;
  j["followers"] = u.followers;
  j["friends"] = u.friends;
  j["tweets"] = u.tweets;
  if (u.image_path) j["image_path"] = *u.image_path;
  if (u.image_probs) j["image_probs"] = *u.image_probs;
  return j.dump();
}

UserCorpus load_dataset(const std::filesystem::path& path, const LoadOptions& opts) {
  if (!std::filesystem::exists(path)) throw DataError("dataset not found: " + path.string());
  const auto lines = read_lines(path);
  std::vector<UserRecord> users;
  std::vector<SkippedRecord> skipped;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    UserRecord u = parse_user_record(line, i + 1, opts.require_labels);
    auto [it, fresh] = seen.emplace(u.user_id, i + 1);
    if (!fresh)
      throw DataError("duplicate user_id '" + u.user_id + "' (first seen on line " +
                          std::to_string(it->second) + ")",
                      i + 1);
    if (u.tweets.size() < opts.min_tweets) {
      skipped.push_back({i + 1, "user '" + u.user_id + "' has " +
                                    std::to_string(u.tweets.size()) + " tweets"});
      continue;
    }
    users.push_back(std::move(u));
  }
  if (users.empty()) throw DataError("dataset " + path.string() + " contains no usable records");
  UserCorpus corpus(std::move(users), path.parent_path());
  corpus.set_skipped(std::move(skipped));
  return corpus;
}

void save_dataset(const UserCorpus& corpus, const std::filesystem::path& path) {
  std::string out;
  for (const auto& u : corpus.users()) {
    out += serialize_user_record(u);
    out += '\n';
  }
  write_file(path, out);
}

void NameDictionary::add(const std::string& name, Role gender, std::uint64_t frequency) {
  auto& e = entries_[name];
  if (gender == Role::Female)
    e.female += frequency;
  else if (gender == Role::Male)
    e.male += frequency;
  else
    throw DataError("name gender must be F or M");
}

const NameFrequency* NameDictionary::find(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string NameDictionary::fingerprint() const {
  std::vector<const std::pair<const std::string, NameFrequency>*> sorted;
  sorted.reserve(entries_.size());
  for (const auto& e : entries_) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->first < b->first; });
  Fingerprint fp;
  for (const auto* e : sorted) {
    fp.update(e->first);
    fp.update("\t" + std::to_string(e->second.female) + "\t" + std::to_string(e->second.male) +
              "\n");
  }
  return fp.hex();
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

}  // namespace

NameDictionary load_name_dictionary(std::span<const std::filesystem::path> paths) {
  if (paths.empty()) throw DataError("no name dictionary files given");
  NameDictionary dict;
  for (const auto& path : paths) {
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string line = trim(lines[i]);
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> cols;
      std::stringstream ss(line);
      for (std::string c; std::getline(ss, c, ',');) cols.push_back(trim(c));
      const std::string where = path.filename().string() + ": ";
      if (cols.size() != 3)
        throw DataError(where + "expected 3 columns name,gender,frequency", i + 1);
      if (i == 0 && to_lower(cols[0]) == "name" && to_lower(cols[1]) == "gender") continue;
      const std::string name = to_lower(cols[0]);
      if (name.empty() || has_whitespace(name))
        throw DataError(where + "name must be a single non-empty token", i + 1);
      Role gender;
      if (cols[1] == "F" || cols[1] == "f")
        gender = Role::Female;
      else if (cols[1] == "M" || cols[1] == "m")
        gender = Role::Male;
      else
        throw DataError(where + "unknown gender code '" + cols[1] + "'", i + 1);
      std::int64_t freq = 0;
      const auto& f = cols[2];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), freq);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw DataError(where + "malformed frequency '" + f + "'", i + 1);
      if (freq <= 0) throw DataError(where + "frequency must be positive", i + 1);
      dict.add(name, gender, static_cast<std::uint64_t>(freq));
    }
  }
  if (dict.size() == 0) throw DataError("name dictionary is empty");
  return dict;
}

WordList::WordList(WordListKind kind, std::unordered_set<std::string> words)
    : kind_(kind), words_(std::move(words)) {}

std::string WordList::fingerprint() const {
  std::vector<std::string> sorted(words_.begin(), words_.end());
  std::sort(sorted.begin(), sorted.end());
  Fingerprint fp;
  for (const auto& w : sorted) {
    fp.update(w);
    fp.update("\n");
  }
  return fp.hex();
}

WordList parse_word_list(const std::vector<std::string>& lines, WordListKind kind,
                         const std::string& source) {
  std::unordered_set<std::string> words;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    if (has_whitespace(line))
      throw DataError(source + ": token contains whitespace: '" + line + "'", i + 1);
    words.insert(to_lower(line));
  }
  if (words.empty()) throw DataError(source + ": word list is empty");
  return WordList(kind, std::move(words));
}

WordList load_word_list(const std::filesystem::path& path, WordListKind kind) {
  return parse_word_list(read_lines(path), kind, path.filename().string());
}

std::vector<std::size_t> FoldAssignment::train_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of_.size(); ++i)
    if (fold_of_[i] != fold) rows.push_back(i);
  return rows;
}

std::vector<std::size_t> FoldAssignment::test_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of_.size(); ++i)
    if (fold_of_[i] == fold) rows.push_back(i);
  return rows;
}

std::map<std::string, std::size_t> FoldAssignment::by_user(const UserCorpus& corpus) const {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) out[corpus[i].user_id] = fold_of_[i];
  return out;
}

FoldAssignment deal_stratified(std::span<const int> labels, std::size_t n_classes,
                               std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw ConfigError("number of folds must be at least 2");
  if (n_folds > labels.size())
    throw DataError("cannot split " + std::to_string(labels.size()) + " rows into " +
                    std::to_string(n_folds) + " folds");
  std::vector<std::vector<std::size_t>> members(n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= n_classes)
      throw std::invalid_argument("label out of range");
    members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  Rng rng(seed);
  std::vector<std::size_t> fold_of(labels.size(), 0);
  // The dealing position carries over between classes so fold sizes also
  // stay within one of each other.
  std::size_t position = 0;
  for (auto& m : members) {
    rng.shuffle(m);
    for (std::size_t idx : m) fold_of[idx] = position++ % n_folds;
  }
  return FoldAssignment(n_folds, std::move(fold_of));
}

FoldAssignment stratified_folds(std::span<const int> labels, std::size_t n_classes,
                                std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw ConfigError("number of folds must be at least 2");
  std::vector<std::size_t> counts(n_classes, 0);
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= n_classes)
      throw std::invalid_argument("label out of range");
    ++counts[static_cast<std::size_t>(l)];
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (counts[c] < n_folds)
      throw DataError("class " + std::string(role_name(static_cast<Role>(c))) + " has " +
                      std::to_string(counts[c]) + " members, fewer than " +
                      std::to_string(n_folds) + " folds");
  }
  return deal_stratified(labels, n_classes, n_folds, seed);
}

FoldAssignment stratified_folds(const UserCorpus& corpus, std::size_t n_folds,
                                std::uint64_t seed) {
  std::vector<int> labels;
  labels.reserve(corpus.size());
  bool has_brand = false;
  for (const auto& u : corpus.users()) {
    if (!u.label) throw DataError("user '" + u.user_id + "' has no label");
    labels.push_back(class_index(*u.label));
    has_brand = has_brand || *u.label == Role::Brand;
  }
  return stratified_folds(labels, has_brand ? 3 : 2, n_folds, seed);
}

}  // namespace rolecast

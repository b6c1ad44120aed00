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

#include "rolecast/resources.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "rolecast/util.hpp"

#ifndef ROLECAST_DEFAULT_RESOURCE_DIR
#define ROLECAST_DEFAULT_RESOURCE_DIR "resources"
#endif

namespace rolecast {

namespace fs = std::filesystem;

namespace {

fs::path require(const fs::path& dir, const std::string& name) {
  fs::path p = dir / name;
  if (fs::exists(p)) return p;
  throw ConfigError("resource file missing: " + p.string());
}

std::string sorted_lines(const std::unordered_set<std::string>& words) {
  std::vector<std::string> v(words.begin(), words.end());
  std::sort(v.begin(), v.end());
  std::string out;
  for (const auto& w : v) out += w + "\n";
  return out;
}

}  // namespace

std::map<std::string, std::string> Resources::fingerprints() const {
  return {{"names", names.fingerprint()},
          {"lexicon", lexicon.fingerprint()},
          {"words", words ? words->fingerprint() : std::string("lexicon")},
          {"first_person", first_person.fingerprint()},
          {"brand", brand.fingerprint()},
          {"interjections", interjections.fingerprint()},
          {"emotions", emotions.fingerprint()},
          {"stoplist", stoplist.fingerprint()}};
}

Resources load_resources(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("resource directory not found: " + dir.string());
  Resources res;
  std::vector<fs::path> name_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string f = entry.path().filename().string();
    if (f.rfind("names", 0) == 0 && entry.path().extension() == ".csv")
      name_files.push_back(entry.path());
  }
  if (name_files.empty()) throw ConfigError("no names*.csv in " + dir.string());
  std::sort(name_files.begin(), name_files.end());
  res.names = load_name_dictionary(name_files);

  if (fs::exists(dir / "lexicon.txt"))
    res.lexicon = load_lexicon(dir / "lexicon.txt");
  else
    res.lexicon = load_lexicon(require(dir, "lexicon.txt.gz"));

  if (fs::exists(dir / "words.txt")) {
    const WordList w = load_word_list(dir / "words.txt", WordListKind::Stop);
    res.words = Vocabulary(w.words());
  }
  res.first_person = load_word_list(require(dir, "first_person.txt"), WordListKind::FirstPerson);
  res.brand = load_word_list(require(dir, "brand.txt"), WordListKind::BrandWord);
  res.interjections =
      load_word_list(require(dir, "interjections.txt"), WordListKind::Interjection);
  res.emotions = load_word_list(require(dir, "emotions.txt"), WordListKind::Emotion);
  res.stoplist = load_word_list(require(dir, "stoplist.txt"), WordListKind::Stop);
  return res;
}

fs::path resolve_resource_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kResourceEnvVar); env && *env) return env;
  return ROLECAST_DEFAULT_RESOURCE_DIR;
}

void save_resources(const Resources& res, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<std::pair<std::string, NameFrequency>> names(res.names.entries().begin(),
                                                           res.names.entries().end());
  std::sort(names.begin(), names.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::ostringstream csv;
  csv << "name,gender,frequency\n";
  for (const auto& [name, f] : names) {
    if (f.female) csv << name << ",F," << f.female << "\n";
    if (f.male) csv << name << ",M," << f.male << "\n";
  }
  write_file(dir / "names.csv", csv.str());

  std::string lex;
  for (const auto& w : res.lexicon.words()) lex += w + "\n";
  write_file(dir / "lexicon.txt", lex);
  if (res.words) write_file(dir / "words.txt", sorted_lines(res.words->words()));
  write_file(dir / "first_person.txt", sorted_lines(res.first_person.words()));
  write_file(dir / "brand.txt", sorted_lines(res.brand.words()));
  write_file(dir / "interjections.txt", sorted_lines(res.interjections.words()));
  write_file(dir / "emotions.txt", sorted_lines(res.emotions.words()));
  write_file(dir / "stoplist.txt", sorted_lines(res.stoplist.words()));
}

}  // namespace rolecast

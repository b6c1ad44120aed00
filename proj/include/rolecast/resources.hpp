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

// The dictionaries and word lists feature extraction needs.
//
// A resource directory holds:
//   names*.csv          name,gender,frequency rows (all files are merged)
//   lexicon.txt[.gz]    ranked words for the screen-name splitter
//   words.txt           optional; greedy word vocabulary (default: lexicon)
//   first_person.txt brand.txt interjections.txt emotions.txt stoplist.txt

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "rolecast/corpus.hpp"
#include "rolecast/namefeat.hpp"

namespace rolecast {

inline constexpr const char* kResourceEnvVar = "ROLECAST_RESOURCES";

struct Resources {
  NameDictionary names;
  Lexicon lexicon;
  std::optional<Vocabulary> words;
  WordList first_person;
  WordList brand;
  WordList interjections;
  WordList emotions;
  WordList stoplist;

  // Content hashes keyed by resource name.
  std::map<std::string, std::string> fingerprints() const;
};

Resources load_resources(const std::filesystem::path& dir);

// Flag, then the environment variable, then the built-in default.
std::filesystem::path resolve_resource_dir(const std::optional<std::string>& flag);

// Writes a resource set in the directory layout load_resources reads.
void save_resources(const Resources& res, const std::filesystem::path& dir);

}  // namespace rolecast

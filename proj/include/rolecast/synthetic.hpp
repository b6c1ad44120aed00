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

// Seeded synthetic users with role signals of adjustable strength.
//
// Every user draws, per feature group, a "source role": the true role with
// probability `separability`, otherwise a uniformly random role. The group's
// content is then generated from the source role's profile. Groups outside
// `planted` always use a random source role.

#pragma once

#include <filesystem>
#include <map>
#include <set>

#include "rolecast/corpus.hpp"
#include "rolecast/hybrid.hpp"
#include "rolecast/profilefeat.hpp"
#include "rolecast/resources.hpp"

namespace rolecast {

struct SyntheticSpec {
  double separability = 1.0;
  // BF4 and IMG share the profile image; planting either plants it.
  std::set<FeatureGroup> planted{kAllGroups.begin(), kAllGroups.end()};
  ClassMode mode = ClassMode::Tri;
  std::size_t min_tweets = 20;
  std::size_t max_tweets = 40;
  std::size_t image_size = 8;

  void validate() const;
};

struct SyntheticData {
  UserCorpus corpus;
  // Keyed by the users' image_path.
  std::map<std::string, Raster> images;
  Resources resources;

  ImageLoader loader() const { return map_image_loader(images); }
};

// Resources matching the generator's vocabulary.
Resources synthetic_resources();

// Roles are balanced to within one user.
SyntheticData generate_synthetic_corpus(const SyntheticSpec& spec, std::size_t n_users,
                                        std::uint64_t seed);

// users.jsonl, images/*.png and resources/ under dir.
void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir);

}  // namespace rolecast

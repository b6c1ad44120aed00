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

// Per-user image channel probabilities: read from an external file, produced
// by a small forest over image statistics, or uniform.

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolecast/learners.hpp"
#include "rolecast/profilefeat.hpp"

namespace rolecast {

// Probabilities per user id, in role order. Lines hold 2 or 3 values.
using ExternalProbs = std::map<std::string, std::vector<double>>;

// Lines `user_id p_male p_female [p_brand]`. Rows summing to within
// [0.99, 1.01] are renormalized; anything else is rejected.
ExternalProbs load_external_probs(const std::filesystem::path& path);
ExternalProbs parse_external_probs(const std::vector<std::string>& lines,
                                   const std::string& source = "<memory>");

// Adapts a probability row to n classes. A 3-class row used for 2 classes
// keeps the first two entries and renormalizes.
std::vector<double> fit_to_classes(const std::vector<double>& probs, std::size_t n_classes);

inline constexpr std::size_t kImageStatWidth = 7;
using ImageStats = std::array<double, kImageStatWidth>;

// Mean V, then mean and standard deviation of R, G and B, all on [0, 1].
ImageStats image_stat_vector(const Raster& image);

enum class ImageMode { External, Fallback, Uniform };
std::string_view image_mode_name(ImageMode m);
ImageMode parse_image_mode(std::string_view s);

// What a user contributes to the image channel.
struct ImageInput {
  std::string user_id;
  std::optional<std::vector<double>> inline_probs;
  std::optional<ImageStats> stats;
};

struct ChannelProbs {
  std::vector<double> probs;
  // Uniform stand-in for a missing external row, or imputed statistics.
  bool flagged = false;
};

class ImageProbSource {
 public:
  ImageProbSource() = default;
  static ImageProbSource uniform(std::size_t n_classes);
  static ImageProbSource external(ExternalProbs probs, std::size_t n_classes);
  // `fill` replaces the statistics of users without a usable image; without
  // it such users are an error.
  static ImageProbSource fallback(Classifier model, std::optional<ImageStats> fill);

  ImageMode mode() const { return mode_; }
  std::size_t n_classes() const { return n_classes_; }
  const Classifier* fallback_model() const { return mode_ == ImageMode::Fallback ? &model_ : nullptr; }

  // External rows come from the map first, then from the record itself.
  ChannelProbs channel_probs(const ImageInput& user) const;

  // The external map is not stored; it is supplied again at prediction.
  nlohmann::json to_json() const;
  static ImageProbSource from_json(const nlohmann::json& j, ExternalProbs external = {});

 private:
  ImageMode mode_ = ImageMode::Uniform;
  std::size_t n_classes_ = 3;
  ExternalProbs external_;
  Classifier model_;
  std::optional<ImageStats> fill_;
};

}  // namespace rolecast

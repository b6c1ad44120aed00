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

// The stacked role classifier.
//
// Three channels each map a user to a probability vector: a learner over
// the nine basic features (BF), a learner over the k-top word scores (AF),
// and the image channel. A final learner of the same type is trained on the
// concatenated channel outputs. In the two-class variant BF and AF are merged
// into one channel.

#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolecast/corpus.hpp"
#include "rolecast/imagechannel.hpp"
#include "rolecast/learners.hpp"
#include "rolecast/resources.hpp"
#include "rolecast/tweetfeat.hpp"

namespace rolecast {

inline constexpr std::size_t kBFWidth = 9;
using BFVector = std::array<double, kBFWidth>;
inline constexpr std::array<const char*, kBFWidth> kBFNames = {
    "score_d_name", "score_s_name", "score_fp_desc",  "score_tf_desc", "score_tff",
    "score_b_image", "score_fp_tweet", "score_i_tweet", "score_e_tweet"};
inline constexpr int kBFVersion = 1;

enum class FeatureGroup { BF1, BF2, BF3, BF4, BF5, AF1, IMG };
inline constexpr std::array<FeatureGroup, 7> kAllGroups = {
    FeatureGroup::BF1, FeatureGroup::BF2, FeatureGroup::BF3, FeatureGroup::BF4,
    FeatureGroup::BF5, FeatureGroup::AF1, FeatureGroup::IMG};
std::string_view group_name(FeatureGroup g);     // "BF1"
std::string_view group_caption(FeatureGroup g);  // "name"
FeatureGroup parse_group(std::string_view s);
// Positions of a BF group inside the BF vector; empty for AF1 and IMG.
std::vector<std::size_t> bf_columns_of(FeatureGroup g);

enum class Stacking { OutOfFold, Resubstitution };
std::string_view stacking_name(Stacking s);
Stacking parse_stacking(std::string_view s);

struct HybridConfig {
  ClassifierSpec classifier;
  std::size_t k = 20;
  TweetWindow window;
  ImageMode image_mode = ImageMode::Fallback;
  Stacking stacking = Stacking::OutOfFold;
  std::size_t inner_folds = 5;
  std::uint64_t seed = 0;
  ClassMode mode = ClassMode::Tri;
  std::set<FeatureGroup> drop;
  // Users without a usable image get training means instead of an error.
  bool impute_images = true;
  // Not part of the model; never changes results.
  unsigned threads = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static HybridConfig from_json(const nlohmann::json& j);
  bool operator==(const HybridConfig& o) const { return to_json() == o.to_json(); }
};

// Returns the decoded profile image of a user, or nothing when the user has
// none. Throws DataError when an image exists but cannot be decoded.
using ImageLoader = std::function<std::optional<Raster>(const UserRecord&)>;
// Reads image_path relative to the corpus base directory.
ImageLoader file_image_loader(const UserCorpus& corpus);
// Looks image_path up in memory.
ImageLoader map_image_loader(std::map<std::string, Raster> images);

// Everything about a user that does not depend on training data.
struct PreparedUser {
  std::string user_id;
  std::optional<Role> label;
  double d_name = 0.0;
  double s_name = 0.0;
  double fp_desc = 0.0;
  double tf_desc = 0.0;
  double tff = 0.0;
  std::optional<double> brightness;
  std::optional<ImageStats> image_stats;
  std::optional<std::vector<double>> inline_probs;
  // Newest first.
  std::vector<TokenSet> tweets;
  std::vector<std::string> content;
};

// Undecodable images count as missing when `tolerate_bad_images` is set.
PreparedUser prepare_user(const UserRecord& user, const Resources& res,
                          const ScreenNameSegmenter& segmenter, const ImageLoader& images,
                          bool tolerate_bad_images = true);
std::vector<PreparedUser> prepare_users(const UserCorpus& corpus, const Resources& res,
                                        const ImageLoader& images, unsigned threads = 1,
                                        bool tolerate_bad_images = true);

// The nine basic features in kBFNames order. A missing image uses
// `brightness_fill`.
BFVector assemble_bf(const PreparedUser& user, const Resources& res, TweetWindow window,
                     double brightness_fill);

// One probability row per training row, each from a model trained without
// that row's inner fold.
Matrix out_of_fold_probs(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                         const ClassifierSpec& spec, std::size_t inner_folds, std::uint64_t seed,
                         unsigned threads = 1);

struct ChannelOutput {
  std::string name;
  std::vector<double> probs;
};

struct RolePrediction {
  std::string user_id;
  Role role = Role::Male;
  std::vector<double> probs;
  std::vector<ChannelOutput> channels;
  bool image_flagged = false;
  bool brightness_imputed = false;
};

struct FeatureChannel {
  std::string name;  // "BF", "AF" or "BF+AF"
  bool uses_bf = false;
  bool uses_af = false;
  Classifier model;
  bool operator==(const FeatureChannel&) const = default;
};

inline constexpr int kModelVersion = 1;

class HybridModel {
 public:
  const HybridConfig& config() const { return config_; }
  ClassMode mode() const { return config_.mode; }
  std::size_t n_classes() const { return class_count(config_.mode); }
  const std::vector<std::size_t>& bf_columns() const { return bf_columns_; }
  const std::optional<KTopVocabulary>& vocabulary() const { return vocab_; }
  const std::vector<FeatureChannel>& feature_channels() const { return channels_; }
  bool uses_image() const { return use_image_; }
  const ImageProbSource& image_source() const { return image_; }
  const Classifier& final_model() const { return final_; }
  double brightness_fill() const { return brightness_fill_; }
  const std::map<std::string, std::string>& fingerprints() const { return fingerprints_; }

  std::vector<std::string> channel_names() const;
  std::size_t final_width() const { return channel_names().size() * n_classes(); }

  RolePrediction predict(const PreparedUser& user, const Resources& res) const;

  // Throws ConfigError naming the first resource whose content differs.
  void check_fingerprints(const Resources& res) const;

  nlohmann::json to_json() const;
  // External image probabilities are supplied again for External mode.
  static HybridModel from_json(const nlohmann::json& j, ExternalProbs external = {});

 private:
  friend HybridModel train_hybrid(std::span<const PreparedUser>, const Resources&,
                                  const HybridConfig&, const ExternalProbs&);
  std::vector<double> channel_input(const FeatureChannel& c, const PreparedUser& u,
                                    const Resources& res) const;

  HybridConfig config_;
  std::vector<std::size_t> bf_columns_;
  std::optional<KTopVocabulary> vocab_;
  std::vector<FeatureChannel> channels_;
  bool use_image_ = false;
  ImageProbSource image_;
  Classifier final_;
  double brightness_fill_ = 0.5;
  std::map<std::string, std::string> fingerprints_;
};

HybridModel train_hybrid(std::span<const PreparedUser> training, const Resources& res,
                         const HybridConfig& config, const ExternalProbs& external = {});
HybridModel train_hybrid(const UserCorpus& training, const Resources& res,
                         const HybridConfig& config, const ImageLoader& images,
                         const ExternalProbs& external = {});
// Male/female only; any brand label is an error.
HybridModel train_binary_variant(const UserCorpus& training, const Resources& res,
                                 HybridConfig config, const ImageLoader& images,
                                 const ExternalProbs& external = {});

RolePrediction predict_role(const HybridModel& model, const UserRecord& user,
                            const Resources& res, const ImageLoader& images);

}  // namespace rolecast

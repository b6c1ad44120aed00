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

#include "rolecast/hybrid.hpp"

#include <algorithm>
#include <cmath>

#include "rolecast/namefeat.hpp"
#include "rolecast/profilefeat.hpp"
#include "rolecast/util.hpp"

namespace rolecast {

using nlohmann::json;

std::string_view group_name(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::BF1: return "BF1";
    case FeatureGroup::BF2: return "BF2";
    case FeatureGroup::BF3: return "BF3";
    case FeatureGroup::BF4: return "BF4";
    case FeatureGroup::BF5: return "BF5";
    case FeatureGroup::AF1: return "AF1";
    case FeatureGroup::IMG: return "IMG";
  }
  return "?";
}

std::string_view group_caption(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::BF1: return "name";
    case FeatureGroup::BF2: return "description";
    case FeatureGroup::BF3: return "relationship";
    case FeatureGroup::BF4: return "profile image";
    case FeatureGroup::BF5: return "tweet";
    case FeatureGroup::AF1: return "tweet";
    case FeatureGroup::IMG: return "profile image";
  }
  return "?";
}

FeatureGroup parse_group(std::string_view s) {
  std::string up(s);
  for (char& c : up)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  for (FeatureGroup g : kAllGroups)
    if (group_name(g) == up) return g;
  throw ConfigError("unknown feature group '" + std::string(s) +
                    "' (expected BF1..BF5, AF1 or IMG)");
}

std::vector<std::size_t> bf_columns_of(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::BF1: return {0, 1};
    case FeatureGroup::BF2: return {2, 3};
    case FeatureGroup::BF3: return {4};
    case FeatureGroup::BF4: return {5};
    case FeatureGroup::BF5: return {6, 7, 8};
    default: return {};
  }
}

std::string_view stacking_name(Stacking s) {
  return s == Stacking::OutOfFold ? "oof" : "resub";
}

Stacking parse_stacking(std::string_view s) {
  if (s == "oof") return Stacking::OutOfFold;
  if (s == "resub") return Stacking::Resubstitution;
  throw ConfigError("unknown stacking '" + std::string(s) + "' (expected oof|resub)");
}

void HybridConfig::validate() const {
  if (k == 0) throw ConfigError("k must be at least 1");
  if (inner_folds < 2) throw ConfigError("inner folds must be at least 2");
  if (classifier.forest.n_trees == 0) throw ConfigError("a forest needs at least one tree");
  if (classifier.boost.n_stages == 0) throw ConfigError("boosting needs at least one stage");
}

json HybridConfig::to_json() const {
  json groups = json::array();
  for (FeatureGroup g : drop) groups.push_back(group_name(g));
  return {{"classifier", classifier.to_json()},
          {"k", k},
          {"window", window.name()},
          {"image_mode", image_mode_name(image_mode)},
          {"stacking", stacking_name(stacking)},
          {"inner_folds", inner_folds},
          {"seed", seed},
          {"mode", mode_name(mode)},
          {"drop", std::move(groups)},
          {"impute_images", impute_images}};
}

HybridConfig HybridConfig::from_json(const json& j) {
  HybridConfig c;
  c.classifier = ClassifierSpec::from_json(j.at("classifier"));
  c.k = j.at("k").get<std::size_t>();
  c.window = TweetWindow::parse(j.at("window").get<std::string>());
  c.image_mode = parse_image_mode(j.at("image_mode").get<std::string>());
  c.stacking = parse_stacking(j.at("stacking").get<std::string>());
  c.inner_folds = j.at("inner_folds").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.mode = parse_mode(j.at("mode").get<std::string>());
  for (const auto& g : j.at("drop")) c.drop.insert(parse_group(g.get<std::string>()));
  c.impute_images = j.at("impute_images").get<bool>();
  return c;
}

// ---------------------------------------------------------------------------
// Feature preparation

ImageLoader file_image_loader(const UserCorpus& corpus) {
  const std::filesystem::path base = corpus.base_dir();
  return [base](const UserRecord& u) -> std::optional<Raster> {
    if (!u.image_path || u.image_path->empty()) return std::nullopt;
    std::filesystem::path p(*u.image_path);
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::exists(p)) return std::nullopt;
    return decode_image(p);
  };
}

ImageLoader map_image_loader(std::map<std::string, Raster> images) {
  auto shared = std::make_shared<const std::map<std::string, Raster>>(std::move(images));
  return [shared](const UserRecord& u) -> std::optional<Raster> {
    if (!u.image_path) return std::nullopt;
    auto it = shared->find(*u.image_path);
    if (it == shared->end()) return std::nullopt;
    return it->second;
  };
}

PreparedUser prepare_user(const UserRecord& user, const Resources& res,
                          const ScreenNameSegmenter& segmenter, const ImageLoader& images,
                          bool tolerate_bad_images) {
  PreparedUser p;
  p.user_id = user.user_id;
  p.label = user.label;
  p.d_name = display_name_score(user.display_name, res.names);
  p.s_name = segmenter.score(user.screen_name);
  p.fp_desc = description_first_person_score(user.description, res.first_person, res.brand);
  p.tf_desc = static_cast<double>(description_term_count(user.description));
  p.tff = tff_score(user.followers, user.friends);
  std::optional<Raster> image;
  if (images) {
    try {
      image = images(user);
    } catch (const DataError&) {
      if (!tolerate_bad_images) throw;
    }
  }
  if (image) {
    p.brightness = image_brightness(*image);
    p.image_stats = image_stat_vector(*image);
  }
  if (user.image_probs) p.inline_probs = std::vector<double>(user.image_probs->begin(), user.image_probs->end());
  p.tweets.reserve(user.tweets.size());
  for (const auto& t : user.tweets) p.tweets.push_back(token_set(t));
  p.content = content_tokens(p.tweets, res.stoplist);
  return p;
}

std::vector<PreparedUser> prepare_users(const UserCorpus& corpus, const Resources& res,
                                        const ImageLoader& images, unsigned threads,
                                        bool tolerate_bad_images) {
  const ScreenNameSegmenter segmenter =
      res.words ? ScreenNameSegmenter(res.names, *res.words, res.lexicon)
                : ScreenNameSegmenter(res.names, res.lexicon);
  std::vector<PreparedUser> out(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    try {
      out[i] = prepare_user(corpus[i], res, segmenter, images, tolerate_bad_images);
    } catch (const DataError& e) {
      throw DataError("user '" + corpus[i].user_id + "': " + e.what());
    }
  });
  return out;
}

BFVector assemble_bf(const PreparedUser& user, const Resources& res, TweetWindow window,
                     double brightness_fill) {
  const TweetScores t =
      tweet_scores(std::span<const TokenSet>(user.tweets), res.first_person, res.interjections,
                   res.emotions, window);
  return {user.d_name,  user.s_name,   user.fp_desc,
          user.tf_desc, user.tff,      user.brightness.value_or(brightness_fill),
          t.fp_tweet,   t.i_tweet,     t.e_tweet};
}

// ---------------------------------------------------------------------------
// Training

Matrix out_of_fold_probs(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                         const ClassifierSpec& spec, std::size_t inner_folds, std::uint64_t seed,
                         unsigned threads) {
  if (inner_folds < 2) throw ConfigError("inner folds must be at least 2");
  if (inner_folds > x.rows())
    throw DataError("cannot split " + std::to_string(x.rows()) + " rows into " +
                    std::to_string(inner_folds) + " inner folds");
  const FoldAssignment folds = deal_stratified(y, n_classes, inner_folds, seed);
  Matrix out(x.rows(), n_classes);
  const unsigned inner_threads = threads > 1 ? 1 : threads;
  parallel_for(inner_folds, threads, [&](std::size_t f) {
    const auto train = folds.train_rows(f);
    const auto test = folds.test_rows(f);
    const Matrix xt = x.select_rows(train);
    std::vector<int> yt;
    yt.reserve(train.size());
    for (std::size_t r : train) yt.push_back(y[r]);
    const Classifier model =
        train_classifier(spec, xt, yt, n_classes, derive_seed(seed, f), inner_threads);
    for (std::size_t r : test) {
      const auto p = model.predict_proba(x.row(r));
      std::copy(p.begin(), p.end(), out.row(r).begin());
    }
  });
  return out;
}

namespace {

Matrix resubstitution_probs(const Classifier& model, const Matrix& x) {
  Matrix out(x.rows(), model.n_classes());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto p = model.predict_proba(x.row(r));
    std::copy(p.begin(), p.end(), out.row(r).begin());
  }
  return out;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged feature rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

ClassifierSpec fallback_spec() {
  ClassifierSpec s;
  s.kind = ClassifierKind::Forest;
  return s;
}

enum SeedStream : std::uint64_t { kChannelModel = 10, kChannelOof = 20, kImageModel = 30,
                                  kImageOof = 31, kFinal = 40 };

}  // namespace

std::vector<double> HybridModel::channel_input(const FeatureChannel& c, const PreparedUser& u,
                                               const Resources& res) const {
  std::vector<double> v;
  if (c.uses_bf) {
    const BFVector bf = assemble_bf(u, res, config_.window, brightness_fill_);
    for (std::size_t col : bf_columns_) v.push_back(bf[col]);
  }
  if (c.uses_af) {
    const auto af = ktop_score_vector(std::span<const TokenSet>(u.tweets), *vocab_);
    v.insert(v.end(), af.begin(), af.end());
  }
  return v;
}

std::vector<std::string> HybridModel::channel_names() const {
  std::vector<std::string> names;
  for (const auto& c : channels_) names.push_back(c.name);
  if (use_image_) names.emplace_back("IMG");
  return names;
}

HybridModel train_hybrid(std::span<const PreparedUser> training, const Resources& res,
                         const HybridConfig& config, const ExternalProbs& external) {
  config.validate();
  const std::size_t n = class_count(config.mode);
  const std::vector<Role> roles = roles_of(config.mode);
  if (training.empty()) throw DataError("training set is empty");

  std::vector<int> y;
  y.reserve(training.size());
  std::vector<std::size_t> per_class(n, 0);
  for (const auto& u : training) {
    if (!u.label) throw DataError("training user '" + u.user_id + "' has no label");
    if (config.mode == ClassMode::Bi && *u.label == Role::Brand)
      throw DataError("user '" + u.user_id + "' is labeled brand; the two-class variant takes male and female users only");
    y.push_back(class_index(*u.label));
    ++per_class[static_cast<std::size_t>(y.back())];
  }
  for (std::size_t c = 0; c < n; ++c)
    if (per_class[c] == 0)
      throw DataError("role " + std::string(role_name(roles[c])) + " is absent from the training data");

  HybridModel model;
  model.config_ = config;
  model.fingerprints_ = res.fingerprints();
  for (FeatureGroup g : kAllGroups) {
    if (config.drop.count(g)) continue;
    for (std::size_t col : bf_columns_of(g)) model.bf_columns_.push_back(col);
  }
  std::sort(model.bf_columns_.begin(), model.bf_columns_.end());
  const bool use_bf = !model.bf_columns_.empty();
  const bool use_af = !config.drop.count(FeatureGroup::AF1);
  model.use_image_ = !config.drop.count(FeatureGroup::IMG);
  if (!use_bf && !use_af && !model.use_image_)
    throw ConfigError("every feature channel is dropped");

  const bool uses_brightness =
      std::find(model.bf_columns_.begin(), model.bf_columns_.end(), 5) != model.bf_columns_.end();
  double bright_sum = 0.0;
  std::size_t bright_n = 0;
  for (const auto& u : training) {
    if (u.brightness) {
      bright_sum += *u.brightness;
      ++bright_n;
    } else if (uses_brightness && !config.impute_images) {
      throw DataError("user '" + u.user_id + "' has no usable profile image");
    }
  }
  model.brightness_fill_ = bright_n ? bright_sum / static_cast<double>(bright_n) : 0.5;

  if (use_af) {
    std::vector<KTopTrainingUser> users;
    users.reserve(training.size());
    for (const auto& u : training) users.push_back({*u.label, u.content});
    model.vocab_ = build_ktop_vocabulary(users, config.k, roles);
  }

  if (config.mode == ClassMode::Tri) {
    if (use_bf) model.channels_.push_back({"BF", true, false, {}});
    if (use_af) model.channels_.push_back({"AF", false, true, {}});
  } else if (use_bf || use_af) {
    model.channels_.push_back({"BF+AF", use_bf, use_af, {}});
  }

  std::vector<Matrix> stack_parts;
  for (std::size_t ci = 0; ci < model.channels_.size(); ++ci) {
    FeatureChannel& channel = model.channels_[ci];
    std::vector<std::vector<double>> rows(training.size());
    parallel_for(training.size(), config.threads,
                 [&](std::size_t r) { rows[r] = model.channel_input(channel, training[r], res); });
    const Matrix x = rows_to_matrix(rows, rows.front().size());
    channel.model = train_classifier(config.classifier, x, y, n,
                                     derive_seed(config.seed, kChannelModel + ci), config.threads);
    stack_parts.push_back(
        config.stacking == Stacking::OutOfFold
            ? out_of_fold_probs(x, y, n, config.classifier, config.inner_folds,
                                derive_seed(config.seed, kChannelOof + ci), config.threads)
            : resubstitution_probs(channel.model, x));
  }

  if (model.use_image_) {
    Matrix probs(training.size(), n);
    switch (config.image_mode) {
      case ImageMode::Uniform:
        model.image_ = ImageProbSource::uniform(n);
        break;
      case ImageMode::External:
        model.image_ = ImageProbSource::external(external, n);
        break;
      case ImageMode::Fallback: {
        ImageStats fill{};
        std::size_t have = 0;
        for (const auto& u : training) {
          if (u.image_stats) {
            for (std::size_t j = 0; j < kImageStatWidth; ++j) fill[j] += (*u.image_stats)[j];
            ++have;
          } else if (!config.impute_images) {
            throw DataError("user '" + u.user_id + "' has no usable profile image");
          }
        }
        for (double& v : fill) v = have ? v / static_cast<double>(have) : 0.5;
        Matrix s(training.size(), kImageStatWidth);
        for (std::size_t r = 0; r < training.size(); ++r) {
          const ImageStats& st = training[r].image_stats ? *training[r].image_stats : fill;
          std::copy(st.begin(), st.end(), s.row(r).begin());
        }
        Classifier m = train_classifier(fallback_spec(), s, y, n,
                                        derive_seed(config.seed, kImageModel), config.threads);
        if (config.stacking == Stacking::OutOfFold)
          probs = out_of_fold_probs(s, y, n, fallback_spec(), config.inner_folds,
                                    derive_seed(config.seed, kImageOof), config.threads);
        else
          probs = resubstitution_probs(m, s);
        model.image_ = ImageProbSource::fallback(
            std::move(m), config.impute_images ? std::optional<ImageStats>(fill) : std::nullopt);
        break;
      }
    }
    if (config.image_mode != ImageMode::Fallback) {
      for (std::size_t r = 0; r < training.size(); ++r) {
        const auto& u = training[r];
        const auto p = model.image_.channel_probs({u.user_id, u.inline_probs, u.image_stats}).probs;
        std::copy(p.begin(), p.end(), probs.row(r).begin());
      }
    }
    stack_parts.push_back(std::move(probs));
  }

  std::vector<const Matrix*> parts;
  for (const auto& p : stack_parts) parts.push_back(&p);
  const Matrix stacked = Matrix::hstack(parts);
  model.final_ = train_classifier(config.classifier, stacked, y, n,
                                  derive_seed(config.seed, kFinal), config.threads);
  return model;
}

HybridModel train_hybrid(const UserCorpus& training, const Resources& res,
                         const HybridConfig& config, const ImageLoader& images,
                         const ExternalProbs& external) {
  const auto prepared = prepare_users(training, res, images, config.threads, config.impute_images);
  return train_hybrid(prepared, res, config, external);
}

HybridModel train_binary_variant(const UserCorpus& training, const Resources& res,
                                 HybridConfig config, const ImageLoader& images,
                                 const ExternalProbs& external) {
  config.mode = ClassMode::Bi;
  for (const auto& u : training.users())
    if (u.label == Role::Brand)
      throw DataError("user '" + u.user_id + "' is labeled brand; the two-class variant takes male and female users only");
  return train_hybrid(training, res, config, images, external);
}

// ---------------------------------------------------------------------------
// Prediction

RolePrediction HybridModel::predict(const PreparedUser& user, const Resources& res) const {
  RolePrediction out;
  out.user_id = user.user_id;
  std::vector<double> stacked;
  for (const auto& c : channels_) {
    auto p = c.model.predict_proba(channel_input(c, user, res));
    stacked.insert(stacked.end(), p.begin(), p.end());
    out.channels.push_back({c.name, std::move(p)});
  }
  if (use_image_) {
    ChannelProbs img = image_.channel_probs({user.user_id, user.inline_probs, user.image_stats});
    out.image_flagged = img.flagged;
    stacked.insert(stacked.end(), img.probs.begin(), img.probs.end());
    out.channels.push_back({"IMG", std::move(img.probs)});
  }
  out.probs = final_.predict_proba(stacked);
  out.role = roles_of(config_.mode)[static_cast<std::size_t>(argmax(out.probs))];
  out.brightness_imputed =
      !user.brightness &&
      std::find(bf_columns_.begin(), bf_columns_.end(), 5) != bf_columns_.end();
  return out;
}

RolePrediction predict_role(const HybridModel& model, const UserRecord& user,
                            const Resources& res, const ImageLoader& images) {
  const ScreenNameSegmenter segmenter =
      res.words ? ScreenNameSegmenter(res.names, *res.words, res.lexicon)
                : ScreenNameSegmenter(res.names, res.lexicon);
  return model.predict(prepare_user(user, res, segmenter, images, model.config().impute_images),
                       res);
}

void HybridModel::check_fingerprints(const Resources& res) const {
  const auto current = res.fingerprints();
  for (const auto& [name, fp] : fingerprints_) {
    auto it = current.find(name);
    if (it == current.end() || it->second != fp)
      throw ConfigError("resource '" + name + "' differs from the one the model was trained with");
  }
}

// ---------------------------------------------------------------------------
// Serialization

json HybridModel::to_json() const {
  json channels = json::array();
  for (const auto& c : channels_)
    channels.push_back({{"name", c.name},
                        {"uses_bf", c.uses_bf},
                        {"uses_af", c.uses_af},
                        {"model", c.model.to_json()}});
  json vocab = nullptr;
  if (vocab_) {
    json roles = json::array();
    for (Role r : vocab_->roles()) roles.push_back(role_name(r));
    vocab = {{"k", vocab_->k()}, {"roles", roles}, {"words", vocab_->words()}};
  }
  json bf_names = json::array();
  for (const char* n : kBFNames) bf_names.push_back(n);
  return {{"format", "rolecast-model"},
          {"version", kModelVersion},
          {"bf_version", kBFVersion},
          {"bf_names", std::move(bf_names)},
          {"config", config_.to_json()},
          {"fingerprints", fingerprints_},
          {"bf_columns", bf_columns_},
          {"brightness_fill", brightness_fill_},
          {"vocabulary", std::move(vocab)},
          {"channels", std::move(channels)},
          {"image", use_image_ ? image_.to_json() : json(nullptr)},
          {"final", final_.to_json()}};
}

HybridModel HybridModel::from_json(const json& j, ExternalProbs external) {
  try {
    if (j.at("format") != "rolecast-model") throw DataError("not a rolecast model file");
    if (j.at("version").get<int>() != kModelVersion || j.at("bf_version").get<int>() != kBFVersion)
      throw DataError("unsupported model version");
    HybridModel m;
    m.config_ = HybridConfig::from_json(j.at("config"));
    m.fingerprints_ = j.at("fingerprints").get<std::map<std::string, std::string>>();
    m.bf_columns_ = j.at("bf_columns").get<std::vector<std::size_t>>();
    for (std::size_t c : m.bf_columns_)
      if (c >= kBFWidth) throw DataError("model references a BF column out of range");
    m.brightness_fill_ = j.at("brightness_fill").get<double>();
    if (!j.at("vocabulary").is_null()) {
      const auto& v = j.at("vocabulary");
      std::vector<Role> roles;
      for (const auto& r : v.at("roles")) {
        auto role = parse_role(r.get<std::string>());
        if (!role) throw DataError("unknown role in vocabulary");
        roles.push_back(*role);
      }
      m.vocab_ = KTopVocabulary(v.at("k").get<std::size_t>(), std::move(roles),
                                v.at("words").get<std::vector<std::string>>());
    }
    for (const auto& c : j.at("channels")) {
      FeatureChannel fc{c.at("name").get<std::string>(), c.at("uses_bf").get<bool>(),
                        c.at("uses_af").get<bool>(), Classifier::from_json(c.at("model"))};
      if (fc.uses_af && !m.vocab_) throw DataError("AF channel without a vocabulary");
      m.channels_.push_back(std::move(fc));
    }
    m.use_image_ = !j.at("image").is_null();
    if (m.use_image_) m.image_ = ImageProbSource::from_json(j.at("image"), std::move(external));
    m.final_ = Classifier::from_json(j.at("final"));
    if (m.final_.n_features() != m.final_width())
      throw DataError("final model width does not match its channels");
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace rolecast

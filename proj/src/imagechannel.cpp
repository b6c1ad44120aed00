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

#include "rolecast/imagechannel.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rolecast/common.hpp"
#include "rolecast/util.hpp"

namespace rolecast {

using nlohmann::json;

ExternalProbs parse_external_probs(const std::vector<std::string>& lines,
                                   const std::string& source) {
  ExternalProbs out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::istringstream in(lines[i]);
    std::string id;
    if (!(in >> id) || id.front() == '#') continue;
    std::vector<double> p;
    for (std::string tok; in >> tok;) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
        throw DataError(source + ": bad probability '" + tok + "'", line_no);
      if (v < 0.0) throw DataError(source + ": negative probability for " + id, line_no);
      p.push_back(v);
    }
    if (p.size() != 2 && p.size() != 3)
      throw DataError(source + ": expected 2 or 3 probabilities for " + id, line_no);
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (sum < 0.99 || sum > 1.01)
      throw DataError(source + ": probabilities for " + id + " sum to " + std::to_string(sum),
                      line_no);
    for (double& v : p) v /= sum;
    if (!out.emplace(id, std::move(p)).second)
      throw DataError(source + ": duplicate user " + id, line_no);
  }
  return out;
}

ExternalProbs load_external_probs(const std::filesystem::path& path) {
  return parse_external_probs(read_lines(path), path.string());
}

std::vector<double> fit_to_classes(const std::vector<double>& probs, std::size_t n_classes) {
  if (probs.size() == n_classes) return probs;
  if (probs.size() < n_classes)
    throw ConfigError("image probabilities have " + std::to_string(probs.size()) +
                      " columns but " + std::to_string(n_classes) + " classes are needed");
  std::vector<double> out(probs.begin(), probs.begin() + static_cast<std::ptrdiff_t>(n_classes));
  const double sum = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v = sum > 0.0 ? v / sum : 1.0 / static_cast<double>(n_classes);
  return out;
}

ImageStats image_stat_vector(const Raster& image) {
  const std::size_t n = image.pixels();
  if (n == 0) throw DataError("image has no pixels");
  ImageStats out{};
  out[0] = image_brightness(image);
  for (std::size_t c = 0; c < 3; ++c) {
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t v = image.rgb[3 * i + c];
      sum += v;
      sum_sq += v * v;
    }
    const double nn = static_cast<double>(n);
    const double mean = static_cast<double>(sum) / nn;
    const double var = std::max(static_cast<double>(sum_sq) / nn - mean * mean, 0.0);
    out[1 + 2 * c] = mean / 255.0;
    out[2 + 2 * c] = std::sqrt(var) / 255.0;
  }
  return out;
}

std::string_view image_mode_name(ImageMode m) {
  switch (m) {
    case ImageMode::External: return "external";
    case ImageMode::Fallback: return "fallback";
    case ImageMode::Uniform: return "uniform";
  }
  return "?";
}

ImageMode parse_image_mode(std::string_view s) {
  if (s == "external") return ImageMode::External;
  if (s == "fallback") return ImageMode::Fallback;
  if (s == "uniform") return ImageMode::Uniform;
  throw ConfigError("unknown image mode '" + std::string(s) +
                    "' (expected external|fallback|uniform)");
}

ImageProbSource ImageProbSource::uniform(std::size_t n_classes) {
  ImageProbSource s;
  s.mode_ = ImageMode::Uniform;
  s.n_classes_ = n_classes;
  return s;
}

ImageProbSource ImageProbSource::external(ExternalProbs probs, std::size_t n_classes) {
  ImageProbSource s;
  s.mode_ = ImageMode::External;
  s.n_classes_ = n_classes;
  for (auto& [id, p] : probs) p = fit_to_classes(p, n_classes);
  s.external_ = std::move(probs);
  return s;
}

ImageProbSource ImageProbSource::fallback(Classifier model, std::optional<ImageStats> fill) {
  if (model.n_features() != kImageStatWidth)
    throw std::invalid_argument("image model must take the 7 image statistics");
  ImageProbSource s;
  s.mode_ = ImageMode::Fallback;
  s.n_classes_ = model.n_classes();
  s.model_ = std::move(model);
  s.fill_ = fill;
  return s;
}

ChannelProbs ImageProbSource::channel_probs(const ImageInput& user) const {
  const std::vector<double> flat(n_classes_, 1.0 / static_cast<double>(n_classes_));
  switch (mode_) {
    case ImageMode::Uniform:
      return {flat, false};
    case ImageMode::External: {
      if (auto it = external_.find(user.user_id); it != external_.end()) return {it->second, false};
      if (user.inline_probs) return {fit_to_classes(*user.inline_probs, n_classes_), false};
      return {flat, true};
    }
    case ImageMode::Fallback: {
      if (user.stats) return {model_.predict_proba(*user.stats), false};
      if (!fill_) throw DataError("user '" + user.user_id + "' has no usable profile image");
      return {model_.predict_proba(*fill_), true};
    }
  }
  return {flat, true};
}

json ImageProbSource::to_json() const {
  json j{{"mode", image_mode_name(mode_)}, {"n_classes", n_classes_}};
  if (mode_ == ImageMode::Fallback) {
    j["model"] = model_.to_json();
    j["fill"] = fill_ ? json(*fill_) : json(nullptr);
  }
  return j;
}

ImageProbSource ImageProbSource::from_json(const json& j, ExternalProbs external) {
  const ImageMode mode = parse_image_mode(j.at("mode").get<std::string>());
  const auto n = j.at("n_classes").get<std::size_t>();
  switch (mode) {
    case ImageMode::Uniform: return uniform(n);
    case ImageMode::External: return ImageProbSource::external(std::move(external), n);
    case ImageMode::Fallback: {
      std::optional<ImageStats> fill;
      if (!j.at("fill").is_null()) fill = j.at("fill").get<ImageStats>();
      return fallback(Classifier::from_json(j.at("model")), fill);
    }
  }
  throw DataError("bad image source");
}

}  // namespace rolecast

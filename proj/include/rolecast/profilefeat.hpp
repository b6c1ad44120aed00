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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rolecast/corpus.hpp"

namespace rolecast {

// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;

  std::size_t pixels() const { return width * height; }
  static Raster filled(std::size_t w, std::size_t h, std::uint8_t r, std::uint8_t g,
                       std::uint8_t b);
};

// Decodes PNG or JPEG (sniffed from the file header). Alpha is composited
// over white. Throws DataError on unreadable or undecodable files.
Raster decode_image(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Raster& image);

struct ProfileFeatures {
  double fp_desc = 0.0;
  std::size_t tf_desc = 0;
  double tff = 0.0;
  double brightness = 0.0;
};

// Drops whitespace-separated tokens that are hashtags, mentions or URLs.
std::string strip_entities(std::string_view text);

// 1 if the description uses a first-person word and no brand word, -1 for
// the reverse, 0 otherwise.
double description_first_person_score(std::string_view description, const WordList& first,
                                      const WordList& brand);

// Tokens left after removing hashtags, mentions and URLs.
std::size_t description_term_count(std::string_view description);

// ln((followers^2 + 1) / (friends + 1)).
double tff_score(std::int64_t followers, std::int64_t friends);

// Mean HSV value, max(R,G,B)/255, over all pixels.
double image_brightness(const Raster& image);

}  // namespace rolecast

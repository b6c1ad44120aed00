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

#include "rolecast/profilefeat.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "rolecast/tweetfeat.hpp"
#include "rolecast/util.hpp"

namespace rolecast {

Raster Raster::filled(std::size_t w, std::size_t h, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b) {
  Raster out{w, h, std::vector<std::uint8_t>(w * h * 3)};
  for (std::size_t i = 0; i < w * h; ++i) {
    out.rgb[3 * i] = r;
    out.rgb[3 * i + 1] = g;
    out.rgb[3 * i + 2] = b;
  }
  return out;
}

namespace {

Raster decode_png(const std::string& bytes, const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw DataError("cannot decode PNG " + name + ": " + image.message);
  image.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    png_image_free(&image);
    throw DataError("cannot decode PNG " + name + ": " + image.message);
  }
  Raster out{image.width, image.height, std::vector<std::uint8_t>(std::size_t{image.width} * image.height * 3)};
  for (std::size_t i = 0; i < out.pixels(); ++i) {
    const unsigned a = rgba[4 * i + 3];
    for (std::size_t c = 0; c < 3; ++c) {
      // Composite over white.
      const unsigned v = rgba[4 * i + c];
      out.rgb[3 * i + c] = static_cast<std::uint8_t>((v * a + 255u * (255u - a) + 127u) / 255u);
    }
  }
  return out;
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Kept free of C++ objects with destructors because of longjmp.
bool decode_jpeg_raw(const std::string& bytes, Raster& out, char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    std::strncpy(message, err.message, JMSG_LENGTH_MAX);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, reinterpret_cast<const unsigned char*>(bytes.data()),
               static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  out.width = cinfo.output_width;
  out.height = cinfo.output_height;
  out.rgb.resize(out.width * out.height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out.rgb.data() + std::size_t{cinfo.output_scanline} * out.width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

}  // namespace

Raster decode_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open image " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Raster out;
  if (bytes.size() >= 8 && png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) == 0) {
    out = decode_png(bytes, path.string());
  } else if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xFF &&
             static_cast<unsigned char>(bytes[1]) == 0xD8) {
    char message[JMSG_LENGTH_MAX] = {0};
    if (!decode_jpeg_raw(bytes, out, message))
      throw DataError("cannot decode JPEG " + path.string() + ": " + message);
  } else {
    throw DataError("unsupported image format: " + path.string());
  }
  if (out.pixels() == 0) throw DataError("image has no pixels: " + path.string());
  return out;
}

void write_png(const std::filesystem::path& path, const Raster& image) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.string().c_str(), 0, image.rgb.data(), 0, nullptr))
    throw ConfigError("cannot write PNG " + path.string() + ": " + png.message);
}

std::string strip_entities(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    const std::string_view tok = text.substr(pos, end - pos);
    pos = end;
    if (tok.empty() || tok[0] == '#' || tok[0] == '@') continue;
    const std::string lc = to_lower(tok);
    if (lc.find("://") != std::string::npos || lc.rfind("www.", 0) == 0) continue;
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

double description_first_person_score(std::string_view description, const WordList& first,
                                      const WordList& brand) {
  bool has_first = false;
  bool has_brand = false;
  for (const auto& t : tokenize_tweet(description)) {
    has_first = has_first || first.contains(t);
    has_brand = has_brand || brand.contains(t);
  }
  if (has_first && !has_brand) return 1.0;
  if (has_brand && !has_first) return -1.0;
  return 0.0;
}

std::size_t description_term_count(std::string_view description) {
  return tokenize_tweet(strip_entities(description)).size();
}

double tff_score(std::int64_t followers, std::int64_t friends) {
  if (followers < 0 || friends < 0) throw std::invalid_argument("counts must be non-negative");
  const auto f = static_cast<double>(followers);
  return std::log((f * f + 1.0) / (static_cast<double>(friends) + 1.0));
}

double image_brightness(const Raster& image) {
  if (image.pixels() == 0) throw DataError("image has no pixels");
  double sum = 0.0;
  for (std::size_t i = 0; i < image.pixels(); ++i) {
    const auto* p = &image.rgb[3 * i];
    sum += std::max({p[0], p[1], p[2]});
  }
  return sum / (255.0 * static_cast<double>(image.pixels()));
}

}  // namespace rolecast

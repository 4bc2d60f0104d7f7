// Copyright 2026 The garment3d Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace garment {

/// Interleaved 8-bit raster, row 0 at the top.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::uint8_t& at(int x, int y, int c = 0) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::span<std::uint8_t> pixel(int x, int y) {
    return {&at(x, y), static_cast<std::size_t>(channels_)};
  }
  std::span<const std::uint8_t> pixel(int x, int y) const {
    return {data_.data() + (static_cast<std::size_t>(y) * width_ + x) * channels_,
            static_cast<std::size_t>(channels_)};
  }

  std::span<std::uint8_t> data() { return data_; }
  std::span<const std::uint8_t> data() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Reads a PNG. `channels` selects the decoded layout (1 gray, 3 RGB, 4 RGBA);
/// 0 keeps the file's own layout (palette files decode to RGB/RGBA).
Image read_png(const std::filesystem::path& path, int channels = 0);

/// Writes an 8-bit PNG with the image's channel count (1, 3 or 4).
void write_png(const std::filesystem::path& path, const Image& image);

/// Bilinear sample at continuous pixel coordinates (pixel centers at integers),
/// clamped to the border. Writes `channels()` values into `out`.
void sample_bilinear(const Image& image, double x, double y, std::span<double> out);

}  // namespace garment

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
#include <span>
#include <vector>

namespace garment {

/// Exact squared Euclidean distance to the nearest site on a pixel grid,
/// with the index (y * width + x) of that site. Pixels with no site at all
/// get distance +inf and index -1.
struct DistanceField {
  int width = 0;
  int height = 0;
  std::vector<double> squared;
  std::vector<std::int64_t> nearest;
};

/// Separable lower-envelope transform (Felzenszwalb and Huttenlocher).
/// `is_site` holds width * height flags.
DistanceField distance_transform(std::span<const std::uint8_t> is_site, int width, int height);

}  // namespace garment

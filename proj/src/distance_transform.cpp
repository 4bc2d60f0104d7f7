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

#include "garment/distance_transform.hpp"

#include <limits>

#include "garment/error.hpp"

namespace garment {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D lower envelope of parabolas rooted at (q, f[q]); writes squared distances
// and the arg-min sample for every position.
void envelope_1d(std::span<const double> f, std::span<double> d, std::span<int> arg,
                 std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s = 0.0;
    while (true) {
      const int r = v[k];
      s = ((f[q] + double(q) * q) - (f[r] + double(r) * r)) / (2.0 * (q - r));
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    if (s <= z[k]) {
      // k == 0 and the new parabola dominates everywhere.
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) {
      d[q] = kInf;
      arg[q] = -1;
    }
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = q - v[j];
    d[q] = dq * dq + f[v[j]];
    arg[q] = v[j];
  }
}

}  // namespace

DistanceField distance_transform(std::span<const std::uint8_t> is_site, int width, int height) {
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (is_site.size() != count) throw InvalidArgument("distance transform size mismatch");
  DistanceField out{width, height, std::vector<double>(count, kInf),
                    std::vector<std::int64_t>(count, -1)};

  // Columns: distance to the nearest site in the same column.
  std::vector<double> col_d(count);
  std::vector<int> col_row(count);
  {
    std::vector<double> f(height);
    std::vector<double> d(height);
    std::vector<int> arg(height);
    std::vector<int> v(height + 1);
    std::vector<double> z(height + 2);
    for (int x = 0; x < width; ++x) {
      for (int y = 0; y < height; ++y) {
        f[y] = is_site[static_cast<std::size_t>(y) * width + x] ? 0.0 : kInf;
      }
      envelope_1d(f, d, arg, v, z);
      for (int y = 0; y < height; ++y) {
        col_d[static_cast<std::size_t>(y) * width + x] = d[y];
        col_row[static_cast<std::size_t>(y) * width + x] = arg[y];
      }
    }
  }
  // Rows: combine column results.
  std::vector<double> d(width);
  std::vector<int> arg(width);
  std::vector<int> v(width + 1);
  std::vector<double> z(width + 2);
  for (int y = 0; y < height; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * width;
    std::span<const double> f(col_d.data() + row, static_cast<std::size_t>(width));
    envelope_1d(f, d, arg, v, z);
    for (int x = 0; x < width; ++x) {
      out.squared[row + x] = d[x];
      if (arg[x] >= 0) {
        const int sx = arg[x];
        const int sy = col_row[row + sx];
        out.nearest[row + x] = static_cast<std::int64_t>(sy) * width + sx;
      }
    }
  }
  return out;
}

}  // namespace garment

// Copyright 2026 The dpf Authors
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


#ifndef DPF_GRID_DIST_HPP
#define DPF_GRID_DIST_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include "dpf/errors.hpp"
#include "dpf/world.hpp"

namespace dpf {

/// Probability masses over the free cells of one map, indexed by free index.
class GridDist {
 public:
  /// All-zero masses over `map`; fill then normalize.
  explicit GridDist(const GridMap& map) : masses_(map.free_count(), 0.0), fingerprint_(map.fingerprint()) {}

  static GridDist uniform(const GridMap& map) {
    GridDist d(map);
    std::fill(d.masses_.begin(), d.masses_.end(), 1.0 / static_cast<double>(map.free_count()));
    return d;
  }

  static GridDist point(const GridMap& map, Cell c) {
    const int i = map.free_index(c);
    if (i < 0) {
      throw DomainError("point mass on non-free cell " + to_string(c));
    }
    GridDist d(map);
    d.masses_[static_cast<std::size_t>(i)] = 1.0;
    return d;
  }

  /// Uniform over a set of free cells.
  static GridDist uniform_over(const GridMap& map, std::span<const Cell> region) {
    if (region.empty()) {
      throw ValidationError("uniform distribution over an empty region");
    }
    GridDist d(map);
    for (const Cell& c : region) {
      const int i = map.free_index(c);
      if (i < 0) {
        throw ValidationError("region contains non-free cell " + to_string(c));
      }
      d.masses_[static_cast<std::size_t>(i)] += 1.0;
    }
    d.normalize();
    return d;
  }

  [[nodiscard]] std::size_t size() const noexcept { return masses_.size(); }
  [[nodiscard]] std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  double& operator[](std::size_t i) { return masses_[i]; }
  double operator[](std::size_t i) const { return masses_[i]; }

  [[nodiscard]] double mass(const GridMap& map, Cell c) const {
    check_map(map);
    const int i = map.free_index(c);
    return i < 0 ? 0.0 : masses_[static_cast<std::size_t>(i)];
  }

  [[nodiscard]] std::span<const double> masses() const noexcept { return masses_; }
  [[nodiscard]] std::span<double> masses() noexcept { return masses_; }

  [[nodiscard]] double total() const { return std::accumulate(masses_.begin(), masses_.end(), 0.0); }

  /// Rescales to unit total; returns the previous total.
  double normalize() {
    const double z = total();
    if (z > 0.0) {
      for (double& m : masses_) {
        m /= z;
      }
    }
    return z;
  }

  void check_map(const GridMap& map) const {
    if (map.fingerprint() != fingerprint_ || map.free_count() != masses_.size()) {
      throw DomainError("distribution defined over a different map");
    }
  }

  friend bool operator==(const GridDist&, const GridDist&) = default;

  [[nodiscard]] bool same_support(const GridDist& other) const noexcept {
    return fingerprint_ == other.fingerprint_ && masses_.size() == other.masses_.size();
  }

 private:
  std::vector<double> masses_;
  std::uint64_t fingerprint_;
};

/// Writes `x,y,mass` rows (with header) for every free cell.
inline void write_csv(std::ostream& out, const GridMap& map, const GridDist& dist) {
  dist.check_map(map);
  out << "x,y,mass\n";
  const auto& cells = map.free_cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out << cells[i].x << ',' << cells[i].y << ',' << dist[i] << '\n';
  }
}

}  // namespace dpf

#endif

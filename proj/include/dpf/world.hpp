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


#ifndef DPF_WORLD_HPP
#define DPF_WORLD_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dpf/errors.hpp"
#include "dpf/random.hpp"

namespace dpf {

/// A grid cell; y = 0 is the first text row of the map.
struct Cell {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

inline std::string to_string(Cell c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

/// Immutable occupancy grid.
class GridMap {
 public:
  /// Parses the ASCII map format: '.' free, '#' blocked, one text line per row.
  /**
   * Trailing carriage returns and a final newline are accepted. Rows must all have
   * the same length and at least one cell must be free.
   */
  static GridMap parse(std::string_view text) {
    std::vector<std::string_view> rows;
    while (!text.empty()) {
      const auto eol = text.find('\n');
      auto row = text.substr(0, eol);
      if (!row.empty() && row.back() == '\r') {
        row.remove_suffix(1);
      }
      rows.push_back(row);
      if (eol == std::string_view::npos) {
        break;
      }
      text.remove_prefix(eol + 1);
    }
    while (!rows.empty() && rows.back().empty()) {
      rows.pop_back();
    }
    if (rows.empty() || rows.front().empty()) {
      throw FormatError("map is empty");
    }

    GridMap map;
    map.width_ = static_cast<int>(rows.front().size());
    map.height_ = static_cast<int>(rows.size());
    map.blocked_.reserve(static_cast<std::size_t>(map.width_) * static_cast<std::size_t>(map.height_));
    for (std::size_t y = 0; y < rows.size(); ++y) {
      if (static_cast<int>(rows[y].size()) != map.width_) {
        throw FormatError("map is not rectangular: row " + std::to_string(y) + " has " +
                          std::to_string(rows[y].size()) + " cells, expected " + std::to_string(map.width_));
      }
      for (std::size_t x = 0; x < rows[y].size(); ++x) {
        const char ch = rows[y][x];
        if (ch != '.' && ch != '#') {
          throw FormatError("unknown map character '" + std::string(1, ch) + "' at " +
                            to_string(Cell{static_cast<int>(x), static_cast<int>(y)}));
        }
        map.blocked_.push_back(ch == '#' ? 1 : 0);
      }
    }
    map.index_free_cells();
    if (map.free_cells_.empty()) {
      throw ValidationError("map has no free cell");
    }
    return map;
  }

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }

  [[nodiscard]] bool in_bounds(Cell c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }

  /// True iff `c` is inside the map and not blocked.
  [[nodiscard]] bool is_free(Cell c) const noexcept { return in_bounds(c) && blocked_[offset(c)] == 0; }

  [[nodiscard]] std::size_t free_count() const noexcept { return free_cells_.size(); }

  /// Free cells in row-major order; position in this list is the cell's free index.
  [[nodiscard]] const std::vector<Cell>& free_cells() const noexcept { return free_cells_; }

  /// Dense index of a free cell, or -1 for blocked/out-of-bounds cells.
  [[nodiscard]] int free_index(Cell c) const noexcept { return in_bounds(c) ? free_index_[offset(c)] : -1; }

  /// Hash of dimensions and occupancy; distributions over different maps never compare equal.
  [[nodiscard]] std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  [[nodiscard]] std::string to_text() const {
    std::string out;
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        out.push_back(blocked_[offset(Cell{x, y})] != 0 ? '#' : '.');
      }
      out.push_back('\n');
    }
    return out;
  }

  friend bool operator==(const GridMap& a, const GridMap& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.blocked_ == b.blocked_;
  }

 private:
  GridMap() = default;

  [[nodiscard]] std::size_t offset(Cell c) const noexcept {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.x);
  }

  void index_free_cells() {
    free_index_.assign(blocked_.size(), -1);
    std::uint64_t h = mix64(static_cast<std::uint64_t>(width_) << 32 | static_cast<std::uint64_t>(height_));
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        const Cell c{x, y};
        h = mix64(h ^ blocked_[offset(c)]);
        if (blocked_[offset(c)] == 0) {
          free_index_[offset(c)] = static_cast<int>(free_cells_.size());
          free_cells_.push_back(c);
        }
      }
    }
    fingerprint_ = h;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> blocked_;
  std::vector<int> free_index_;
  std::vector<Cell> free_cells_;
  std::uint64_t fingerprint_ = 0;
};

/// Parses an ASCII map document (see GridMap::parse).
inline GridMap load_map(std::string_view text) { return GridMap::parse(text); }

enum class Heading { kNorth, kEast, kSouth, kWest };

/// Field of view of a sensor: everything in range, or the half-plane ahead of the heading.
enum class Fov { kFull, kFrontalHalf };

struct AgentPose {
  Cell cell;
  Heading heading = Heading::kNorth;

  friend constexpr bool operator==(const AgentPose&, const AgentPose&) = default;
};

/// Unit step of a heading in grid coordinates (north is -y).
constexpr Cell heading_offset(Heading h) noexcept {
  switch (h) {
    case Heading::kNorth:
      return {0, -1};
    case Heading::kEast:
      return {1, 0};
    case Heading::kSouth:
      return {0, 1};
    case Heading::kWest:
      return {-1, 0};
  }
  return {0, 0};
}

/// Target motion: stay with probability p_stay, else try one of the four axis moves uniformly.
struct MotionParams {
  double p_stay = 0.2;

  void validate() const {
    if (!(p_stay >= 0.0 && p_stay <= 1.0)) {
      throw ValidationError("motion.p_stay must lie in [0, 1]");
    }
  }
};

/// The five outcomes of the motion kernel from one cell: stay, N, E, S, W.
/**
 * Moves into blocked or out-of-bounds cells are reported as `from`, so entries may repeat.
 */
struct KernelRow {
  std::array<Cell, 5> to;
  std::array<double, 5> prob;
};

inline KernelRow kernel_row(const GridMap& map, const MotionParams& params, Cell from) {
  if (!map.is_free(from)) {
    throw DomainError("motion kernel evaluated from non-free cell " + to_string(from));
  }
  const double move = (1.0 - params.p_stay) / 4.0;
  KernelRow row{};
  row.to[0] = from;
  row.prob[0] = params.p_stay;
  constexpr std::array kMoves{Heading::kNorth, Heading::kEast, Heading::kSouth, Heading::kWest};
  for (std::size_t k = 0; k < kMoves.size(); ++k) {
    const Cell d = heading_offset(kMoves[k]);
    const Cell next{from.x + d.x, from.y + d.y};
    row.to[k + 1] = map.is_free(next) ? next : from;
    row.prob[k + 1] = move;
  }
  return row;
}

/// Probability that the target moves from `from` to `to` in one step.
inline double transition_prob(const GridMap& map, const MotionParams& params, Cell from, Cell to) {
  const KernelRow row = kernel_row(map, params, from);
  double p = 0.0;
  for (std::size_t k = 0; k < row.to.size(); ++k) {
    if (row.to[k] == to) {
      p += row.prob[k];
    }
  }
  return p;
}

/// Samples the next target cell with a single uniform draw.
inline Cell step_target(const GridMap& map, const MotionParams& params, Cell state, Rng& rng) {
  const KernelRow row = kernel_row(map, params, state);
  const double u = uniform01(rng);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < row.to.size(); ++k) {
    cumulative += row.prob[k];
    if (u < cumulative) {
      return row.to[k];
    }
  }
  // u landed in the rounding slack above the last cumulative sum.
  for (std::size_t k = row.to.size(); k-- > 0;) {
    if (row.prob[k] > 0.0) {
      return row.to[k];
    }
  }
  return state;
}

/// True iff every cell of the discrete line between `a` and `b` is free.
/**
 * The line is traced with Bresenham's algorithm, always from the lexicographically smaller
 * endpoint, so that `line_of_sight(a, b) == line_of_sight(b, a)`.
 */
inline bool line_of_sight(const GridMap& map, Cell a, Cell b) {
  if (b < a) {
    std::swap(a, b);
  }
  const int dx = std::abs(b.x - a.x);
  const int dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  Cell c = a;
  while (true) {
    if (!map.is_free(c)) {
      return false;
    }
    if (c == b) {
      return true;
    }
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      c.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      c.y += sy;
    }
  }
}

/// Free cells within Chebyshev distance `max_range` that have a clear line of sight from the pose.
/**
 * Returns the cells sorted by `Cell` ordering. With `Fov::kFrontalHalf` only cells whose offset
 * has a nonnegative component along the heading are kept (the pose cell always qualifies).
 */
inline std::vector<Cell> visible_cells(const GridMap& map, const AgentPose& pose, int max_range, Fov fov) {
  if (!map.is_free(pose.cell)) {
    throw DomainError("sensor pose on non-free cell " + to_string(pose.cell));
  }
  if (max_range < 0) {
    throw DomainError("max_range must be nonnegative");
  }
  const Cell h = heading_offset(pose.heading);
  const int range_x = std::min(max_range, map.width());
  const int range_y = std::min(max_range, map.height());
  std::vector<Cell> out;
  for (int x = std::max(0, pose.cell.x - range_x); x <= std::min(map.width() - 1, pose.cell.x + range_x); ++x) {
    for (int y = std::max(0, pose.cell.y - range_y); y <= std::min(map.height() - 1, pose.cell.y + range_y); ++y) {
      const Cell c{x, y};
      if (!map.is_free(c)) {
        continue;
      }
      if (fov == Fov::kFrontalHalf && (c.x - pose.cell.x) * h.x + (c.y - pose.cell.y) * h.y < 0) {
        continue;
      }
      if (line_of_sight(map, pose.cell, c)) {
        out.push_back(c);
      }
    }
  }
  return out;
}

}  // namespace dpf

#endif

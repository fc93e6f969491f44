#pragma once

#include <vector>

#include "iel/types.hpp"

namespace iel {

/// Uniform partition of a box into axis-aligned cells, row-major indexed.
/// Cells are half-open except at the upper box face, which is closed.
class GridPartition {
 public:
  GridPartition(Box box, std::vector<Index> cells_per_axis);
  static GridPartition uniform(Box box, Index resolution);

  int dim() const { return static_cast<int>(counts_.size()); }
  Index size() const { return total_; }
  const Box& box() const { return box_; }
  const std::vector<Index>& counts() const { return counts_; }

  Vec widths() const { return widths_; }
  double max_width() const;
  double diagonal() const { return widths_.norm(); }

  /// Cell containing x, or -1 outside the box.
  Index locate(const Vec& x) const;
  Vec center(Index cell) const;
  Box cell_bounds(Index cell) const;

  std::vector<Index> to_multi(Index cell) const;
  Index from_multi(const std::vector<Index>& mi) const;

  /// Cells whose closure meets the Euclidean ball of given radius around y.
  /// radius 0 degenerates to the containing cell.
  std::vector<Index> cells_near(const Vec& y, double radius) const;

  /// Cell sample points: the center, optionally followed by the 2^d corners.
  /// count <= 1 gives the center only; anything larger gives center+corners.
  std::vector<Vec> cell_samples(Index cell, int count) const;

 private:
  Box box_;
  std::vector<Index> counts_;
  std::vector<Index> strides_;
  Vec widths_;
  Index total_ = 0;
};

}  // namespace iel

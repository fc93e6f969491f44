#pragma once

#include <string>
#include <vector>

#include "iel/grid.hpp"
#include "iel/types.hpp"

namespace iel {

enum class CellTag { plain, reachable, control_set, chain_control_set };

/// Sorted set of grid cell indices.
struct CellSet {
  std::vector<Index> cells;  // sorted, unique
  CellTag tag = CellTag::plain;

  bool empty() const { return cells.empty(); }
  std::size_t size() const { return cells.size(); }
  bool contains(Index c) const;
  void normalize();  // sort + unique

  static CellSet from_cells(std::vector<Index> cells, CellTag tag = CellTag::plain);
  /// All cells whose center lies in [lo, hi].
  static CellSet from_box(const GridPartition& grid, const Vec& lo, const Vec& hi,
                          CellTag tag = CellTag::plain);
};

/// O(1) membership mask for a cell set.
class CellMask {
 public:
  CellMask() = default;
  CellMask(const CellSet& set, Index grid_size);
  bool contains(Index c) const { return c >= 0 && c < static_cast<Index>(bits_.size()) && bits_[c]; }

 private:
  std::vector<char> bits_;
};

/// Chebyshev-1 dilation/erosion on the grid (used for Q inflation and the
/// default K = D eroded by one cell).
CellSet dilate(const CellSet& set, const GridPartition& grid, int layers);
CellSet erode(const CellSet& set, const GridPartition& grid, int layers);

std::size_t overlap_count(const CellSet& a, const CellSet& b);

/// sup_{a in A} dist(a, B) over cell centers (Euclidean).
double one_sided_deviation(const CellSet& a, const CellSet& b, const GridPartition& grid);
/// max of the two one-sided deviations.
double hausdorff_distance(const CellSet& a, const CellSet& b, const GridPartition& grid);

namespace serial_ref {
double one_sided_deviation(const CellSet& a, const CellSet& b, const GridPartition& grid);
double hausdorff_distance(const CellSet& a, const CellSet& b, const GridPartition& grid);
}  // namespace serial_ref

}  // namespace iel

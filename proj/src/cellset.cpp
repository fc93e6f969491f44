#include "iel/cellset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iel/errors.hpp"

namespace iel {

bool CellSet::contains(Index c) const {
  return std::binary_search(cells.begin(), cells.end(), c);
}

void CellSet::normalize() {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

CellSet CellSet::from_cells(std::vector<Index> cells, CellTag tag) {
  CellSet s;
  s.cells = std::move(cells);
  s.tag = tag;
  s.normalize();
  return s;
}

CellSet CellSet::from_box(const GridPartition& grid, const Vec& lo, const Vec& hi, CellTag tag) {
  CellSet s;
  s.tag = tag;
  for (Index c = 0; c < grid.size(); ++c) {
    const Vec ctr = grid.center(c);
    bool in = true;
    for (int i = 0; i < grid.dim() && in; ++i) in = ctr[i] >= lo[i] && ctr[i] <= hi[i];
    if (in) s.cells.push_back(c);
  }
  return s;
}

CellMask::CellMask(const CellSet& set, Index grid_size) : bits_(grid_size, 0) {
  for (Index c : set.cells) {
    if (c >= 0 && c < grid_size) bits_[c] = 1;
  }
}

namespace {

// visits the Chebyshev-1 neighborhood of a cell, including the cell itself
template <class F>
void for_each_neighbor(const GridPartition& grid, Index cell, F&& fn) {
  const int d = grid.dim();
  std::vector<Index> mi = grid.to_multi(cell);
  std::vector<Index> off(d, -1);
  while (true) {
    std::vector<Index> nb(d);
    bool ok = true;
    for (int i = 0; i < d && ok; ++i) {
      nb[i] = mi[i] + off[i];
      ok = nb[i] >= 0 && nb[i] < grid.counts()[i];
    }
    if (ok) fn(grid.from_multi(nb));
    int axis = 0;
    while (axis < d) {
      if (++off[axis] <= 1) break;
      off[axis] = -1;
      ++axis;
    }
    if (axis == d) break;
  }
}

}  // namespace

CellSet dilate(const CellSet& set, const GridPartition& grid, int layers) {
  CellSet out = set;
  for (int l = 0; l < layers; ++l) {
    std::vector<Index> grown = out.cells;
    for (Index c : out.cells)
      for_each_neighbor(grid, c, [&](Index nb) { grown.push_back(nb); });
    out.cells = std::move(grown);
    out.normalize();
  }
  return out;
}

CellSet erode(const CellSet& set, const GridPartition& grid, int layers) {
  CellSet out = set;
  for (int l = 0; l < layers; ++l) {
    CellMask mask(out, grid.size());
    std::vector<Index> kept;
    for (Index c : out.cells) {
      bool interior = true;
      for_each_neighbor(grid, c, [&](Index nb) { interior = interior && mask.contains(nb); });
      // cells touching the box boundary have fewer neighbors; treat the
      // outside as missing so the erosion shrinks there too
      std::vector<Index> mi = grid.to_multi(c);
      for (int i = 0; i < grid.dim(); ++i)
        if (mi[i] == 0 || mi[i] == grid.counts()[i] - 1) interior = false;
      if (interior) kept.push_back(c);
    }
    out.cells = std::move(kept);
  }
  return out;
}

std::size_t overlap_count(const CellSet& a, const CellSet& b) {
  std::size_t n = 0;
  auto ia = a.cells.begin();
  auto ib = b.cells.begin();
  while (ia != a.cells.end() && ib != b.cells.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else { ++n; ++ia; ++ib; }
  }
  return n;
}

namespace {

double deviation_impl(const CellSet& a, const CellSet& b, const GridPartition& grid,
                      bool parallel) {
  if (a.empty() || b.empty()) throw EmptyInput("one_sided_deviation: empty cell set");
  std::vector<Vec> bc(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) bc[j] = grid.center(b.cells[j]);
  const auto n = static_cast<std::int64_t>(a.size());
  double worst = 0.0;
#ifdef IEL_HAVE_OPENMP
#pragma omp parallel for reduction(max : worst) schedule(static) if (parallel && n > 256)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    const Vec pa = grid.center(a.cells[i]);
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& pb : bc) best = std::min(best, (pa - pb).squaredNorm());
    worst = std::max(worst, best);
  }
  (void)parallel;
  return std::sqrt(worst);
}

}  // namespace

double one_sided_deviation(const CellSet& a, const CellSet& b, const GridPartition& grid) {
  return deviation_impl(a, b, grid, true);
}

double hausdorff_distance(const CellSet& a, const CellSet& b, const GridPartition& grid) {
  return std::max(one_sided_deviation(a, b, grid), one_sided_deviation(b, a, grid));
}

namespace serial_ref {

// plain double loop kept as the reference for the parallel reduction
double one_sided_deviation(const CellSet& a, const CellSet& b, const GridPartition& grid) {
  if (a.empty() || b.empty()) throw EmptyInput("one_sided_deviation: empty cell set");
  double worst = 0.0;
  for (Index ca : a.cells) {
    const Vec pa = grid.center(ca);
    double best = std::numeric_limits<double>::infinity();
    for (Index cb : b.cells) best = std::min(best, (pa - grid.center(cb)).squaredNorm());
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

double hausdorff_distance(const CellSet& a, const CellSet& b, const GridPartition& grid) {
  return std::max(serial_ref::one_sided_deviation(a, b, grid),
                  serial_ref::one_sided_deviation(b, a, grid));
}

}  // namespace serial_ref

}  // namespace iel

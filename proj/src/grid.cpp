#include "iel/grid.hpp"

#include <algorithm>
#include <cmath>

#include "iel/errors.hpp"

namespace iel {

GridPartition::GridPartition(Box box, std::vector<Index> cells_per_axis)
    : box_(std::move(box)), counts_(std::move(cells_per_axis)) {
  if (static_cast<int>(counts_.size()) != box_.dim())
    throw DomainError("GridPartition: axis count mismatch");
  total_ = 1;
  strides_.resize(counts_.size());
  for (int i = 0; i < dim(); ++i) {
    if (counts_[i] < 1) throw DomainError("GridPartition: cell counts must be >= 1");
    strides_[i] = total_;
    total_ *= counts_[i];
  }
  widths_ = box_.widths();
  for (int i = 0; i < dim(); ++i) widths_[i] /= static_cast<double>(counts_[i]);
}

GridPartition GridPartition::uniform(Box box, Index resolution) {
  std::vector<Index> counts(box.dim(), resolution);
  return GridPartition(std::move(box), std::move(counts));
}

double GridPartition::max_width() const { return widths_.maxCoeff(); }

Index GridPartition::locate(const Vec& x) const {
  Index cell = 0;
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < box_.lo[i] || x[i] > box_.hi[i]) return -1;
    Index k = static_cast<Index>(std::floor((x[i] - box_.lo[i]) / widths_[i]));
    if (k >= counts_[i]) k = counts_[i] - 1;  // closed upper face
    if (k < 0) k = 0;
    cell += k * strides_[i];
  }
  return cell;
}

std::vector<Index> GridPartition::to_multi(Index cell) const {
  std::vector<Index> mi(dim());
  for (int i = 0; i < dim(); ++i) {
    mi[i] = (cell / strides_[i]) % counts_[i];
  }
  return mi;
}

Index GridPartition::from_multi(const std::vector<Index>& mi) const {
  Index cell = 0;
  for (int i = 0; i < dim(); ++i) cell += mi[i] * strides_[i];
  return cell;
}

Vec GridPartition::center(Index cell) const {
  Vec c(dim());
  for (int i = 0; i < dim(); ++i) {
    const Index k = (cell / strides_[i]) % counts_[i];
    c[i] = box_.lo[i] + (static_cast<double>(k) + 0.5) * widths_[i];
  }
  return c;
}

Box GridPartition::cell_bounds(Index cell) const {
  Box b;
  b.lo.resize(dim());
  b.hi.resize(dim());
  for (int i = 0; i < dim(); ++i) {
    const Index k = (cell / strides_[i]) % counts_[i];
    b.lo[i] = box_.lo[i] + static_cast<double>(k) * widths_[i];
    b.hi[i] = box_.lo[i] + static_cast<double>(k + 1) * widths_[i];
  }
  return b;
}

std::vector<Index> GridPartition::cells_near(const Vec& y, double radius) const {
  std::vector<Index> out;
  if (radius <= 0.0) {
    const Index c = locate(y);
    if (c >= 0) out.push_back(c);
    return out;
  }
  // bounding range per axis, then an exact point-to-cell distance filter
  std::vector<Index> lo(dim()), hi(dim());
  for (int i = 0; i < dim(); ++i) {
    double a = y[i] - radius, b = y[i] + radius;
    if (b < box_.lo[i] || a > box_.hi[i]) return out;
    Index ka = static_cast<Index>(std::floor((a - box_.lo[i]) / widths_[i]));
    Index kb = static_cast<Index>(std::floor((b - box_.lo[i]) / widths_[i]));
    lo[i] = std::clamp<Index>(ka, 0, counts_[i] - 1);
    hi[i] = std::clamp<Index>(kb, 0, counts_[i] - 1);
  }
  std::vector<Index> mi = lo;
  const double r2 = radius * radius;
  while (true) {
    // squared distance from y to the candidate cell
    double d2 = 0.0;
    for (int i = 0; i < dim(); ++i) {
      const double clo = box_.lo[i] + static_cast<double>(mi[i]) * widths_[i];
      const double chi = clo + widths_[i];
      double d = 0.0;
      if (y[i] < clo) d = clo - y[i];
      else if (y[i] > chi) d = y[i] - chi;
      d2 += d * d;
    }
    if (d2 <= r2) out.push_back(from_multi(mi));
    int axis = 0;
    while (axis < dim()) {
      if (++mi[axis] <= hi[axis]) break;
      mi[axis] = lo[axis];
      ++axis;
    }
    if (axis == dim()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vec> GridPartition::cell_samples(Index cell, int count) const {
  std::vector<Vec> out;
  out.push_back(center(cell));
  if (count <= 1) return out;
  const Box b = cell_bounds(cell);
  const Index corners = Index{1} << dim();
  for (Index code = 0; code < corners; ++code) {
    Vec p(dim());
    for (int i = 0; i < dim(); ++i) p[i] = (code >> i) & 1 ? b.hi[i] : b.lo[i];
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace iel

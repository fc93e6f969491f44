#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace iel {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = std::int64_t;

inline constexpr const char* kVersion = "1.0.0";

/// Axis-aligned compact box; the working region standing in for the state space.
struct Box {
  Vec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  Vec center() const { return 0.5 * (lo + hi); }
  Vec widths() const { return hi - lo; }
  double diameter() const { return (hi - lo).norm(); }

  /// Membership in the box inflated about its center by the given factor.
  bool contains(const Vec& x, double inflation = 1.0) const {
    const Vec c = center();
    const Vec h = 0.5 * inflation * widths();
    for (int i = 0; i < dim(); ++i) {
      if (x[i] < c[i] - h[i] || x[i] > c[i] + h[i]) return false;
    }
    return true;
  }
};

}  // namespace iel

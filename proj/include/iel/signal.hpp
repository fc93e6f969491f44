#pragma once

#include <vector>

#include "iel/types.hpp"

namespace iel {

/// Piecewise-constant control signal: value values_[j] on [breaks_[j], breaks_[j+1]).
/// A periodic signal repeats its whole domain with period duration().
class ControlSignal {
 public:
  ControlSignal() = default;
  ControlSignal(std::vector<double> breakpoints, std::vector<Vec> values, bool periodic = false);

  static ControlSignal constant(Vec value, double duration, bool periodic = false);
  /// One piece of length dwell per entry of values.
  static ControlSignal steps(const std::vector<Vec>& values, double dwell, bool periodic = false);

  bool empty() const { return values_.empty(); }
  std::size_t pieces() const { return values_.size(); }
  double duration() const { return values_.empty() ? 0.0 : breaks_.back(); }
  bool periodic() const { return periodic_; }
  void set_periodic(bool p) { periodic_ = p; }
  int dim() const { return values_.empty() ? 0 : static_cast<int>(values_.front().size()); }

  double piece_begin(std::size_t j) const { return breaks_[j]; }
  double piece_end(std::size_t j) const { return breaks_[j + 1]; }
  const Vec& piece_value(std::size_t j) const { return values_[j]; }

  /// Pointwise sample; periodic signals wrap, finite signals are closed at duration().
  const Vec& value_at(double t) const;

 private:
  std::vector<double> breaks_;  // size pieces()+1, breaks_[0] == 0
  std::vector<Vec> values_;
  bool periodic_ = false;
};

/// (u1 u2)(t) = u1(t) on [0, T1), u2(t - T1) afterwards.
ControlSignal signal_concat(const ControlSignal& a, const ControlSignal& b);
/// n-fold concatenation of u with itself.
ControlSignal signal_repeat(const ControlSignal& u, int n);
/// shift(u, t)(s) = u(t + s); finite signals lose [0, t), periodic ones wrap.
ControlSignal signal_shift(const ControlSignal& u, double t);

}  // namespace iel

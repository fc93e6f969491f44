#include "iel/signal.hpp"

#include <algorithm>
#include <cmath>

#include "iel/errors.hpp"

namespace iel {

ControlSignal::ControlSignal(std::vector<double> breakpoints, std::vector<Vec> values,
                             bool periodic)
    : breaks_(std::move(breakpoints)), values_(std::move(values)), periodic_(periodic) {
  if (breaks_.size() != values_.size() + 1)
    throw DomainError("ControlSignal: breakpoints must be one longer than values");
  if (!breaks_.empty() && breaks_.front() != 0.0)
    throw DomainError("ControlSignal: first breakpoint must be 0");
  for (std::size_t j = 0; j + 1 < breaks_.size(); ++j) {
    if (!(breaks_[j + 1] > breaks_[j]))
      throw DomainError("ControlSignal: piece durations must be positive");
  }
  for (std::size_t j = 1; j < values_.size(); ++j) {
    if (values_[j].size() != values_[0].size())
      throw DomainError("ControlSignal: inconsistent value dimensions");
  }
}

ControlSignal ControlSignal::constant(Vec value, double duration, bool periodic) {
  if (!(duration > 0)) throw DomainError("ControlSignal::constant: duration must be positive");
  return ControlSignal({0.0, duration}, {std::move(value)}, periodic);
}

ControlSignal ControlSignal::steps(const std::vector<Vec>& values, double dwell, bool periodic) {
  if (!(dwell > 0)) throw DomainError("ControlSignal::steps: dwell must be positive");
  std::vector<double> breaks(values.size() + 1);
  for (std::size_t j = 0; j < breaks.size(); ++j) breaks[j] = static_cast<double>(j) * dwell;
  return ControlSignal(std::move(breaks), values, periodic);
}

const Vec& ControlSignal::value_at(double t) const {
  if (values_.empty()) throw DomainError("ControlSignal::value_at: empty signal");
  double tt = t;
  const double T = duration();
  if (periodic_) {
    tt = std::fmod(tt, T);
    if (tt < 0) tt += T;
  } else if (t < 0 || t > T) {
    throw DomainError("ControlSignal::value_at: time outside signal domain");
  }
  // closed at the right end for finite signals
  if (tt >= T) return values_.back();
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), tt);
  std::size_t j = static_cast<std::size_t>(it - breaks_.begin());
  if (j == 0) j = 1;
  return values_[j - 1];
}

ControlSignal signal_concat(const ControlSignal& a, const ControlSignal& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.dim() != b.dim()) throw DomainError("signal_concat: dimension mismatch");
  const double off = a.duration();
  std::vector<double> breaks;
  std::vector<Vec> values;
  breaks.reserve(a.pieces() + b.pieces() + 1);
  values.reserve(a.pieces() + b.pieces());
  breaks.push_back(0.0);
  for (std::size_t j = 0; j < a.pieces(); ++j) {
    breaks.push_back(a.piece_end(j));
    values.push_back(a.piece_value(j));
  }
  for (std::size_t j = 0; j < b.pieces(); ++j) {
    breaks.push_back(off + b.piece_end(j));
    values.push_back(b.piece_value(j));
  }
  return ControlSignal(std::move(breaks), std::move(values), false);
}

ControlSignal signal_repeat(const ControlSignal& u, int n) {
  if (n < 1) throw DomainError("signal_repeat: count must be >= 1");
  ControlSignal out = u;
  out.set_periodic(false);
  for (int i = 1; i < n; ++i) out = signal_concat(out, u);
  out.set_periodic(u.periodic());
  return out;
}

ControlSignal signal_shift(const ControlSignal& u, double t) {
  if (u.empty()) throw DomainError("signal_shift: empty signal");
  if (t == 0.0) return u;
  const double T = u.duration();
  double off = t;
  if (u.periodic()) {
    off = std::fmod(off, T);
    if (off < 0) off += T;
    if (off == 0.0) return u;
  } else if (t < 0 || t >= T) {
    throw DomainError("signal_shift: shift outside the domain of a finite signal");
  }
  std::vector<double> breaks{0.0};
  std::vector<Vec> values;
  for (std::size_t j = 0; j < u.pieces(); ++j) {
    const double e = u.piece_end(j);
    if (e <= off) continue;
    breaks.push_back(e - off);
    values.push_back(u.piece_value(j));
  }
  if (u.periodic()) {
    // wrap the cut-off head to the tail so the period is preserved
    for (std::size_t j = 0; j < u.pieces(); ++j) {
      const double b = u.piece_begin(j);
      if (b >= off) break;
      const double e = std::min(u.piece_end(j), off);
      breaks.push_back((T - off) + e);
      values.push_back(u.piece_value(j));
    }
  }
  return ControlSignal(std::move(breaks), std::move(values), u.periodic());
}

}  // namespace iel

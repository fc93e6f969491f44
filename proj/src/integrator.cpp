#include "iel/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "iel/errors.hpp"

namespace iel {
namespace detail {

void rk4_step(const ControlSystem& sys, const Vec& u, double h, Vec& x,
              ControlSystem::Workspace& ws) {
  static thread_local Vec k1, k2, k3, k4, xs;
  sys.rhs(x, u, k1, ws);
  xs = x + (0.5 * h) * k1;
  sys.rhs(xs, u, k2, ws);
  xs = x + (0.5 * h) * k2;
  sys.rhs(xs, u, k3, ws);
  xs = x + h * k3;
  sys.rhs(xs, u, k4, ws);
  x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void rk4_step_var(const ControlSystem& sys, const Vec& u, double h, Vec& x, Mat& Y,
                  ControlSystem::Workspace& ws) {
  static thread_local Vec k1, k2, k3, k4, xs;
  static thread_local Mat K1, K2, K3, K4, J;
  sys.rhs(x, u, k1, ws);
  sys.jacobian(x, u, J, ws);
  K1.noalias() = J * Y;
  xs = x + (0.5 * h) * k1;
  sys.rhs(xs, u, k2, ws);
  sys.jacobian(xs, u, J, ws);
  K2.noalias() = J * (Y + (0.5 * h) * K1);
  xs = x + (0.5 * h) * k2;
  sys.rhs(xs, u, k3, ws);
  sys.jacobian(xs, u, J, ws);
  K3.noalias() = J * (Y + (0.5 * h) * K2);
  xs = x + h * k3;
  sys.rhs(xs, u, k4, ws);
  sys.jacobian(xs, u, J, ws);
  K4.noalias() = J * (Y + h * K3);
  x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  Y += (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
}

void for_each_interval(const ControlSignal& u, double horizon, double step,
                       const std::vector<double>& extra,
                       const std::function<void(double, double, const Vec&)>& visit) {
  if (u.empty()) throw DomainError("for_each_interval: empty control signal");
  if (!(horizon > 0)) return;
  const double T = u.duration();
  if (!u.periodic() && horizon > T * (1.0 + 1e-12) && horizon > T + 1e-12)
    throw DomainError("control signal shorter than the integration horizon");

  const double tiny = 1e-13 * std::max(1.0, horizon);
  std::size_t next_extra = 0;

  // piece-by-piece over the (possibly wrapped) signal
  double offset = 0.0;
  bool done = false;
  while (!done) {
    for (std::size_t j = 0; j < u.pieces() && !done; ++j) {
      double a = offset + u.piece_begin(j);
      double b = offset + u.piece_end(j);
      if (b > horizon) {
        b = horizon;
        done = true;
      }
      if (b - a <= tiny) continue;
      const Vec& v = u.piece_value(j);

      // cut points inside (a, b): query extras and the global k*step grid
      double t0 = a;
      auto emit_to = [&](double t1) {
        if (t1 - t0 > tiny) visit(t0, t1, v);
        t0 = t1;
      };
      while (true) {
        double next_cut = b;
        while (next_extra < extra.size() && extra[next_extra] <= t0 + tiny) ++next_extra;
        if (next_extra < extra.size() && extra[next_extra] < next_cut - tiny)
          next_cut = extra[next_extra];
        const double k = std::floor(t0 / step) + 1.0;
        double grid = k * step;
        if (grid <= t0 + tiny) grid += step;
        if (grid < next_cut - tiny) next_cut = grid;
        emit_to(next_cut);
        if (next_cut >= b - tiny) break;
      }
    }
    offset += T;
    if (offset >= horizon - tiny) done = true;
  }
}

}  // namespace detail

namespace {

void check_signal(const ControlSystem& sys, const ControlSignal& u) {
  if (u.empty()) return;
  if (u.dim() != sys.input_dim())
    throw DomainError("control signal dimension does not match the system input dimension");
  for (std::size_t j = 0; j < u.pieces(); ++j) {
    if (!sys.control_range().contains(u.piece_value(j)))
      throw DomainError("control signal value outside the control range");
  }
}

}  // namespace

Trajectory integrate(const ControlSystem& sys, const Vec& x0, const ControlSignal& u,
                     double horizon, const IntegrateOptions& opts) {
  if (!(horizon >= 0)) throw DomainError("integrate: horizon must be >= 0");
  if (!(opts.step > 0)) throw DomainError("integrate: step must be positive");
  if (x0.size() != sys.state_dim()) throw InvalidDim("integrate: x0 dimension mismatch");
  check_signal(sys, u);

  Trajectory tr;
  tr.signal = u;
  tr.times.push_back(0.0);
  tr.states.push_back(x0);
  if (opts.with_variation)
    tr.fundamental.push_back(Mat::Identity(sys.state_dim(), sys.state_dim()));
  if (horizon == 0.0) return tr;

  ControlSystem::Workspace ws;
  Vec x = x0;
  Mat Y;
  if (opts.with_variation) Y = Mat::Identity(sys.state_dim(), sys.state_dim());

  detail::for_each_interval(u, horizon, opts.step, {}, [&](double, double t1, const Vec& v) {
    const double h = t1 - tr.times.back();
    if (opts.with_variation)
      detail::rk4_step_var(sys, v, h, x, Y, ws);
    else
      detail::rk4_step(sys, v, h, x, ws);
    if (!x.allFinite()) throw NonFinite("integrate: state became non-finite at t=" + std::to_string(t1));
    if (!sys.state_box().contains(x, opts.box_inflation))
      throw StateEscaped("integrate: state left the inflated working box at t=" + std::to_string(t1));
    tr.times.push_back(t1);
    tr.states.push_back(x);
    if (opts.with_variation) tr.fundamental.push_back(Y);
  });
  return tr;
}

Mat variational_flow(const ControlSystem& sys, const Vec& x0, const ControlSignal& u, double t,
                     const IntegrateOptions& opts) {
  IntegrateOptions o = opts;
  o.with_variation = true;
  if (t == 0.0) return Mat::Identity(sys.state_dim(), sys.state_dim());
  Trajectory tr = integrate(sys, x0, u, t, o);
  return tr.fundamental.back();
}

}  // namespace iel

#pragma once

#include <vector>

#include "iel/signal.hpp"
#include "iel/system.hpp"
#include "iel/types.hpp"

namespace iel {

struct IntegrateOptions {
  double step = 1e-2;          // fixed RK4 step, snapped to signal breakpoints
  double box_inflation = 2.0;  // StateEscaped outside the inflated state box
  bool with_variation = false; // co-integrate the fundamental matrix
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Mat> fundamental;  // empty unless with_variation
  ControlSignal signal;

  const Vec& back() const { return states.back(); }
  std::size_t size() const { return states.size(); }
};

/// Samples of the solution on the uniform step grid united with all signal
/// breakpoints. Classical fixed-step RK4 on each subinterval (the control is
/// constant there). Throws StateEscaped / NonFinite / DomainError.
Trajectory integrate(const ControlSystem& sys, const Vec& x0, const ControlSignal& u,
                     double horizon, const IntegrateOptions& opts = {});

/// Fundamental matrix D(t) solving Ddot = J(t) D, D(0) = I, co-integrated with
/// the state. Stable for moderate t; spectra use the rescaled sweep instead.
Mat variational_flow(const ControlSystem& sys, const Vec& x0, const ControlSignal& u, double t,
                     const IntegrateOptions& opts = {});

namespace detail {

/// Walks [0, horizon] split at signal breakpoints and at the global k*step
/// grid; visit(t0, t1, value) is called per subinterval in order. extra points
/// are inserted into the grid (used for query times).
void for_each_interval(const ControlSignal& u, double horizon, double step,
                       const std::vector<double>& extra,
                       const std::function<void(double, double, const Vec&)>& visit);

/// One RK4 step for the state only.
void rk4_step(const ControlSystem& sys, const Vec& u, double h, Vec& x,
              ControlSystem::Workspace& ws);

/// One RK4 step for the joint (state, fundamental matrix) system.
void rk4_step_var(const ControlSystem& sys, const Vec& u, double h, Vec& x, Mat& Y,
                  ControlSystem::Workspace& ws);

}  // namespace detail

}  // namespace iel

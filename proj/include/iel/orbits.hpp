#pragma once

#include <optional>
#include <vector>

#include "iel/cocycles.hpp"
#include "iel/signal.hpp"
#include "iel/system.hpp"
#include "iel/types.hpp"

namespace iel {

/// Controlled periodic orbit: x0 with a periodic signal whose period map
/// returns to x0 up to the closure defect.
struct PeriodicOrbit {
  Vec x0;
  ControlSignal u;  // periodic, period = u.duration()
  double period = 0.0;
  double closure_defect = 0.0;
  int letter = -1;  // set for equilibrium orbits from a constant letter
};

struct OrbitOptions {
  double closure_tol_factor = 1e-6;  // tolerance = factor * diam(state_box)
  int max_newton = 60;
  double step = 1e-2;
  double box_inflation = 2.0;
};

/// Equilibrium orbits of constant letters: damped Newton on
/// f_0(x) + sum letter_i f_i(x) = 0 from each seed; deduplicated per letter.
std::vector<PeriodicOrbit> equilibrium_orbits(const ControlSystem& sys, double period,
                                              const std::vector<Vec>& seeds,
                                              const OrbitOptions& opts = {});

/// Single-shooting refinement of a periodic letter sequence from an initial
/// guess; nullopt when Newton fails to close the orbit.
std::optional<PeriodicOrbit> refine_cycle_orbit(const ControlSystem& sys,
                                                const std::vector<int>& letters, double dwell,
                                                const Vec& x_guess, const OrbitOptions& opts = {});

struct FloquetWhich {
  enum Kind { gamma, kappa } kind = gamma;
  int unstable_dim = -1;  // gamma only; -1 = count of |eigenvalue| > 1
};

struct FloquetOptions {
  CocycleOptions cocycle;
  double closure_tol_factor = 1e-6;
  int kappa_max_repeats = 16;  // inf over n of kappa_{n tau} / (n tau)
  double fekete_slack = 1e-8;
};

/// gamma: (1/tau) sum of the top-k log |eigenvalues| of the monodromy matrix
/// (the unstable determinant over one period). kappa: inf over n <= 16 of
/// kappa_{n tau} / (n tau) with a Fekete monotonicity check.
double floquet_exponent(const ControlSystem& sys, const PeriodicOrbit& orbit, FloquetWhich which,
                        const FloquetOptions& opts = {});

}  // namespace iel

#pragma once

#include <vector>

#include "iel/signal.hpp"
#include "iel/system.hpp"
#include "iel/types.hpp"

namespace iel {

struct CocycleOptions {
  double step = 1e-2;
  double box_inflation = 2.0;
  double reorth_interval = 0.5;   // QR sweep cadence in time units
  double reorth_threshold = 1e6;  // or whenever the running factor exceeds this
};

struct VariationalSample {
  double t = 0;
  std::vector<double> log_sv;  // log singular values of dphi_t, descending
  Mat frame;                   // orthonormal columns from the QR filtration
  Vec state;
};

/// log singular values of the fundamental matrix at each query time (sorted
/// ascending times), computed in one pass with QR reorthonormalization and
/// scalar rescaling so arbitrarily long horizons stay representable.
std::vector<VariationalSample> variational_sweep(const ControlSystem& sys, const Vec& x0,
                                                 const ControlSignal& u,
                                                 std::vector<double> query_times,
                                                 const CocycleOptions& opts = {});

/// gamma_t = log of the product of the top-k singular values of dphi_t.
double gamma_cocycle(const ControlSystem& sys, const Vec& x, const ControlSignal& u, double t,
                     int unstable_dim, const CocycleOptions& opts = {});

/// kappa_t = log^+ of the operator norm of the induced map on the full
/// exterior algebra = sum of the positive log singular values.
double kappa_cocycle(const ControlSystem& sys, const Vec& x, const ControlSignal& u, double t,
                     const CocycleOptions& opts = {});

struct SplittingOptions {
  CocycleOptions cocycle;
  double delta_gap = 0.05;       // hyperbolicity margin around zero
  double sample_interval = 0.5;  // envelope sampling cadence
};

struct HyperbolicSplittingEstimate {
  int unstable_dim = 0;
  std::vector<double> exponents;  // finite-time Lyapunov exponents, descending
  double lambda = 0.0;            // uniform rate
  double c = 1.0;                 // envelope constant in (0, 1]
  bool hyperbolic = false;
  double delta_gap = 0.05;
  double horizon = 0.0;
  struct Sample {
    double t;
    Mat basis;  // orthonormal; first unstable_dim columns span E+, rest E-
  };
  std::vector<Sample> samples;
};

/// QR/Oseledets-style filtration along one trajectory. Never throws on a
/// numerically violated gap; the hyperbolic flag marks trust instead.
HyperbolicSplittingEstimate estimate_splitting(const ControlSystem& sys, const Vec& x,
                                               const ControlSignal& u, double horizon,
                                               const SplittingOptions& opts = {});

}  // namespace iel

#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "iel/pipeline.hpp"
#include "iel/spanning.hpp"
#include "iel/types.hpp"

namespace iel {

struct SweepConfig {
  std::vector<double> alpha_grid;  // sorted; one swept scalar parameter
  int reference_index = -1;        // -1 = middle of the grid
  PipelineOptions pipeline;
  bool with_spanning = false;
  std::vector<double> tau_list;    // spanning horizons when enabled
  SpanningOptions spanning;
  double reconcile_tolerance = 0.35;
};

struct AlphaResult {
  double alpha = 0.0;
  std::string status = "ok";
  CellSet control_set, chain_set;
  int unstable_dim = 0;
  double lambda = 0.0, c = 1.0;
  bool hyperbolic = false;
  double h_spectral = std::numeric_limits<double>::quiet_NaN();
  double h_spectral_hi = std::numeric_limits<double>::quiet_NaN();
  double h_spanning = std::numeric_limits<double>::quiet_NaN();  // Fekete bound
  double d_hausdorff_to_ref = std::numeric_limits<double>::quiet_NaN();
  double dev_to_ref = std::numeric_limits<double>::quiet_NaN();    // sup dist(D_alpha, D_ref)
  double dev_from_ref = std::numeric_limits<double>::quiet_NaN();  // sup dist(D_ref, D_alpha)
  CycleWitness lo_witness;
};

struct SweepReport {
  std::vector<double> alpha_grid;
  int reference_index = 0;
  std::vector<AlphaResult> rows;
};

/// Full pipeline per grid point over a shared spatial grid; per-alpha
/// failures are recorded, not thrown. Throws ReferenceFailed if the
/// designated reference parameter itself fails.
SweepReport sweep(const std::function<ControlSystem(double)>& family, const GridPartition& grid,
                  const SweepConfig& cfg);

struct ContinuityDiagnostics {
  double hausdorff_modulus = 0.0;  // max over adjacent alphas of d_H / |dalpha|
  double entropy_modulus = 0.0;    // max over adjacent alphas of |dh| / |dalpha|
  std::vector<double> jumps;       // second differences of h at interior points
  std::vector<double> error_bars;  // per point: Morse interval width with a floor
  bool usc_pass = true;            // Morse endpoints near the reference interval
  double usc_tolerance = 0.0;
  std::string note;
};

ContinuityDiagnostics continuity_diagnostics(const SweepReport& report, double usc_tolerance,
                                             double error_bar_floor = 0.01);

}  // namespace iel

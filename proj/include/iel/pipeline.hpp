#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "iel/cocycles.hpp"
#include "iel/graph.hpp"
#include "iel/orbits.hpp"
#include "iel/spectrum.hpp"
#include "iel/system.hpp"
#include "iel/types.hpp"

namespace iel {

struct PipelineOptions {
  TransitionGraphOptions graph;      // epsilon ignored; set via chain_epsilon
  double chain_epsilon = -1.0;       // -1 = 1.5 x cell diagonal
  SplittingOptions splitting;
  double splitting_horizon = 20.0;
  double orbit_period = 1.0;
  int max_orbit_seeds = 16;
  CycleRatioMethod cycle_method = CycleRatioMethod::automatic;
  std::optional<Vec> reference_point;  // component selection; default: largest
};

/// One full per-system analysis: exact graph -> control sets, fattened graph
/// -> chain control sets, splitting along an equilibrium orbit inside the
/// selected component, Morse interval of gamma at the detected unstable
/// dimension. Failures are recorded in status instead of thrown so sweeps
/// stay local.
struct PipelineResult {
  std::string status = "ok";  // ok | empty_control_sets | empty_chain_sets |
                              // no_orbit | non_hyperbolic
  std::vector<CellSet> all_control_sets;
  std::vector<CellSet> all_chain_sets;
  CellSet control_set;  // selected component
  CellSet chain_set;    // matching chain component
  HyperbolicSplittingEstimate splitting;
  std::optional<PeriodicOrbit> orbit;
  SpectrumEstimate gamma_bounds;
  SpectrumEstimate kappa_bounds;
  double h_spectral = std::numeric_limits<double>::quiet_NaN();

  bool ok() const { return status == "ok"; }
};

PipelineResult analyze_system(const ControlSystem& sys, const GridPartition& grid,
                              const PipelineOptions& opts,
                              const CellSet* match_reference = nullptr);

/// Largest component, or the one containing the reference point, or the one
/// with maximal overlap with the reference cells.
int select_component(const std::vector<CellSet>& components, const GridPartition& grid,
                     const std::optional<Vec>& reference_point, const CellSet* reference_cells);

}  // namespace iel

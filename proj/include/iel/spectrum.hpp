#pragma once

#include <string>
#include <vector>

#include "iel/cellset.hpp"
#include "iel/cycle_ratio.hpp"
#include "iel/graph.hpp"
#include "iel/types.hpp"

namespace iel {

enum class CocycleWeight { gamma, kappa };

/// Replayable cycle witness: (cell, letter) per leg, dwell per leg.
struct CycleWitness {
  std::vector<Index> cells;
  std::vector<int> letters;
  double sum_weight = 0.0;
  double sum_duration = 0.0;
  double ratio() const { return sum_weight / sum_duration; }
};

/// Interval summary [lo, hi] of a cocycle spectrum in nats per unit time.
struct SpectrumEstimate {
  double lo = 0.0, hi = 0.0;
  std::string method;       // cycle_ratio:<solver> or floquet_sampling
  double epsilon = 0.0;     // graph fattening the estimate came from
  double dwell = 0.0;
  int unstable_dim = 0;     // for gamma weights
  CycleWitness lo_witness, hi_witness;
};

/// Morse spectrum bounds over one SCC of the transition graph: minimum and
/// maximum cycle ratio of (cocycle weight)/(duration). Periodic chains in the
/// fattened graph are exactly its directed cycles.
SpectrumEstimate morse_spectrum_bounds(const TransitionGraph& graph, const CellSet& component,
                                       CocycleWeight weight, int unstable_dim = 0,
                                       CycleRatioMethod method = CycleRatioMethod::automatic);

/// Re-evaluates a witness against the graph (same summation order); used to
/// check that stored witnesses reproduce lo/hi.
double reevaluate_witness(const TransitionGraph& graph, const CycleWitness& witness,
                          CocycleWeight weight, int unstable_dim = 0);

}  // namespace iel

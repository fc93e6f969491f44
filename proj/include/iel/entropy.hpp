#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iel/cocycles.hpp"
#include "iel/graph.hpp"
#include "iel/spectrum.hpp"
#include "iel/types.hpp"

namespace iel {

/// Spanning-set counts over a list of horizons and the fitted entropy rate.
struct EntropyEstimate {
  std::vector<double> taus;
  std::vector<std::int64_t> counts;
  double h_fit = 0.0;     // least-squares slope of log r(tau) vs tau
  double h_fekete = 0.0;  // min over tau of log r(tau) / tau (principled upper estimate)
  bool greedy_upper_bound = true;  // counts came from greedy covers
  std::string method = "spanning";
};

/// Fit from (tau, count) pairs; requires at least three horizons.
EntropyEstimate entropy_from_counts(const std::vector<std::pair<double, std::int64_t>>& counts);

/// Spectral value: infimum of the gamma Morse spectrum over the component at
/// the splitting's unstable dimension. Throws UntrustedSplitting when the
/// splitting is not hyperbolic.
double h_inv_spectral(const TransitionGraph& graph, const CellSet& component,
                      const HyperbolicSplittingEstimate& splitting,
                      CycleRatioMethod method = CycleRatioMethod::automatic);

struct ReconcileReport {
  double spanning_upper = 0.0;  // Fekete bound from the spanning route
  double spectral = 0.0;
  double gap = 0.0;             // spanning_upper - spectral
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

/// Consistency check between the two routes: the spectral value must not
/// exceed the spanning upper estimate by more than the tolerance.
ReconcileReport reconcile(const EntropyEstimate& spanning, double spectral, double tolerance);

}  // namespace iel

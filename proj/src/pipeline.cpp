#include "iel/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "iel/errors.hpp"
#include "iel/log.hpp"

namespace iel {

int select_component(const std::vector<CellSet>& components, const GridPartition& grid,
                     const std::optional<Vec>& reference_point, const CellSet* reference_cells) {
  if (components.empty()) return -1;
  if (reference_cells && !reference_cells->empty()) {
    std::size_t best_overlap = 0;
    int best = -1;
    for (std::size_t i = 0; i < components.size(); ++i) {
      const std::size_t ov = overlap_count(components[i], *reference_cells);
      if (ov > best_overlap) {
        best_overlap = ov;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) return best;
  }
  if (reference_point) {
    const Index cell = grid.locate(*reference_point);
    for (std::size_t i = 0; i < components.size(); ++i)
      if (components[i].contains(cell)) return static_cast<int>(i);
  }
  int best = 0;
  for (std::size_t i = 1; i < components.size(); ++i)
    if (components[i].size() > components[best].size()) best = static_cast<int>(i);
  return best;
}

PipelineResult analyze_system(const ControlSystem& sys, const GridPartition& grid,
                              const PipelineOptions& opts, const CellSet* match_reference) {
  PipelineResult res;

  TransitionGraphOptions exact_opts = opts.graph;
  exact_opts.epsilon = 0.0;
  const TransitionGraph exact = build_transition_graph(sys, grid, exact_opts);
  try {
    res.all_control_sets = control_sets(exact, grid);
  } catch (const EmptyResult&) {
    res.status = "empty_control_sets";
    return res;
  }
  const int sel = select_component(res.all_control_sets, grid, opts.reference_point,
                                   match_reference);
  res.control_set = res.all_control_sets[sel];

  TransitionGraphOptions chain_opts = opts.graph;
  chain_opts.epsilon = opts.chain_epsilon >= 0 ? opts.chain_epsilon : 1.5 * grid.diagonal();
  const TransitionGraph chain = build_transition_graph(sys, grid, chain_opts);
  try {
    res.all_chain_sets = chain_control_sets(chain);
  } catch (const EmptyResult&) {
    res.status = "empty_chain_sets";
    return res;
  }
  const int csel =
      select_component(res.all_chain_sets, grid, std::nullopt, &res.control_set);
  res.chain_set = res.all_chain_sets[csel];

  // splitting along an equilibrium orbit inside the component
  std::vector<Vec> seeds;
  {
    const std::size_t stride =
        std::max<std::size_t>(1, res.control_set.size() / opts.max_orbit_seeds);
    for (std::size_t i = 0; i < res.control_set.size(); i += stride)
      seeds.push_back(grid.center(res.control_set.cells[i]));
  }
  const auto orbits = equilibrium_orbits(sys, opts.orbit_period, seeds);
  std::optional<PeriodicOrbit> chosen;
  HyperbolicSplittingEstimate split;
  const CellMask comp_mask(res.control_set, grid.size());
  for (const PeriodicOrbit& orbit : orbits) {
    if (!comp_mask.contains(grid.locate(orbit.x0))) continue;
    SplittingOptions sopts = opts.splitting;
    HyperbolicSplittingEstimate est;
    try {
      est = estimate_splitting(sys, orbit.x0, orbit.u, opts.splitting_horizon, sopts);
    } catch (const Error&) {
      continue;
    }
    if (!chosen) {
      chosen = orbit;
      split = est;
    }
    if (est.hyperbolic) {
      chosen = orbit;
      split = est;
      break;
    }
  }
  if (!chosen) {
    res.status = "no_orbit";
    return res;
  }
  res.orbit = chosen;
  res.splitting = split;
  if (!split.hyperbolic) {
    res.status = "non_hyperbolic";
    return res;
  }

  res.gamma_bounds = morse_spectrum_bounds(chain, res.chain_set, CocycleWeight::gamma,
                                           split.unstable_dim, opts.cycle_method);
  res.kappa_bounds =
      morse_spectrum_bounds(chain, res.chain_set, CocycleWeight::kappa, 0, opts.cycle_method);
  res.h_spectral = res.gamma_bounds.lo;
  return res;
}

}  // namespace iel

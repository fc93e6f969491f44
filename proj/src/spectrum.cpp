#include "iel/spectrum.hpp"

#include <algorithm>
#include <unordered_map>

#include "iel/errors.hpp"

namespace iel {

namespace {

struct Problem {
  std::vector<RatioEdge> edges;
  std::vector<Index> node_to_cell;
  int n_nodes = 0;
};

// Internal edges of the component, one RatioEdge per (group, target). With a
// uniform dwell on every edge, parallel edges between the same cell pair can
// be reduced to the extremal letter without changing any cycle ratio.
Problem make_problem(const TransitionGraph& graph, const CellSet& component, CocycleWeight weight,
                     int unstable_dim, bool keep_max) {
  Problem p;
  p.node_to_cell = component.cells;
  p.n_nodes = static_cast<int>(component.size());
  std::unordered_map<Index, int> cell_to_node;
  cell_to_node.reserve(component.size());
  for (int i = 0; i < p.n_nodes; ++i) cell_to_node[component.cells[i]] = i;

  // reduction slot per (src, dst)
  std::unordered_map<std::int64_t, std::size_t> slot;
  for (int i = 0; i < p.n_nodes; ++i) {
    const Index cell = component.cells[i];
    for (int l = 0; l < graph.num_letters(); ++l) {
      const auto& g = graph.group(cell, l);
      if (g.log_sv.empty()) continue;
      const double w = weight == CocycleWeight::gamma ? graph.weight_gamma(g, unstable_dim)
                                                      : graph.weight_kappa(g);
      for (Index t : g.targets) {
        auto it = cell_to_node.find(t);
        if (it == cell_to_node.end()) continue;
        RatioEdge e;
        e.src = i;
        e.dst = it->second;
        e.weight = w;
        e.duration = graph.dwell();
        e.cell_src = cell;
        e.cell_dst = t;
        e.letter = l;
        const std::int64_t key = static_cast<std::int64_t>(i) * p.n_nodes + it->second;
        auto s = slot.find(key);
        if (s == slot.end()) {
          slot.emplace(key, p.edges.size());
          p.edges.push_back(e);
        } else {
          RatioEdge& cur = p.edges[s->second];
          const bool better = keep_max ? e.weight > cur.weight : e.weight < cur.weight;
          if (better) cur = e;
        }
      }
    }
  }
  return p;
}

CycleWitness witness_from(const Problem& p, const RatioCycle& cycle) {
  CycleWitness w;
  for (int e : cycle.edges) {
    w.cells.push_back(p.edges[e].cell_src);
    w.letters.push_back(p.edges[e].letter);
  }
  w.sum_weight = cycle.sum_weight;
  w.sum_duration = cycle.sum_duration;
  return w;
}

double solve_min(const Problem& p, CycleRatioMethod method, RatioCycle* witness) {
  if (p.edges.empty())
    throw InternalError("morse_spectrum_bounds: component has no internal edges (NoCycle)");
  CycleRatioMethod m = method;
  if (m == CycleRatioMethod::automatic)
    m = p.n_nodes <= 12 ? CycleRatioMethod::enumeration : CycleRatioMethod::policy_iteration;
  if (m == CycleRatioMethod::enumeration)
    return min_cycle_ratio_enumerate(p.edges, p.n_nodes, witness);
  return min_cycle_ratio_howard(p.edges, p.n_nodes, witness);
}

}  // namespace

SpectrumEstimate morse_spectrum_bounds(const TransitionGraph& graph, const CellSet& component,
                                       CocycleWeight weight, int unstable_dim,
                                       CycleRatioMethod method) {
  if (component.empty()) throw EmptyInput("morse_spectrum_bounds: empty component");

  Problem pmin = make_problem(graph, component, weight, unstable_dim, /*keep_max=*/false);
  Problem pmax = make_problem(graph, component, weight, unstable_dim, /*keep_max=*/true);
  for (RatioEdge& e : pmax.edges) e.weight = -e.weight;

  RatioCycle lo_cycle, hi_cycle_neg;
  const double lo = solve_min(pmin, method, &lo_cycle);
  solve_min(pmax, method, &hi_cycle_neg);
  // re-evaluate the hi witness with the original weights, canonical order
  for (RatioEdge& e : pmax.edges) e.weight = -e.weight;
  RatioCycle hi_cycle;
  hi_cycle.edges = hi_cycle_neg.edges;
  for (int e : hi_cycle.edges) {
    hi_cycle.sum_weight += pmax.edges[e].weight;
    hi_cycle.sum_duration += pmax.edges[e].duration;
  }

  SpectrumEstimate est;
  est.lo = lo;
  est.hi = hi_cycle.ratio();
  est.method = std::string("cycle_ratio:") +
               (pmin.n_nodes <= 12 && method == CycleRatioMethod::automatic
                    ? "enumeration"
                    : method == CycleRatioMethod::enumeration ? "enumeration" : "policy_iteration");
  est.epsilon = graph.epsilon();
  est.dwell = graph.dwell();
  est.unstable_dim = unstable_dim;
  est.lo_witness = witness_from(pmin, lo_cycle);
  est.hi_witness = witness_from(pmax, hi_cycle);
  if (est.lo > est.hi) throw InternalError("morse_spectrum_bounds: lo > hi");
  return est;
}

double reevaluate_witness(const TransitionGraph& graph, const CycleWitness& witness,
                          CocycleWeight weight, int unstable_dim) {
  if (witness.cells.empty()) throw EmptyInput("reevaluate_witness: empty witness");
  double sw = 0.0, st = 0.0;
  for (std::size_t i = 0; i < witness.cells.size(); ++i) {
    const auto& g = graph.group(witness.cells[i], witness.letters[i]);
    sw += weight == CocycleWeight::gamma ? graph.weight_gamma(g, unstable_dim)
                                         : graph.weight_kappa(g);
    st += graph.dwell();
  }
  return sw / st;
}

}  // namespace iel

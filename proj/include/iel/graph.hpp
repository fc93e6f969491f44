#pragma once

#include <optional>
#include <vector>

#include "iel/cellset.hpp"
#include "iel/grid.hpp"
#include "iel/system.hpp"
#include "iel/types.hpp"

namespace iel {

struct TransitionGraphOptions {
  double dwell = 0.1;          // every edge lasts exactly this long
  double epsilon = 0.0;        // fattening radius around integrated endpoints
  int samples_per_cell = 0;    // 0 = center + corners, 1 = center only
  double step = 0.0;           // 0 = dwell / 8
  double box_inflation = 2.0;
};

/// Finite abstraction of the control flow on a grid. Nodes are cells; for
/// each (cell, letter) one group of edges is produced whose targets are the
/// cells meeting the epsilon ball around the integrated endpoint of every
/// sample point. Cocycle weights are evaluated once per group at the cell
/// center: log_sv holds the log singular values of the fundamental matrix
/// over the dwell, sorted descending.
class TransitionGraph {
 public:
  struct EdgeGroup {
    Index source = -1;
    int letter = -1;
    std::vector<double> log_sv;
    std::vector<Index> targets;  // sorted unique; empty if all samples escaped
    bool escaped = false;        // at least one sample left the working box
  };

  TransitionGraph(Index num_cells, int num_letters, double dwell, double epsilon);

  Index num_cells() const { return num_cells_; }
  int num_letters() const { return num_letters_; }
  double dwell() const { return dwell_; }
  double epsilon() const { return epsilon_; }

  const EdgeGroup& group(Index cell, int letter) const {
    return groups_[static_cast<std::size_t>(cell) * num_letters_ + letter];
  }
  EdgeGroup& group(Index cell, int letter) {
    return groups_[static_cast<std::size_t>(cell) * num_letters_ + letter];
  }
  const std::vector<EdgeGroup>& groups() const { return groups_; }

  /// Sum of the top-k log singular values (gamma weight at unstable dim k).
  double weight_gamma(const EdgeGroup& g, int k) const;
  /// Sum of the positive log singular values (kappa weight).
  double weight_kappa(const EdgeGroup& g) const;

  std::int64_t boundary_losses() const { return boundary_losses_; }
  void set_boundary_losses(std::int64_t n) { boundary_losses_ = n; }

 private:
  Index num_cells_;
  int num_letters_;
  double dwell_, epsilon_;
  std::vector<EdgeGroup> groups_;
  std::int64_t boundary_losses_ = 0;
};

/// OpenMP-parallel over (cell, letter) with a deterministic slot-per-group
/// merge; results do not depend on the thread count.
TransitionGraph build_transition_graph(const ControlSystem& sys, const GridPartition& grid,
                                       const TransitionGraphOptions& opts);

namespace serial_ref {
/// Straightforward serial construction kept as the reference for tests and
/// the benchmark.
TransitionGraph build_transition_graph(const ControlSystem& sys, const GridPartition& grid,
                                       const TransitionGraphOptions& opts);
}  // namespace serial_ref

/// Forward BFS closure within max_hops (nullopt = until stable).
CellSet reachable_set(const TransitionGraph& graph, const CellSet& start,
                      std::optional<int> max_hops);

/// Nontrivial strongly connected components (>= 2 cells or a self-loop) of
/// the exact graph; grid approximations of control sets. Requires the graph
/// fattening to be at most one cell width. Throws EmptyResult if none.
std::vector<CellSet> control_sets(const TransitionGraph& graph, const GridPartition& grid);

/// Same on an epsilon-fattened graph: approximations of chain control sets.
/// With epsilon = 0 this degenerates to control_sets.
std::vector<CellSet> chain_control_sets(const TransitionGraph& graph);

}  // namespace iel

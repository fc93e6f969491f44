#pragma once

#include <cstdint>
#include <vector>

#include "iel/cellset.hpp"
#include "iel/grid.hpp"
#include "iel/system.hpp"
#include "iel/types.hpp"

namespace iel {

enum class SpanningFlavor {
  tau_K_Q,       // (tau,K,Q): trajectories stay in the inflated Q
  tau_K_upper_Q  // (tau,K)^Q: additionally return to K at time tau
};

struct SpanningOptions {
  double dwell = 0.25;       // letter duration; tau must be a multiple
  int candidate_depth = 2000;// beam width of the lazy best-first enumeration
  int per_cell_quota = 8;    // per-cell prefixes retained besides the global beam
  int samples_per_cell = 0;  // 0 = center + corners
  double step = 0.05;
  double box_inflation = 2.0;
  SpanningFlavor flavor = SpanningFlavor::tau_K_upper_Q;
  int exact_max_cells = 20;       // exact set cover below these sizes
  int exact_max_candidates = 200;
  int max_signals = 0;  // 0 = unlimited (cover until done)
};

/// Cover of the K-cells by letter-sequence signals of duration tau.
struct SpanningSet {
  double tau = 0.0;
  double dwell = 0.0;
  SpanningFlavor flavor = SpanningFlavor::tau_K_upper_Q;
  bool exact_cover = false;  // greedy upper bound otherwise
  std::vector<std::vector<int>> signals;        // letter index sequences
  std::vector<Index> k_cells;                   // sorted
  std::vector<int> coverage;                    // per k_cell: covering signal id
  std::size_t size() const { return signals.size(); }
};

/// Greedy (or exact, on tiny instances) cover of K by candidate letter
/// sequences enumerated lazily best-first by coverage. Throws Uncoverable
/// with the offending cells when some K-cell admits no candidate.
SpanningSet build_spanning_set(const ControlSystem& sys, const GridPartition& grid,
                               const CellSet& K, const CellSet& Q, double tau,
                               const SpanningOptions& opts = {});

/// Exact minimum set cover over explicit coverage masks (n_cells <= 22);
/// returns selected candidate ids. Used behind build_spanning_set and as the
/// subadditivity check on desk-size instances.
std::vector<int> exact_min_cover(const std::vector<std::uint32_t>& masks, int n_cells);

/// Coverage mask of every letter sequence of the given length (full
/// enumeration, prefix-shared integration). Guarded to small alphabets and
/// cell counts; the exhaustive route for desk-scale oracles.
std::vector<std::uint32_t> enumerate_all_coverage(const ControlSystem& sys,
                                                  const GridPartition& grid, const CellSet& K,
                                                  const CellSet& Q, int length,
                                                  const SpanningOptions& opts);

}  // namespace iel

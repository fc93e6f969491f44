#pragma once

#include <string>
#include <vector>

#include "iel/types.hpp"

namespace iel {

/// Edge of the cycle-ratio problem. Node ids are dense 0..n-1; cell/letter
/// carry provenance for witnesses.
struct RatioEdge {
  int src = 0, dst = 0;
  double weight = 0.0;
  double duration = 1.0;
  Index cell_src = -1, cell_dst = -1;
  int letter = -1;
};

/// Directed cycle as a list of edge indices, canonically rotated so the
/// smallest source node comes first. ratio = sum(weight) / sum(duration)
/// summed in stored order, so re-evaluation reproduces it bit for bit.
struct RatioCycle {
  std::vector<int> edges;
  double sum_weight = 0.0;
  double sum_duration = 0.0;
  double ratio() const { return sum_weight / sum_duration; }
};

enum class CycleRatioMethod { automatic, policy_iteration, enumeration };

struct CycleRatioResult {
  double min_ratio = 0.0, max_ratio = 0.0;
  RatioCycle min_cycle, max_cycle;
  std::string method;
};

/// Minimum over directed cycles of sum(weight)/sum(duration); every node must
/// have at least one outgoing edge (the caller passes one SCC). Howard-style
/// policy iteration, deterministic tie-breaking.
double min_cycle_ratio_howard(const std::vector<RatioEdge>& edges, int n_nodes,
                              RatioCycle* witness);

/// Exhaustive simple-cycle enumeration (start-node-minimal DFS). Intended for
/// small graphs; throws DomainError beyond the enumeration cap.
double min_cycle_ratio_enumerate(const std::vector<RatioEdge>& edges, int n_nodes,
                                 RatioCycle* witness);

/// Both endpoints of the cycle-ratio spectrum. automatic enumerates at
/// n_nodes <= 12 and switches to policy iteration above.
CycleRatioResult cycle_ratio_bounds(const std::vector<RatioEdge>& edges, int n_nodes,
                                    CycleRatioMethod method = CycleRatioMethod::automatic);

}  // namespace iel

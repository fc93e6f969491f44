#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "iel/cellset.hpp"
#include "iel/grid.hpp"
#include "iel/spanning.hpp"
#include "iel/system.hpp"
#include "iel/types.hpp"

namespace iel {

/// Sampled-data coder-controller pair: disjoint coding regions (cell ->
/// symbol) and one open-loop control segment of duration tau per symbol.
struct CoderController {
  double tau = 0.0;
  double dwell = 0.0;
  std::vector<std::vector<int>> controls;  // symbol -> letter sequence
  std::map<Index, int> regions;            // K-cell -> symbol (disjoint by construction)

  int alphabet_size() const { return static_cast<int>(controls.size()); }
};

/// Regions from a (tau,K)^Q spanning set: cell -> smallest covering signal
/// index (overlaps cut away toward the smaller symbol).
CoderController build_coder_controller(const SpanningSet& spanning);

/// Keeps only the first m symbols and their regions; cells of dropped symbols
/// lose coding coverage. Used for converse (insufficient rate) experiments.
CoderController truncate(const CoderController& cc, int m);

struct TranscriptStep {
  int k = 0;
  Vec state;        // x_{k tau}
  int symbol = -1;  // -1 when encoding failed
  bool q_ok = true; // dense-time Q membership over [k tau, (k+1) tau]
  bool k_ok = true; // x_{(k+1) tau} lands in a K-cell
};

struct Transcript {
  std::vector<TranscriptStep> steps;
  bool pass = false;
  std::string failure;  // EncoderMiss / QViolation / KViolation / escape reasons
  double rate_bits = 0.0;  // (1/(k tau)) sum log2 |S_j|
  int steps_requested = 0;
};

struct ChannelOptions {
  double step = 0.05;
  double box_inflation = 2.0;
};

/// One closed-loop run over the digital channel. Throws InitialStateOutsideK
/// when x0 is in no coding region; later quantization misses are recorded in
/// the transcript, never masked.
Transcript simulate_networked(const ControlSystem& sys, const GridPartition& grid,
                              const CoderController& cc, const CellSet& K, const CellSet& Q,
                              const Vec& x0, int steps, const ChannelOptions& opts = {});

/// Independent sequential simulations, one per initial state.
std::vector<Transcript> batch_simulate(const ControlSystem& sys, const GridPartition& grid,
                                       const CoderController& cc, const CellSet& K,
                                       const CellSet& Q, const std::vector<Vec>& initial_states,
                                       int steps, const ChannelOptions& opts = {});

namespace serial_ref {
std::vector<Transcript> batch_simulate(const ControlSystem& sys, const GridPartition& grid,
                                       const CoderController& cc, const CellSet& K,
                                       const CellSet& Q, const std::vector<Vec>& initial_states,
                                       int steps, const ChannelOptions& opts = {});
}  // namespace serial_ref

/// Re-integrates the transcript's control choices at half step and re-checks
/// conditions (i) and (ii); true when the verdict stands.
bool replay_check(const ControlSystem& sys, const GridPartition& grid, const CoderController& cc,
                  const CellSet& K, const CellSet& Q, const Transcript& transcript,
                  const ChannelOptions& opts = {});

struct RateScanRow {
  double tau = 0.0;
  int alphabet = 0;        // smallest size with a full PASS, -1 when none
  double rate_bits = 0.0;  // (1/tau) log2(alphabet)
  bool pass = false;
  int spanning_size = 0;   // cover cardinality the scan departed from
};

struct RateScanOptions {
  SpanningOptions spanning;
  ChannelOptions channel;
  int horizon_steps = 100;
};

/// For each tau the smallest alphabet budget whose coder-controller keeps
/// every K-cell sample Q-invariant over the horizon. Throws NoPass when no
/// (tau, budget) combination succeeds.
std::vector<RateScanRow> critical_rate_scan(const ControlSystem& sys, const GridPartition& grid,
                                            const CellSet& K, const CellSet& Q,
                                            const std::vector<double>& tau_list,
                                            const std::vector<int>& budgets,
                                            const RateScanOptions& opts);

}  // namespace iel

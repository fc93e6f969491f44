#include "iel/channel.hpp"

#include <algorithm>
#include <cmath>

#include "iel/errors.hpp"
#include "iel/integrator.hpp"
#include "iel/log.hpp"

namespace iel {

CoderController build_coder_controller(const SpanningSet& spanning) {
  if (spanning.signals.empty()) throw EmptyInput("build_coder_controller: empty spanning set");
  if (spanning.flavor != SpanningFlavor::tau_K_upper_Q)
    throw DomainError("build_coder_controller: requires a (tau,K)^Q spanning set");
  CoderController cc;
  cc.tau = spanning.tau;
  cc.dwell = spanning.dwell;
  cc.controls = spanning.signals;
  for (std::size_t i = 0; i < spanning.k_cells.size(); ++i) {
    if (spanning.coverage[i] >= 0) cc.regions[spanning.k_cells[i]] = spanning.coverage[i];
  }
  return cc;
}

CoderController truncate(const CoderController& cc, int m) {
  if (m < 1) throw DomainError("truncate: alphabet size must be >= 1");
  CoderController out;
  out.tau = cc.tau;
  out.dwell = cc.dwell;
  out.controls.assign(cc.controls.begin(),
                      cc.controls.begin() + std::min<std::size_t>(m, cc.controls.size()));
  for (const auto& [cell, sym] : cc.regions)
    if (sym < static_cast<int>(out.controls.size())) out.regions[cell] = sym;
  return out;
}

namespace {

// advances one sampling period; dense-time Q membership recorded in q_ok
bool advance_period(const ControlSystem& sys, const GridPartition& grid, const CellMask& qmask,
                    const std::vector<int>& letter_seq, double dwell, const ChannelOptions& opts,
                    Vec& x, bool& q_ok, ControlSystem::Workspace& ws) {
  const auto& letters = sys.control_range().letters;
  for (int li : letter_seq) {
    const Vec& u = letters[li];
    const int n = std::max(1, static_cast<int>(std::ceil(dwell / opts.step - 1e-12)));
    const double h = dwell / n;
    for (int i = 0; i < n; ++i) {
      detail::rk4_step(sys, u, h, x, ws);
      if (!x.allFinite()) return false;
      if (!sys.state_box().contains(x, opts.box_inflation)) return false;
      if (!qmask.contains(grid.locate(x))) q_ok = false;
    }
  }
  return true;
}

}  // namespace

Transcript simulate_networked(const ControlSystem& sys, const GridPartition& grid,
                              const CoderController& cc, const CellSet& K, const CellSet& Q,
                              const Vec& x0, int steps, const ChannelOptions& opts) {
  if (steps < 1) throw DomainError("simulate_networked: steps must be >= 1");
  const CellMask qmask(dilate(Q, grid, 1), grid.size());
  const CellMask kmask(K, grid.size());

  Transcript tr;
  tr.steps_requested = steps;

  const Index c0 = grid.locate(x0);
  if (c0 < 0 || !cc.regions.count(c0))
    throw InitialStateOutsideK("simulate_networked: initial state is in no coding region");

  ControlSystem::Workspace ws;
  Vec x = x0;
  bool ok = true;
  for (int k = 0; k < steps && ok; ++k) {
    TranscriptStep st;
    st.k = k;
    st.state = x;
    const Index cell = grid.locate(x);
    auto it = cell >= 0 ? cc.regions.find(cell) : cc.regions.end();
    if (it == cc.regions.end()) {
      st.symbol = -1;
      tr.failure = "EncoderMiss at k=" + std::to_string(k);
      tr.steps.push_back(std::move(st));
      ok = false;
      break;
    }
    st.symbol = it->second;
    bool q_ok = true;
    const bool finite = advance_period(sys, grid, qmask, cc.controls[st.symbol], cc.dwell, opts,
                                       x, q_ok, ws);
    st.q_ok = q_ok && finite;
    st.k_ok = finite && kmask.contains(grid.locate(x));
    if (!finite) tr.failure = "escape at k=" + std::to_string(k);
    else if (!st.q_ok) tr.failure = "QViolation at k=" + std::to_string(k);
    else if (!st.k_ok) tr.failure = "KViolation at k=" + std::to_string(k);
    ok = finite && st.q_ok && st.k_ok;
    tr.steps.push_back(std::move(st));
  }
  tr.pass = ok && static_cast<int>(tr.steps.size()) == steps;

  // R = (1/(k tau)) sum_j log2 |S_j|; constant alphabet, grouped sum
  const int k_done = static_cast<int>(tr.steps.size());
  if (k_done > 0) {
    const double sum_bits = static_cast<double>(k_done) * std::log2(static_cast<double>(
                                std::max(1, cc.alphabet_size())));
    tr.rate_bits = sum_bits / (static_cast<double>(k_done) * cc.tau);
  }
  return tr;
}

std::vector<Transcript> batch_simulate(const ControlSystem& sys, const GridPartition& grid,
                                       const CoderController& cc, const CellSet& K,
                                       const CellSet& Q, const std::vector<Vec>& initial_states,
                                       int steps, const ChannelOptions& opts) {
  std::vector<Transcript> out(initial_states.size());
  const auto n = static_cast<std::int64_t>(initial_states.size());
#ifdef IEL_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = simulate_networked(sys, grid, cc, K, Q, initial_states[i], steps, opts);
    } catch (const InitialStateOutsideK&) {
      out[i].pass = false;
      out[i].failure = "InitialStateOutsideK";
      out[i].steps_requested = steps;
    }
  }
  return out;
}

namespace serial_ref {

std::vector<Transcript> batch_simulate(const ControlSystem& sys, const GridPartition& grid,
                                       const CoderController& cc, const CellSet& K,
                                       const CellSet& Q, const std::vector<Vec>& initial_states,
                                       int steps, const ChannelOptions& opts) {
  std::vector<Transcript> out;
  out.reserve(initial_states.size());
  for (const Vec& x0 : initial_states) {
    try {
      out.push_back(simulate_networked(sys, grid, cc, K, Q, x0, steps, opts));
    } catch (const InitialStateOutsideK&) {
      Transcript t;
      t.pass = false;
      t.failure = "InitialStateOutsideK";
      t.steps_requested = steps;
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace serial_ref

bool replay_check(const ControlSystem& sys, const GridPartition& grid, const CoderController& cc,
                  const CellSet& K, const CellSet& Q, const Transcript& transcript,
                  const ChannelOptions& opts) {
  if (transcript.steps.empty()) return !transcript.pass;
  ChannelOptions half = opts;
  half.step = opts.step * 0.5;
  const CellMask qmask(dilate(Q, grid, 1), grid.size());
  const CellMask kmask(K, grid.size());
  ControlSystem::Workspace ws;
  Vec x = transcript.steps.front().state;
  bool ok = true;
  for (const TranscriptStep& st : transcript.steps) {
    if (st.symbol < 0) {
      ok = false;
      break;
    }
    bool q_ok = true;
    const bool finite =
        advance_period(sys, grid, qmask, cc.controls[st.symbol], cc.dwell, half, x, q_ok, ws);
    if (!finite || !q_ok || !kmask.contains(grid.locate(x))) {
      ok = false;
      break;
    }
  }
  return ok == transcript.pass;
}

std::vector<RateScanRow> critical_rate_scan(const ControlSystem& sys, const GridPartition& grid,
                                            const CellSet& K, const CellSet& Q,
                                            const std::vector<double>& tau_list,
                                            const std::vector<int>& budgets,
                                            const RateScanOptions& opts) {
  if (budgets.empty()) throw DomainError("critical_rate_scan: empty budget list");
  std::vector<int> sorted_budgets = budgets;
  std::sort(sorted_budgets.begin(), sorted_budgets.end());

  std::vector<RateScanRow> rows;
  bool any_pass = false;
  for (double tau : tau_list) {
    RateScanRow row;
    row.tau = tau;
    SpanningSet spanning;
    try {
      spanning = build_spanning_set(sys, grid, K, Q, tau, opts.spanning);
    } catch (const Uncoverable& e) {
      log_warn("rate scan: tau=" + std::to_string(tau) + " uncoverable: " + e.what());
      row.alphabet = -1;
      rows.push_back(row);
      continue;
    }
    row.spanning_size = static_cast<int>(spanning.size());
    const CoderController full = build_coder_controller(spanning);

    // sample initial states: every K-cell sample point
    std::vector<Vec> x0s;
    const int n_samples = opts.spanning.samples_per_cell == 1 ? 1 : 1 + (1 << sys.state_dim());
    for (Index c : K.cells) {
      const auto samples = grid.cell_samples(c, n_samples);
      x0s.insert(x0s.end(), samples.begin(), samples.end());
    }

    row.alphabet = -1;
    for (int m : sorted_budgets) {
      if (m < static_cast<int>(spanning.size())) continue;  // no cover of that size available
      const auto transcripts =
          batch_simulate(sys, grid, full, K, Q, x0s, opts.horizon_steps, opts.channel);
      const bool all_pass =
          std::all_of(transcripts.begin(), transcripts.end(),
                      [](const Transcript& t) { return t.pass; });
      if (all_pass) {
        row.alphabet = m;
        row.rate_bits = std::log2(static_cast<double>(m)) / tau;
        row.pass = true;
        any_pass = true;
      }
      break;  // larger budgets use the same cover; the verdict cannot change
    }
    rows.push_back(row);
  }
  if (!any_pass) throw NoPass("critical_rate_scan: no (tau, alphabet) combination passed");
  return rows;
}

}  // namespace iel

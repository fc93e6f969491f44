#include "iel/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "iel/errors.hpp"
#include "iel/integrator.hpp"
#include "iel/log.hpp"

namespace iel {

TransitionGraph::TransitionGraph(Index num_cells, int num_letters, double dwell, double epsilon)
    : num_cells_(num_cells), num_letters_(num_letters), dwell_(dwell), epsilon_(epsilon) {
  groups_.resize(static_cast<std::size_t>(num_cells) * num_letters);
}

double TransitionGraph::weight_gamma(const EdgeGroup& g, int k) const {
  if (k < 0 || k > static_cast<int>(g.log_sv.size()))
    throw InvalidDim("weight_gamma: unstable dimension out of range");
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += g.log_sv[i];
  return s;
}

double TransitionGraph::weight_kappa(const EdgeGroup& g) const {
  double s = 0.0;
  for (double v : g.log_sv) s += std::max(0.0, v);
  return s;
}

namespace {

struct GroupScratch {
  ControlSystem::Workspace ws;
};

// One (cell, letter) abstraction step. Weights come from the center
// trajectory; targets from the union over all sample endpoints.
void compute_group(const ControlSystem& sys, const GridPartition& grid,
                   const TransitionGraphOptions& opts, Index cell, int letter,
                   const ControlSignal& sig, TransitionGraph::EdgeGroup& out,
                   std::int64_t& losses, GroupScratch& scratch) {
  out.source = cell;
  out.letter = letter;
  const int d = sys.state_dim();
  const int nsamples = opts.samples_per_cell == 1 ? 1 : 2;
  const std::vector<Vec> samples = grid.cell_samples(cell, nsamples);
  const double step = opts.step > 0 ? opts.step : opts.dwell / 8.0;

  // center trajectory with the fundamental matrix; stepping shares the
  // interval walker with integrate() so both paths produce identical samples
  Vec x = samples.front();
  Mat Y = Mat::Identity(d, d);
  bool escaped = false;
  double t_prev = 0.0;
  try {
    detail::for_each_interval(sig, opts.dwell, step, {}, [&](double, double t1, const Vec& v) {
      detail::rk4_step_var(sys, v, t1 - t_prev, x, Y, scratch.ws);
      t_prev = t1;
      if (!x.allFinite()) throw NonFinite("graph: non-finite state");
      if (!sys.state_box().contains(x, opts.box_inflation)) throw StateEscaped("graph: escape");
    });
  } catch (const Error&) {
    escaped = true;
  }
  if (escaped) {
    out.escaped = true;
    ++losses;
    return;
  }

  Eigen::JacobiSVD<Mat> svd(Y);
  out.log_sv.resize(d);
  for (int i = 0; i < d; ++i) out.log_sv[i] = std::log(svd.singularValues()[i]);

  std::vector<Index> targets;
  auto add_targets = [&](const Vec& endpoint) {
    std::vector<Index> cells = grid.cells_near(endpoint, opts.epsilon);
    if (cells.empty()) {
      out.escaped = true;
      ++losses;
      return;
    }
    targets.insert(targets.end(), cells.begin(), cells.end());
  };
  add_targets(x);

  for (std::size_t s = 1; s < samples.size(); ++s) {
    Vec xs = samples[s];
    bool esc = false;
    double tp = 0.0;
    try {
      detail::for_each_interval(sig, opts.dwell, step, {}, [&](double, double t1, const Vec& v) {
        detail::rk4_step(sys, v, t1 - tp, xs, scratch.ws);
        tp = t1;
        if (!xs.allFinite()) throw NonFinite("graph: non-finite state");
        if (!sys.state_box().contains(xs, opts.box_inflation)) throw StateEscaped("graph: escape");
      });
    } catch (const Error&) {
      esc = true;
    }
    if (esc) {
      out.escaped = true;
      ++losses;
      continue;
    }
    add_targets(xs);
  }

  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  out.targets = std::move(targets);
}

}  // namespace

TransitionGraph build_transition_graph(const ControlSystem& sys, const GridPartition& grid,
                                       const TransitionGraphOptions& opts) {
  if (!(opts.dwell > 0)) throw DomainError("build_transition_graph: dwell must be positive");
  if (opts.epsilon < 0) throw DomainError("build_transition_graph: epsilon must be >= 0");
  if (grid.size() < 1) throw DomainError("build_transition_graph: empty grid");

  const int L = static_cast<int>(sys.control_range().letters.size());
  TransitionGraph graph(grid.size(), L, opts.dwell, opts.epsilon);

  std::vector<ControlSignal> sigs;
  sigs.reserve(L);
  for (const Vec& letter : sys.control_range().letters)
    sigs.push_back(ControlSignal::constant(letter, opts.dwell));

  const std::int64_t total = static_cast<std::int64_t>(grid.size()) * L;
  std::int64_t losses = 0;
#ifdef IEL_HAVE_OPENMP
#pragma omp parallel
  {
    GroupScratch scratch;
    std::int64_t local_losses = 0;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t g = 0; g < total; ++g) {
      const Index cell = g / L;
      const int letter = static_cast<int>(g % L);
      compute_group(sys, grid, opts, cell, letter, sigs[letter], graph.group(cell, letter),
                    local_losses, scratch);
    }
#pragma omp atomic
    losses += local_losses;
  }
#else
  GroupScratch scratch;
  for (std::int64_t g = 0; g < total; ++g) {
    const Index cell = g / L;
    const int letter = static_cast<int>(g % L);
    compute_group(sys, grid, opts, cell, letter, sigs[letter], graph.group(cell, letter), losses,
                  scratch);
  }
#endif
  graph.set_boundary_losses(losses);
  if (losses > 0)
    log_debug("transition graph: " + std::to_string(losses) + " boundary losses of " +
              std::to_string(total) + " (cell,letter) groups");
  return graph;
}

namespace serial_ref {

TransitionGraph build_transition_graph(const ControlSystem& sys, const GridPartition& grid,
                                       const TransitionGraphOptions& opts) {
  if (!(opts.dwell > 0)) throw DomainError("build_transition_graph: dwell must be positive");
  const int L = static_cast<int>(sys.control_range().letters.size());
  TransitionGraph graph(grid.size(), L, opts.dwell, opts.epsilon);
  const double step = opts.step > 0 ? opts.step : opts.dwell / 8.0;
  const int nsamples = opts.samples_per_cell == 1 ? 1 : 2;
  std::int64_t losses = 0;

  IntegrateOptions io;
  io.step = step;
  io.box_inflation = opts.box_inflation;

  for (Index cell = 0; cell < grid.size(); ++cell) {
    for (int letter = 0; letter < L; ++letter) {
      auto& out = graph.group(cell, letter);
      out.source = cell;
      out.letter = letter;
      const ControlSignal sig =
          ControlSignal::constant(sys.control_range().letters[letter], opts.dwell);
      Mat D;
      try {
        IntegrateOptions iv = io;
        iv.with_variation = true;
        Trajectory tr = integrate(sys, grid.center(cell), sig, opts.dwell, iv);
        D = tr.fundamental.back();
        Eigen::JacobiSVD<Mat> svd(D);
        out.log_sv.resize(sys.state_dim());
        for (int i = 0; i < sys.state_dim(); ++i) out.log_sv[i] = std::log(svd.singularValues()[i]);
        std::vector<Index> targets;
        for (const Vec& endpoint : {tr.back()}) {
          std::vector<Index> cells = grid.cells_near(endpoint, opts.epsilon);
          if (cells.empty()) { out.escaped = true; ++losses; }
          targets.insert(targets.end(), cells.begin(), cells.end());
        }
        const std::vector<Vec> samples = grid.cell_samples(cell, nsamples);
        for (std::size_t s = 1; s < samples.size(); ++s) {
          try {
            Trajectory ts = integrate(sys, samples[s], sig, opts.dwell, io);
            std::vector<Index> cells = grid.cells_near(ts.back(), opts.epsilon);
            if (cells.empty()) { out.escaped = true; ++losses; }
            targets.insert(targets.end(), cells.begin(), cells.end());
          } catch (const Error&) {
            out.escaped = true;
            ++losses;
          }
        }
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        out.targets = std::move(targets);
      } catch (const Error&) {
        out.escaped = true;
        ++losses;
      }
    }
  }
  graph.set_boundary_losses(losses);
  return graph;
}

}  // namespace serial_ref

CellSet reachable_set(const TransitionGraph& graph, const CellSet& start,
                      std::optional<int> max_hops) {
  if (start.empty()) throw EmptyInput("reachable_set: empty start set");
  std::vector<char> seen(graph.num_cells(), 0);
  std::deque<Index> frontier;
  for (Index c : start.cells) {
    if (c < 0 || c >= graph.num_cells()) throw DomainError("reachable_set: start cell out of range");
    seen[c] = 1;
    frontier.push_back(c);
  }
  int hops = 0;
  while (!frontier.empty() && (!max_hops || hops < *max_hops)) {
    std::deque<Index> next;
    for (Index c : frontier) {
      for (int l = 0; l < graph.num_letters(); ++l) {
        for (Index t : graph.group(c, l).targets) {
          if (!seen[t]) {
            seen[t] = 1;
            next.push_back(t);
          }
        }
      }
    }
    frontier = std::move(next);
    ++hops;
  }
  CellSet out;
  out.tag = CellTag::reachable;
  for (Index c = 0; c < graph.num_cells(); ++c)
    if (seen[c]) out.cells.push_back(c);
  return out;
}

namespace {

// Iterative Tarjan over the union adjacency of all letters.
std::vector<CellSet> nontrivial_sccs(const TransitionGraph& graph, CellTag tag) {
  const Index n = graph.num_cells();
  std::vector<std::int32_t> low(n, -1), num(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<Index> stack;
  std::vector<CellSet> out;
  std::int32_t counter = 0;

  struct Frame {
    Index v;
    int letter;
    std::size_t edge;
  };

  std::vector<Frame> call;
  for (Index root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    call.push_back({root, 0, 0});
    num[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      bool descended = false;
      while (f.letter < graph.num_letters()) {
        const auto& targets = graph.group(f.v, f.letter).targets;
        if (f.edge >= targets.size()) {
          ++f.letter;
          f.edge = 0;
          continue;
        }
        const Index w = targets[f.edge++];
        if (num[w] == -1) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.v] = std::min(low[f.v], num[w]);
      }
      if (descended) continue;
      // finished v
      const Index v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == num[v]) {
        CellSet comp;
        comp.tag = tag;
        while (true) {
          const Index w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.cells.push_back(w);
          if (w == v) break;
        }
        comp.normalize();
        // nontrivial: at least two cells or a self-loop
        bool keep = comp.size() >= 2;
        if (!keep) {
          const Index c = comp.cells.front();
          for (int l = 0; l < graph.num_letters() && !keep; ++l) {
            const auto& ts = graph.group(c, l).targets;
            keep = std::binary_search(ts.begin(), ts.end(), c);
          }
        }
        if (keep) out.push_back(std::move(comp));
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const CellSet& a, const CellSet& b) { return a.cells.front() < b.cells.front(); });
  return out;
}

}  // namespace

std::vector<CellSet> control_sets(const TransitionGraph& graph, const GridPartition& grid) {
  if (graph.epsilon() > grid.max_width())
    throw DomainError("control_sets: graph fattening exceeds one cell width; "
                      "build the graph with epsilon = 0 for control sets");
  std::vector<CellSet> out = nontrivial_sccs(graph, CellTag::control_set);
  if (out.empty())
    throw EmptyResult("control_sets: no nontrivial component (grid too coarse or no control set "
                      "inside the working box)");
  return out;
}

std::vector<CellSet> chain_control_sets(const TransitionGraph& graph) {
  std::vector<CellSet> out = nontrivial_sccs(graph, CellTag::chain_control_set);
  if (out.empty()) throw EmptyResult("chain_control_sets: no nontrivial component");
  return out;
}

}  // namespace iel

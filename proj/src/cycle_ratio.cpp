#include "iel/cycle_ratio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "iel/errors.hpp"
#include "iel/log.hpp"

namespace iel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Canonical form: rotate the edge sequence so the smallest source node leads,
// then accumulate sums in that order. Identical cycles therefore always
// produce bitwise-identical ratios.
RatioCycle canonical_cycle(const std::vector<RatioEdge>& edges, std::vector<int> cycle_edges) {
  if (cycle_edges.empty()) throw InternalError("canonical_cycle: empty cycle");
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < cycle_edges.size(); ++i) {
    if (edges[cycle_edges[i]].src < edges[cycle_edges[pivot]].src) pivot = i;
  }
  std::rotate(cycle_edges.begin(), cycle_edges.begin() + pivot, cycle_edges.end());
  RatioCycle out;
  out.edges = std::move(cycle_edges);
  for (int e : out.edges) {
    out.sum_weight += edges[e].weight;
    out.sum_duration += edges[e].duration;
  }
  return out;
}

// tie-break order on cycles of equal ratio: node sequence, then letters
bool cycle_lex_less(const std::vector<RatioEdge>& edges, const RatioCycle& a,
                    const RatioCycle& b) {
  const std::size_t n = std::min(a.edges.size(), b.edges.size());
  for (std::size_t i = 0; i < n; ++i) {
    const RatioEdge& ea = edges[a.edges[i]];
    const RatioEdge& eb = edges[b.edges[i]];
    if (ea.src != eb.src) return ea.src < eb.src;
    if (ea.dst != eb.dst) return ea.dst < eb.dst;
    if (ea.letter != eb.letter) return ea.letter < eb.letter;
  }
  return a.edges.size() < b.edges.size();
}

struct Adjacency {
  std::vector<std::vector<int>> out;  // edge ids per node, deterministic order
};

Adjacency build_adjacency(const std::vector<RatioEdge>& edges, int n_nodes) {
  for (const RatioEdge& e : edges) {
    if (e.src < 0 || e.src >= n_nodes || e.dst < 0 || e.dst >= n_nodes)
      throw DomainError("cycle ratio: edge endpoint out of range");
    if (!(e.duration > 0)) throw DomainError("cycle ratio: edge durations must be positive");
    if (!std::isfinite(e.weight)) throw DomainError("cycle ratio: edge weight not finite");
  }
  std::vector<int> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const RatioEdge& ea = edges[a];
    const RatioEdge& eb = edges[b];
    if (ea.src != eb.src) return ea.src < eb.src;
    if (ea.dst != eb.dst) return ea.dst < eb.dst;
    return ea.letter < eb.letter;
  });
  Adjacency adj;
  adj.out.resize(n_nodes);
  for (int e : order) adj.out[edges[e].src].push_back(e);
  return adj;
}

}  // namespace

double min_cycle_ratio_howard(const std::vector<RatioEdge>& edges, int n_nodes,
                              RatioCycle* witness) {
  if (edges.empty()) throw DomainError("min_cycle_ratio_howard: no edges");
  Adjacency adj = build_adjacency(edges, n_nodes);
  for (int v = 0; v < n_nodes; ++v) {
    if (adj.out[v].empty())
      throw InternalError("min_cycle_ratio_howard: node without outgoing edge (not an SCC)");
  }

  double wscale = 0.0, tmin = kInf;
  for (const RatioEdge& e : edges) {
    wscale = std::max(wscale, std::abs(e.weight));
    tmin = std::min(tmin, e.duration);
  }
  const double eps = 1e-12 * std::max(1.0, wscale / tmin);

  // initial policy: per node the smallest ratio edge
  std::vector<int> policy(n_nodes);
  for (int v = 0; v < n_nodes; ++v) {
    int best = adj.out[v].front();
    for (int e : adj.out[v]) {
      if (edges[e].weight / edges[e].duration < edges[best].weight / edges[best].duration)
        best = e;
    }
    policy[v] = best;
  }

  std::vector<double> r(n_nodes, 0.0), h(n_nodes, 0.0);
  std::vector<int> cycle_of(n_nodes, -1);
  RatioCycle best_cycle;
  double best_ratio = kInf;
  const int max_iter = 200 + 10 * n_nodes;

  for (int iter = 0; iter < max_iter; ++iter) {
    // --- value determination on the policy (functional) graph
    std::fill(cycle_of.begin(), cycle_of.end(), -1);
    std::vector<int> color(n_nodes, 0);  // 0 new, 1 in walk, 2 resolved
    std::vector<RatioCycle> cycles;
    std::vector<char> h_done(n_nodes, 0);

    for (int start = 0; start < n_nodes; ++start) {
      if (color[start] != 0) continue;
      std::vector<int> walk;
      int v = start;
      while (color[v] == 0) {
        color[v] = 1;
        walk.push_back(v);
        v = edges[policy[v]].dst;
      }
      if (color[v] == 1) {
        // new cycle discovered: v starts the cyclic suffix of walk
        auto it = std::find(walk.begin(), walk.end(), v);
        std::vector<int> cyc_edges;
        for (auto p = it; p != walk.end(); ++p) cyc_edges.push_back(policy[*p]);
        RatioCycle c = canonical_cycle(edges, cyc_edges);
        const int id = static_cast<int>(cycles.size());
        const double ratio = c.ratio();
        for (auto p = it; p != walk.end(); ++p) {
          cycle_of[*p] = id;
          r[*p] = ratio;
        }
        // h on the cycle: 0 at the canonical root, backward propagation
        const int root = edges[c.edges.front()].src;
        h[root] = 0.0;
        h_done[root] = 1;
        for (std::size_t i = c.edges.size(); i-- > 1;) {
          const RatioEdge& e = edges[c.edges[i]];
          h[e.src] = e.weight - ratio * e.duration + h[e.dst];
          h_done[e.src] = 1;
        }
        cycles.push_back(std::move(c));
      }
      for (int w : walk) color[w] = 2;
    }
    // resolve tree nodes toward their cycles
    for (int v0 = 0; v0 < n_nodes; ++v0) {
      if (h_done[v0]) continue;
      std::vector<int> chain;
      int v = v0;
      while (!h_done[v]) {
        chain.push_back(v);
        v = edges[policy[v]].dst;
      }
      const int anchor = v;
      for (auto p = chain.rbegin(); p != chain.rend(); ++p) {
        const RatioEdge& e = edges[policy[*p]];
        r[*p] = r[anchor];
        h[*p] = e.weight - r[*p] * e.duration + h[e.dst];
        h_done[*p] = 1;
      }
    }
    // some tree nodes may reach cycles through nodes whose r differs; r was
    // propagated from the anchor, which already carries the reached ratio
    double iter_best = kInf;
    int iter_best_id = -1;
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      const double rr = cycles[i].ratio();
      if (rr < iter_best ||
          (rr == iter_best && iter_best_id >= 0 &&
           cycle_lex_less(edges, cycles[i], cycles[iter_best_id]))) {
        iter_best = rr;
        iter_best_id = static_cast<int>(i);
      }
    }
    if (iter_best < best_ratio || (iter_best == best_ratio && iter_best_id >= 0 &&
                                   (best_cycle.edges.empty() ||
                                    cycle_lex_less(edges, cycles[iter_best_id], best_cycle)))) {
      best_ratio = iter_best;
      best_cycle = cycles[iter_best_id];
    }

    // --- policy improvement
    bool changed = false;
    for (int v = 0; v < n_nodes; ++v) {
      int cur = policy[v];
      double cur_r = r[edges[cur].dst];
      double cur_val = edges[cur].weight - cur_r * edges[cur].duration + h[edges[cur].dst];
      for (int e : adj.out[v]) {
        const double er = r[edges[e].dst];
        const double ev = edges[e].weight - er * edges[e].duration + h[edges[e].dst];
        if (er < cur_r - eps || (std::abs(er - cur_r) <= eps && ev < cur_val - eps)) {
          cur = e;
          cur_r = er;
          cur_val = ev;
          changed = true;
        }
      }
      policy[v] = cur;
    }
    if (!changed) break;
    if (iter + 1 == max_iter)
      log_warn("min_cycle_ratio_howard: iteration cap reached; returning best policy cycle");
  }

  if (witness) *witness = best_cycle;
  return best_cycle.ratio();
}

namespace {

constexpr std::int64_t kEnumerationCap = 5'000'000;

// DFS over start-node-minimal simple cycles: a cycle is reported exactly once,
// rooted at its smallest node.
template <class F>
void enumerate_simple_cycles(const std::vector<RatioEdge>& edges, const Adjacency& adj,
                             int n_nodes, F&& report) {
  std::int64_t count = 0;
  std::vector<char> on_path(n_nodes, 0);
  std::vector<int> path_edges;

  for (int start = 0; start < n_nodes; ++start) {
    struct Frame {
      int node;
      std::size_t next;
    };
    std::vector<Frame> stack;
    stack.push_back({start, 0});
    on_path[start] = 1;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next >= adj.out[f.node].size()) {
        on_path[f.node] = 0;
        stack.pop_back();
        if (!path_edges.empty()) path_edges.pop_back();
        continue;
      }
      const int e = adj.out[f.node][f.next++];
      const int w = edges[e].dst;
      if (w < start) continue;
      if (w == start) {
        path_edges.push_back(e);
        if (++count > kEnumerationCap)
          throw DomainError("min_cycle_ratio_enumerate: too many simple cycles");
        report(path_edges);
        path_edges.pop_back();
        continue;
      }
      if (on_path[w]) continue;
      on_path[w] = 1;
      path_edges.push_back(e);
      stack.push_back({w, 0});
    }
  }
}

}  // namespace

double min_cycle_ratio_enumerate(const std::vector<RatioEdge>& edges, int n_nodes,
                                 RatioCycle* witness) {
  if (edges.empty()) throw DomainError("min_cycle_ratio_enumerate: no edges");
  Adjacency adj = build_adjacency(edges, n_nodes);
  RatioCycle best;
  double best_ratio = kInf;
  bool found = false;
  enumerate_simple_cycles(edges, adj, n_nodes, [&](const std::vector<int>& cyc) {
    RatioCycle c = canonical_cycle(edges, cyc);
    const double rr = c.ratio();
    if (!found || rr < best_ratio || (rr == best_ratio && cycle_lex_less(edges, c, best))) {
      best = std::move(c);
      best_ratio = rr;
      found = true;
    }
  });
  if (!found) throw InternalError("min_cycle_ratio_enumerate: no cycle (not an SCC)");
  if (witness) *witness = best;
  return best.ratio();
}

CycleRatioResult cycle_ratio_bounds(const std::vector<RatioEdge>& edges, int n_nodes,
                                    CycleRatioMethod method) {
  CycleRatioMethod m = method;
  if (m == CycleRatioMethod::automatic)
    m = n_nodes <= 12 ? CycleRatioMethod::enumeration : CycleRatioMethod::policy_iteration;

  std::vector<RatioEdge> negated = edges;
  for (RatioEdge& e : negated) e.weight = -e.weight;

  CycleRatioResult out;
  RatioCycle min_wit, max_wit_neg;
  if (m == CycleRatioMethod::enumeration) {
    out.method = "enumeration";
    min_cycle_ratio_enumerate(edges, n_nodes, &min_wit);
    min_cycle_ratio_enumerate(negated, n_nodes, &max_wit_neg);
  } else {
    out.method = "policy_iteration";
    min_cycle_ratio_howard(edges, n_nodes, &min_wit);
    min_cycle_ratio_howard(negated, n_nodes, &max_wit_neg);
  }
  out.min_cycle = canonical_cycle(edges, min_wit.edges);
  out.max_cycle = canonical_cycle(edges, max_wit_neg.edges);
  out.min_ratio = out.min_cycle.ratio();
  out.max_ratio = out.max_cycle.ratio();
  return out;
}

}  // namespace iel

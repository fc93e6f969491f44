#include "iel/spanning.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "iel/errors.hpp"
#include "iel/integrator.hpp"
#include "iel/log.hpp"

namespace iel {

namespace {

struct CoverBits {
  std::vector<std::uint64_t> blocks;

  explicit CoverBits(std::size_t n = 0) : blocks((n + 63) / 64, 0) {}
  void set(std::size_t i) { blocks[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return blocks[i / 64] >> (i % 64) & 1; }
  int count_new(const CoverBits& covered) const {
    int n = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      n += std::popcount(blocks[b] & ~covered.blocks[b]);
    return n;
  }
  void merge(const CoverBits& other) {
    for (std::size_t b = 0; b < blocks.size(); ++b) blocks[b] |= other.blocks[b];
  }
  bool operator==(const CoverBits& o) const { return blocks == o.blocks; }
};

/// advances x one dwell under a constant letter; false when the dense-time
/// samples leave the inflated Q mask or the working box
bool advance_point(const ControlSystem& sys, const Vec& letter, double dwell, double step,
                   const GridPartition& grid, const CellMask& qmask, double box_inflation, Vec& x,
                   ControlSystem::Workspace& ws) {
  const int n = std::max(1, static_cast<int>(std::ceil(dwell / step - 1e-12)));
  const double h = dwell / n;
  for (int i = 0; i < n; ++i) {
    detail::rk4_step(sys, letter, h, x, ws);
    if (!x.allFinite()) return false;
    if (!sys.state_box().contains(x, box_inflation)) return false;
    if (!qmask.contains(grid.locate(x))) return false;
  }
  return true;
}

struct BeamNode {
  std::vector<int> letters;
  Mat pts;                      // d x n_points, columns of dead cells are stale
  std::vector<char> cell_alive;
  int alive = 0;
};

}  // namespace

SpanningSet build_spanning_set(const ControlSystem& sys, const GridPartition& grid,
                               const CellSet& K, const CellSet& Q, double tau,
                               const SpanningOptions& opts) {
  if (K.empty()) throw EmptyInput("build_spanning_set: empty K");
  if (Q.empty()) throw EmptyInput("build_spanning_set: empty Q");
  if (!(opts.dwell > 0)) throw DomainError("build_spanning_set: dwell must be positive");
  const double ratio = tau / opts.dwell;
  const int depth = static_cast<int>(std::llround(ratio));
  if (depth < 1 || std::abs(ratio - depth) > 1e-9 * std::max(1.0, ratio))
    throw DomainError("build_spanning_set: tau must be a positive multiple of dwell");

  const CellMask qmask(dilate(Q, grid, 1), grid.size());
  const CellMask kmask(K, grid.size());
  for (Index c : K.cells)
    if (!qmask.contains(c)) throw DomainError("build_spanning_set: K not contained in Q");

  const int d = sys.state_dim();
  const int n_cells = static_cast<int>(K.size());
  const int n_samples = opts.samples_per_cell == 1 ? 1 : 1 + (1 << d);
  const int n_points = n_cells * n_samples;
  const auto& letters = sys.control_range().letters;
  const int L = static_cast<int>(letters.size());

  BeamNode root;
  root.pts.resize(d, n_points);
  root.cell_alive.assign(n_cells, 1);
  root.alive = n_cells;
  for (int ci = 0; ci < n_cells; ++ci) {
    const auto samples = grid.cell_samples(K.cells[ci], n_samples);
    for (int s = 0; s < n_samples; ++s) root.pts.col(ci * n_samples + s) = samples[s];
  }

  std::vector<BeamNode> beam{std::move(root)};
  for (int level = 0; level < depth; ++level) {
    const int n_children = static_cast<int>(beam.size()) * L;
    std::vector<BeamNode> children(n_children);
#ifdef IEL_HAVE_OPENMP
#pragma omp parallel
#endif
    {
      ControlSystem::Workspace ws;
      Vec x(d);
#ifdef IEL_HAVE_OPENMP
#pragma omp for schedule(dynamic, 4)
#endif
      for (int c = 0; c < n_children; ++c) {
        const BeamNode& parent = beam[c / L];
        const int letter = c % L;
        BeamNode& child = children[c];
        child.letters = parent.letters;
        child.letters.push_back(letter);
        child.pts = parent.pts;
        child.cell_alive = parent.cell_alive;
        child.alive = 0;
        for (int ci = 0; ci < n_cells; ++ci) {
          if (!child.cell_alive[ci]) continue;
          bool ok = true;
          for (int s = 0; s < n_samples && ok; ++s) {
            x = child.pts.col(ci * n_samples + s);
            ok = advance_point(sys, letters[letter], opts.dwell, opts.step, grid, qmask,
                               opts.box_inflation, x, ws);
            child.pts.col(ci * n_samples + s) = x;
          }
          child.cell_alive[ci] = ok;
          if (ok) ++child.alive;
        }
      }
    }

    // deterministic selection: global beam by (alive desc, letters lex asc)
    // plus a per-cell quota so rare steering directions survive
    std::vector<int> order;
    order.reserve(children.size());
    for (int c = 0; c < n_children; ++c)
      if (children[c].alive > 0) order.push_back(c);
    if (order.empty())
      throw Uncoverable(K.cells, "build_spanning_set: every candidate prefix died");
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (children[a].alive != children[b].alive) return children[a].alive > children[b].alive;
      return children[a].letters < children[b].letters;
    });
    std::vector<char> keep(children.size(), 0);
    for (std::size_t i = 0; i < order.size() && i < static_cast<std::size_t>(opts.candidate_depth);
         ++i)
      keep[order[i]] = 1;
    std::vector<int> cell_kept(n_cells, 0);
    for (int idx : order) {
      const BeamNode& node = children[idx];
      bool used = false;
      for (int ci = 0; ci < n_cells; ++ci) {
        if (node.cell_alive[ci] && cell_kept[ci] < opts.per_cell_quota) {
          ++cell_kept[ci];
          used = true;
        }
      }
      if (used) keep[idx] = 1;
    }
    std::vector<BeamNode> next;
    for (int idx : order)
      if (keep[idx]) next.push_back(std::move(children[idx]));
    beam = std::move(next);
  }

  // terminal coverage per candidate
  const bool return_to_K = opts.flavor == SpanningFlavor::tau_K_upper_Q;
  std::vector<CoverBits> covers;
  covers.reserve(beam.size());
  for (const BeamNode& node : beam) {
    CoverBits bits(n_cells);
    for (int ci = 0; ci < n_cells; ++ci) {
      if (!node.cell_alive[ci]) continue;
      bool ok = true;
      if (return_to_K) {
        for (int s = 0; s < n_samples && ok; ++s)
          ok = kmask.contains(grid.locate(node.pts.col(ci * n_samples + s)));
      }
      if (ok) bits.set(ci);
    }
    covers.push_back(std::move(bits));
  }

  // coverability check
  {
    CoverBits all(n_cells);
    for (const CoverBits& c : covers) all.merge(c);
    std::vector<Index> missing;
    for (int ci = 0; ci < n_cells; ++ci)
      if (!all.test(ci)) missing.push_back(K.cells[ci]);
    if (!missing.empty())
      throw Uncoverable(missing, "build_spanning_set: " + std::to_string(missing.size()) +
                                     " K-cells admit no candidate (enumeration depth " +
                                     std::to_string(opts.candidate_depth) + ")");
  }

  SpanningSet out;
  out.tau = tau;
  out.dwell = opts.dwell;
  out.flavor = opts.flavor;
  out.k_cells = K.cells;
  out.coverage.assign(n_cells, -1);

  std::vector<int> selected;
  const bool try_exact = n_cells <= opts.exact_max_cells &&
                         static_cast<int>(covers.size()) <= opts.exact_max_candidates &&
                         n_cells <= 22;
  if (try_exact) {
    std::vector<std::uint32_t> masks(covers.size(), 0);
    for (std::size_t i = 0; i < covers.size(); ++i)
      masks[i] = static_cast<std::uint32_t>(covers[i].blocks.empty() ? 0 : covers[i].blocks[0]);
    selected = exact_min_cover(masks, n_cells);
    out.exact_cover = !selected.empty();
  }
  if (selected.empty()) {
    // greedy: largest residual coverage first, ties by lexicographic letters
    out.exact_cover = false;
    CoverBits covered(n_cells);
    int remaining = n_cells;
    while (remaining > 0) {
      int best = -1, best_gain = 0;
      for (std::size_t i = 0; i < covers.size(); ++i) {
        const int gain = covers[i].count_new(covered);
        if (gain <= 0) continue;
        if (best < 0 || gain > best_gain ||
            (gain == best_gain && beam[i].letters < beam[best].letters)) {
          best = static_cast<int>(i);
          best_gain = gain;
        }
      }
      if (best < 0) throw InternalError("build_spanning_set: greedy stalled");
      selected.push_back(best);
      covered.merge(covers[best]);
      remaining -= best_gain;
      if (opts.max_signals > 0 && static_cast<int>(selected.size()) >= opts.max_signals &&
          remaining > 0) {
        std::vector<Index> missing;
        for (int ci = 0; ci < n_cells; ++ci)
          if (!covered.test(ci)) missing.push_back(K.cells[ci]);
        throw Uncoverable(missing, "build_spanning_set: signal budget exhausted");
      }
    }
  } else {
    // order the exact selection by coverage size, then letters
    std::sort(selected.begin(), selected.end(), [&](int a, int b) {
      CoverBits none(n_cells);
      const int ga = covers[a].count_new(none);
      const int gb = covers[b].count_new(none);
      if (ga != gb) return ga > gb;
      return beam[a].letters < beam[b].letters;
    });
  }

  for (int id : selected) out.signals.push_back(beam[id].letters);
  for (int ci = 0; ci < n_cells; ++ci) {
    for (std::size_t s = 0; s < selected.size(); ++s) {
      if (covers[selected[s]].test(ci)) {
        out.coverage[ci] = static_cast<int>(s);
        break;
      }
    }
  }
  log_info("spanning set: " + std::to_string(out.signals.size()) + " signals for " +
           std::to_string(n_cells) + " cells at tau=" + std::to_string(tau));
  return out;
}

std::vector<int> exact_min_cover(const std::vector<std::uint32_t>& masks, int n_cells) {
  if (n_cells < 1 || n_cells > 22) throw DomainError("exact_min_cover: instance too large");
  const std::uint32_t full = n_cells == 32 ? ~0u : (1u << n_cells) - 1;

  // dedupe identical coverage, keep the smallest candidate id
  std::vector<std::pair<std::uint32_t, int>> cands;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (masks[i] == 0) continue;
    bool dup = false;
    for (auto& [m, id] : cands) dup = dup || m == masks[i];
    if (!dup) cands.emplace_back(masks[i], static_cast<int>(i));
  }
  if (cands.empty()) return {};

  const std::size_t states = std::size_t{1} << n_cells;
  std::vector<std::uint8_t> dp(states, 255);
  std::vector<std::int32_t> choice(states, -1), prev(states, -1);
  dp[0] = 0;
  for (std::size_t mask = 0; mask < states; ++mask) {
    if (dp[mask] == 255) continue;
    for (const auto& [m, id] : cands) {
      const std::size_t nm = mask | m;
      if (dp[nm] > dp[mask] + 1) {
        dp[nm] = static_cast<std::uint8_t>(dp[mask] + 1);
        choice[nm] = id;
        prev[nm] = static_cast<std::int32_t>(mask);
      }
    }
  }
  if (dp[full] == 255) return {};
  std::vector<int> out;
  for (std::size_t m = full; m != 0; m = static_cast<std::size_t>(prev[m])) out.push_back(choice[m]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> enumerate_all_coverage(const ControlSystem& sys,
                                                  const GridPartition& grid, const CellSet& K,
                                                  const CellSet& Q, int length,
                                                  const SpanningOptions& opts) {
  const int n_cells = static_cast<int>(K.size());
  if (n_cells > 32) throw DomainError("enumerate_all_coverage: too many K-cells");
  const int L = static_cast<int>(sys.control_range().letters.size());
  double total = std::pow(static_cast<double>(L), length);
  if (total > 2e6) throw DomainError("enumerate_all_coverage: alphabet^length too large");

  const CellMask qmask(dilate(Q, grid, 1), grid.size());
  const CellMask kmask(K, grid.size());
  const int d = sys.state_dim();
  const int n_samples = opts.samples_per_cell == 1 ? 1 : 1 + (1 << d);
  const int n_points = n_cells * n_samples;
  const auto& letters = sys.control_range().letters;
  const bool return_to_K = opts.flavor == SpanningFlavor::tau_K_upper_Q;

  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(total));

  // DFS with prefix-shared integration
  struct Level {
    Mat pts;
    std::vector<char> alive;
  };
  std::vector<Level> levels(length + 1);
  levels[0].pts.resize(d, n_points);
  levels[0].alive.assign(n_cells, 1);
  for (int ci = 0; ci < n_cells; ++ci) {
    const auto samples = grid.cell_samples(K.cells[ci], n_samples);
    for (int s = 0; s < n_samples; ++s) levels[0].pts.col(ci * n_samples + s) = samples[s];
  }
  ControlSystem::Workspace ws;
  Vec x(d);

  std::vector<int> seq(length, 0);
  int lvl = 0;
  while (true) {
    if (lvl == length) {
      std::uint32_t mask = 0;
      const Level& leaf = levels[length];
      for (int ci = 0; ci < n_cells; ++ci) {
        if (!leaf.alive[ci]) continue;
        bool ok = true;
        if (return_to_K) {
          for (int s = 0; s < n_samples && ok; ++s)
            ok = kmask.contains(grid.locate(leaf.pts.col(ci * n_samples + s)));
        }
        if (ok) mask |= 1u << ci;
      }
      out.push_back(mask);
      // backtrack to the deepest level with an unexplored letter
      --lvl;
      while (lvl >= 0 && seq[lvl] == L - 1) --lvl;
      if (lvl < 0) break;
      ++seq[lvl];
      for (int i = lvl + 1; i < length; ++i) seq[i] = 0;
    }
    // advance level lvl -> lvl+1 with letter seq[lvl]
    Level& src = levels[lvl];
    Level& dst = levels[lvl + 1];
    dst.pts = src.pts;
    dst.alive = src.alive;
    for (int ci = 0; ci < n_cells; ++ci) {
      if (!dst.alive[ci]) continue;
      bool ok = true;
      for (int s = 0; s < n_samples && ok; ++s) {
        x = dst.pts.col(ci * n_samples + s);
        ok = advance_point(sys, letters[seq[lvl]], opts.dwell, opts.step, grid, qmask,
                           opts.box_inflation, x, ws);
        dst.pts.col(ci * n_samples + s) = x;
      }
      dst.alive[ci] = ok;
    }
    ++lvl;
  }
  return out;
}

}  // namespace iel

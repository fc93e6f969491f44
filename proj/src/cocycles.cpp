#include "iel/cocycles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iel/errors.hpp"
#include "iel/integrator.hpp"

namespace iel {

namespace {

// Maintains D(t) = Z * S * exp(logscale) with S upper triangular. Z is
// re-orthonormalized on the configured cadence; S is rescaled whenever its
// magnitude grows, so only the log of the singular values ever matters.
struct QrAccumulator {
  Mat Z, S;
  double logscale = 0.0;
  int d;

  explicit QrAccumulator(int dim) : d(dim) {
    Z = Mat::Identity(d, d);
    S = Mat::Identity(d, d);
  }

  void reorthonormalize() {
    Eigen::HouseholderQR<Mat> qr(Z);
    Mat Q = qr.householderQ();
    Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix signs so the diagonal of R is nonnegative
    for (int i = 0; i < d; ++i) {
      if (R(i, i) < 0) {
        R.row(i) = -R.row(i);
        Q.col(i) = -Q.col(i);
      }
    }
    Z = Q;
    S = R * S;
    const double m = S.cwiseAbs().maxCoeff();
    if (m > 1e6 || (m > 0 && m < 1e-6)) {
      S /= m;
      logscale += std::log(m);
    }
  }

  std::vector<double> log_singular_values() const {
    Mat M = Z * S;
    Eigen::JacobiSVD<Mat> svd(M);
    std::vector<double> out(d);
    for (int i = 0; i < d; ++i) out[i] = std::log(svd.singularValues()[i]) + logscale;
    return out;
  }
};

}  // namespace

std::vector<VariationalSample> variational_sweep(const ControlSystem& sys, const Vec& x0,
                                                 const ControlSignal& u,
                                                 std::vector<double> query_times,
                                                 const CocycleOptions& opts) {
  if (x0.size() != sys.state_dim()) throw InvalidDim("variational_sweep: x0 dimension mismatch");
  std::sort(query_times.begin(), query_times.end());
  std::vector<VariationalSample> out;
  if (query_times.empty()) return out;
  if (query_times.front() < 0) throw DomainError("variational_sweep: negative query time");

  const int d = sys.state_dim();
  const double horizon = query_times.back();

  QrAccumulator acc(d);
  Vec x = x0;
  ControlSystem::Workspace ws;

  std::size_t next_query = 0;
  auto flush_queries = [&](double t) {
    while (next_query < query_times.size() && query_times[next_query] <= t + 1e-13 * std::max(1.0, t)) {
      acc.reorthonormalize();
      VariationalSample s;
      s.t = query_times[next_query];
      s.log_sv = acc.log_singular_values();
      s.frame = acc.Z;
      s.state = x;
      out.push_back(std::move(s));
      ++next_query;
    }
  };

  flush_queries(0.0);
  if (horizon <= 0.0) return out;

  double t_prev = 0.0;
  double t_last_reorth = 0.0;
  detail::for_each_interval(u, horizon, opts.step, query_times,
                            [&](double, double t1, const Vec& v) {
    detail::rk4_step_var(sys, v, t1 - t_prev, x, acc.Z, ws);
    t_prev = t1;
    if (!x.allFinite()) throw NonFinite("variational_sweep: non-finite state");
    if (!sys.state_box().contains(x, opts.box_inflation))
      throw StateEscaped("variational_sweep: state left the inflated working box");
    if (t1 - t_last_reorth >= opts.reorth_interval ||
        acc.Z.cwiseAbs().maxCoeff() > opts.reorth_threshold) {
      acc.reorthonormalize();
      t_last_reorth = t1;
    }
    flush_queries(t1);
  });
  flush_queries(horizon + 1.0);  // catch the final query against accumulated roundoff
  if (out.size() != query_times.size())
    throw InternalError("variational_sweep: missed a query time");
  return out;
}

double gamma_cocycle(const ControlSystem& sys, const Vec& x, const ControlSignal& u, double t,
                     int unstable_dim, const CocycleOptions& opts) {
  if (t < 0) throw DomainError("gamma_cocycle: t must be >= 0");
  if (unstable_dim < 0 || unstable_dim > sys.state_dim())
    throw InvalidDim("gamma_cocycle: unstable dimension out of range");
  if (t == 0.0 || unstable_dim == 0) return 0.0;
  const auto sweep = variational_sweep(sys, x, u, {t}, opts);
  const auto& lsv = sweep.back().log_sv;
  double s = 0.0;
  for (int i = 0; i < unstable_dim; ++i) s += lsv[i];
  return s;
}

double kappa_cocycle(const ControlSystem& sys, const Vec& x, const ControlSignal& u, double t,
                     const CocycleOptions& opts) {
  if (t < 0) throw DomainError("kappa_cocycle: t must be >= 0");
  if (t == 0.0) return 0.0;
  const auto sweep = variational_sweep(sys, x, u, {t}, opts);
  double s = 0.0;
  for (double v : sweep.back().log_sv) s += std::max(0.0, v);
  return s;
}

HyperbolicSplittingEstimate estimate_splitting(const ControlSystem& sys, const Vec& x,
                                               const ControlSignal& u, double horizon,
                                               const SplittingOptions& opts) {
  if (!(horizon > 0)) throw DomainError("estimate_splitting: horizon must be positive");
  const int d = sys.state_dim();

  std::vector<double> queries;
  for (double t = opts.sample_interval; t < horizon; t += opts.sample_interval)
    queries.push_back(t);
  queries.push_back(horizon);
  const auto sweep = variational_sweep(sys, x, u, queries, opts.cocycle);

  HyperbolicSplittingEstimate est;
  est.delta_gap = opts.delta_gap;
  est.horizon = horizon;
  const auto& final_lsv = sweep.back().log_sv;
  est.exponents.resize(d);
  for (int i = 0; i < d; ++i) est.exponents[i] = final_lsv[i] / horizon;

  est.unstable_dim = 0;
  for (double e : est.exponents)
    if (e > 0) ++est.unstable_dim;

  double min_abs = std::numeric_limits<double>::infinity();
  for (double e : est.exponents) min_abs = std::min(min_abs, std::abs(e));
  est.hyperbolic = min_abs >= opts.delta_gap;
  est.lambda = est.hyperbolic ? min_abs : 0.0;

  // envelope constant: growth_i(t) >= log c + lambda t on E+, and
  // growth_j(t) <= -lambda t - log c on E-
  double log_c = 0.0;
  if (est.hyperbolic) {
    for (const auto& s : sweep) {
      if (s.t <= 0) continue;
      for (int i = 0; i < d; ++i) {
        const double g = s.log_sv[i];
        if (i < est.unstable_dim)
          log_c = std::min(log_c, g - est.lambda * s.t);
        else
          log_c = std::min(log_c, -(g + est.lambda * s.t));
      }
    }
  }
  est.c = std::min(1.0, std::exp(log_c));

  est.samples.reserve(sweep.size());
  for (const auto& s : sweep) est.samples.push_back({s.t, s.frame});
  return est;
}

}  // namespace iel

#include "iel/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iel/errors.hpp"
#include "iel/integrator.hpp"
#include "iel/log.hpp"

namespace iel {

namespace {

// damped Newton on f(x) = 0; returns true on convergence
bool newton_root(const ControlSystem& sys, const Vec& letter, Vec& x, int max_iter) {
  ControlSystem::Workspace ws;
  Vec f, xn;
  Mat J;
  const double tol = 1e-12 * (1.0 + sys.state_box().diameter());
  for (int it = 0; it < max_iter; ++it) {
    sys.rhs(x, letter, f, ws);
    const double r = f.norm();
    if (r <= tol) return true;
    sys.jacobian(x, letter, J, ws);
    Eigen::FullPivLU<Mat> lu(J);
    if (!lu.isInvertible()) return false;
    const Vec dx = lu.solve(-f);
    double s = 1.0;
    bool improved = false;
    Vec fn;
    for (int back = 0; back < 30; ++back) {
      xn = x + s * dx;
      sys.rhs(xn, letter, fn, ws);
      if (fn.allFinite() && fn.norm() < (1.0 - 0.25 * s) * r) {
        improved = true;
        break;
      }
      s *= 0.5;
    }
    if (!improved) return false;
    x = xn;
  }
  ControlSystem::Workspace ws2;
  sys.rhs(x, letter, f, ws2);
  return f.norm() <= tol;
}

double closure_defect(const ControlSystem& sys, const Vec& x0, const ControlSignal& u,
                      double period, const OrbitOptions& opts) {
  IntegrateOptions io;
  io.step = opts.step;
  io.box_inflation = opts.box_inflation;
  Trajectory tr = integrate(sys, x0, u, period, io);
  return (tr.back() - x0).norm();
}

}  // namespace

std::vector<PeriodicOrbit> equilibrium_orbits(const ControlSystem& sys, double period,
                                              const std::vector<Vec>& seeds,
                                              const OrbitOptions& opts) {
  if (!(period > 0)) throw DomainError("equilibrium_orbits: period must be positive");
  std::vector<PeriodicOrbit> out;
  const double dedupe = 1e-8 * (1.0 + sys.state_box().diameter());
  const auto& letters = sys.control_range().letters;
  for (int l = 0; l < static_cast<int>(letters.size()); ++l) {
    std::vector<Vec> found;
    for (const Vec& seed : seeds) {
      Vec x = seed;
      if (!newton_root(sys, letters[l], x, opts.max_newton)) continue;
      if (!sys.state_box().contains(x)) continue;
      bool dup = false;
      for (const Vec& y : found) dup = dup || (x - y).norm() < dedupe;
      if (dup) continue;
      found.push_back(x);
      PeriodicOrbit orbit;
      orbit.x0 = x;
      orbit.u = ControlSignal::constant(letters[l], period, /*periodic=*/true);
      orbit.period = period;
      orbit.letter = l;
      orbit.closure_defect = closure_defect(sys, x, orbit.u, period, opts);
      const double tol = opts.closure_tol_factor * sys.state_box().diameter();
      if (orbit.closure_defect <= tol) out.push_back(std::move(orbit));
    }
  }
  return out;
}

std::optional<PeriodicOrbit> refine_cycle_orbit(const ControlSystem& sys,
                                                const std::vector<int>& letters, double dwell,
                                                const Vec& x_guess, const OrbitOptions& opts) {
  if (letters.empty()) throw DomainError("refine_cycle_orbit: empty letter sequence");
  std::vector<Vec> values;
  values.reserve(letters.size());
  for (int l : letters) values.push_back(sys.control_range().letters.at(l));
  ControlSignal u = ControlSignal::steps(values, dwell, /*periodic=*/true);
  const double period = u.duration();
  const double tol = opts.closure_tol_factor * sys.state_box().diameter();

  IntegrateOptions io;
  io.step = opts.step;
  io.box_inflation = opts.box_inflation;
  io.with_variation = true;

  Vec x = x_guess;
  double defect = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_newton; ++it) {
    Trajectory tr;
    try {
      tr = integrate(sys, x, u, period, io);
    } catch (const Error&) {
      return std::nullopt;
    }
    const Vec g = tr.back() - x;
    defect = g.norm();
    if (defect <= tol) break;
    Mat A = tr.fundamental.back() - Mat::Identity(sys.state_dim(), sys.state_dim());
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible()) return std::nullopt;
    Vec dx = lu.solve(-g);
    // damped update, kept inside the working box
    double s = 1.0;
    bool moved = false;
    for (int back = 0; back < 20; ++back) {
      Vec xn = x + s * dx;
      if (sys.state_box().contains(xn, opts.box_inflation)) {
        try {
          Trajectory tn = integrate(sys, xn, u, period, io);
          if ((tn.back() - xn).norm() < defect) {
            x = xn;
            moved = true;
            break;
          }
        } catch (const Error&) {
        }
      }
      s *= 0.5;
    }
    if (!moved) break;
  }
  defect = closure_defect(sys, x, u, period, opts);
  if (defect > tol) return std::nullopt;
  PeriodicOrbit orbit;
  orbit.x0 = x;
  orbit.u = std::move(u);
  orbit.period = period;
  orbit.closure_defect = defect;
  return orbit;
}

double floquet_exponent(const ControlSystem& sys, const PeriodicOrbit& orbit, FloquetWhich which,
                        const FloquetOptions& opts) {
  const double tol = opts.closure_tol_factor * sys.state_box().diameter();
  if (orbit.closure_defect > tol)
    throw OrbitNotClosed("floquet_exponent: orbit closure defect " +
                         std::to_string(orbit.closure_defect) + " exceeds tolerance");
  const double tau = orbit.period;

  if (which.kind == FloquetWhich::gamma) {
    IntegrateOptions io;
    io.step = opts.cocycle.step;
    io.box_inflation = opts.cocycle.box_inflation;
    io.with_variation = true;
    Trajectory tr = integrate(sys, orbit.x0, orbit.u, tau, io);
    const Mat M = tr.fundamental.back();
    Eigen::EigenSolver<Mat> eig(M);
    std::vector<double> logmag(sys.state_dim());
    for (int i = 0; i < sys.state_dim(); ++i) logmag[i] = std::log(std::abs(eig.eigenvalues()[i]));
    std::sort(logmag.begin(), logmag.end(), std::greater<double>());
    int k = which.unstable_dim;
    if (k < 0) k = static_cast<int>(std::count_if(logmag.begin(), logmag.end(),
                                                  [](double v) { return v > 0.0; }));
    if (k > sys.state_dim()) throw InvalidDim("floquet_exponent: unstable dimension out of range");
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += logmag[i];
    return s / tau;
  }

  // kappa: inf over n of kappa_{n tau} / (n tau), n <= kappa_max_repeats
  std::vector<double> times;
  for (int n = 1; n <= opts.kappa_max_repeats; ++n) times.push_back(n * tau);
  const auto sweep = variational_sweep(sys, orbit.x0, orbit.u, times, opts.cocycle);
  std::vector<double> kappa(sweep.size());
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    double s = 0.0;
    for (double v : sweep[i].log_sv) s += std::max(0.0, v);
    kappa[i] = s;
  }
  // Fekete check: kappa_{(m+n) tau} <= kappa_{m tau} + kappa_{n tau} + slack
  for (std::size_t m = 1; m <= kappa.size(); ++m) {
    for (std::size_t n = 1; m + n <= kappa.size(); ++n) {
      if (kappa[m + n - 1] > kappa[m - 1] + kappa[n - 1] + opts.fekete_slack)
        log_warn("floquet_exponent: Fekete monotonicity violated at n=" + std::to_string(m + n));
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kappa.size(); ++i)
    best = std::min(best, kappa[i] / (static_cast<double>(i + 1) * tau));
  return best;
}

}  // namespace iel

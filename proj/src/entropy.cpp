#include "iel/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iel/errors.hpp"

namespace iel {

EntropyEstimate entropy_from_counts(const std::vector<std::pair<double, std::int64_t>>& counts) {
  if (counts.size() < 3)
    throw InsufficientData("entropy_from_counts: need at least three horizons");
  EntropyEstimate est;
  for (const auto& [tau, r] : counts) {
    if (!(tau > 0) || r < 1) throw DomainError("entropy_from_counts: bad (tau, count) pair");
    est.taus.push_back(tau);
    est.counts.push_back(r);
  }
  // least-squares slope of log r against tau
  const std::size_t n = est.taus.size();
  double st = 0, sy = 0, stt = 0, sty = 0;
  double fekete = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = est.taus[i];
    const double y = std::log(static_cast<double>(est.counts[i]));
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    fekete = std::min(fekete, y / t);
  }
  const double denom = n * stt - st * st;
  if (std::abs(denom) < 1e-12) throw InsufficientData("entropy_from_counts: degenerate tau grid");
  est.h_fit = (n * sty - st * sy) / denom;
  est.h_fekete = fekete;
  return est;
}

double h_inv_spectral(const TransitionGraph& graph, const CellSet& component,
                      const HyperbolicSplittingEstimate& splitting, CycleRatioMethod method) {
  if (!splitting.hyperbolic)
    throw UntrustedSplitting(
        "h_inv_spectral: splitting is not trusted (an exponent sits inside the gap margin)");
  const SpectrumEstimate est =
      morse_spectrum_bounds(graph, component, CocycleWeight::gamma, splitting.unstable_dim, method);
  return est.lo;
}

ReconcileReport reconcile(const EntropyEstimate& spanning, double spectral, double tolerance) {
  ReconcileReport rep;
  rep.spanning_upper = spanning.h_fekete;
  rep.spectral = spectral;
  rep.gap = spanning.h_fekete - spectral;
  rep.tolerance = tolerance;
  rep.pass = spectral <= spanning.h_fekete + tolerance;
  rep.note = rep.pass ? "spectral value consistent with the spanning upper estimate"
                      : "spectral value exceeds the spanning upper estimate beyond tolerance";
  return rep;
}

}  // namespace iel

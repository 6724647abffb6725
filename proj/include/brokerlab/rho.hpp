#pragma once

#include <cstdint>

#include "brokerlab/measure.hpp"

namespace brokerlab {

/// Decomposed evaluation of the expected gain-from-trade functionals at a
/// price p: rho = rho_tilde + atom_correction, and atom_correction vanishes
/// wherever the measure has no point mass.
struct RhoValue {
  double p = 0.0;
  double rho_tilde = 0.0;
  double rho = 0.0;
  double atom_correction = 0.0;
};

/// rho~(mu)(p) = ∫_0^p (mu[0,λ] + mu[0,λ)) dλ + (mu[0,p] + mu[0,p))(mu̅ − p).
double rho_tilde(const Measure& m, double p);

/// rho(mu)(p) = rho~(mu)(p) + mu{p}·(∫_0^p mu[0,λ] dλ + ∫_p^1 mu[λ,1] dλ).
/// Equals E[gft(p, V, V')] for V, V' i.i.d. from m.
double rho(const Measure& m, double p);

/// Both parts at once.
RhoValue rho_value(const Measure& m, double p);

/// Independent second formula for measures with a density:
/// 2·∫_0^p ∫_0^λ f + 2·(mu̅ − p)·∫_0^p f, accumulated directly over the
/// pieces rather than through the CDF tables. Throws std::invalid_argument
/// when the measure is not a piecewise-constant density.
double rho_bounded_density(const Measure& m, double p);

struct PriceValue {
  double price = 0.0;
  double value = 0.0;
};

/// Exact maximizer of rho. Density-bounded measures maximize at the mean;
/// atomic measures are searched over atoms, midpoints between consecutive
/// atoms, and the endpoints 0 and 1 (rho is constant on each open interval
/// between atoms). Ties break toward the smallest price.
PriceValue argmax_rho(const Measure& m);

/// rho~(mu)(mu̅) − rho~(mu)(p), the cost of posting p instead of the mean.
double approximation_gap(const Measure& m, double p);

struct MeanBounds {
  double estimate = 0.0;
  double gap = 0.0;
};

/// Discretized-mean estimate (1/T0)·Σ_{t=1..T0} P[t/T0 ≤ X] and its gap
/// mean − estimate, which lies in [0, 1/T0]. Throws std::domain_error for
/// T0 < 1.
MeanBounds discretized_mean_bounds(const Measure& m, std::int64_t T0);

}  // namespace brokerlab

#include "brokerlab/rho.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace brokerlab {

namespace {

void check_price(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("price must lie in [0,1], got " + std::to_string(p));
  }
}

}  // namespace

double rho_tilde(const Measure& m, double p) {
  check_price(p);
  // ∫_0^p mu[0,λ) dλ equals ∫_0^p mu[0,λ] dλ: the integrands differ only on
  // the countable set of atoms.
  return 2.0 * m.cdf_integral(0.0, p) +
         (m.cdf(p) + m.cdf_left(p)) * (m.mean() - p);
}

RhoValue rho_value(const Measure& m, double p) {
  RhoValue out;
  out.p = p;
  out.rho_tilde = rho_tilde(m, p);
  const double a = m.atom(p);
  if (a > 0.0) {
    out.atom_correction =
        a * (m.cdf_integral(0.0, p) + m.survival_integral(p, 1.0));
  }
  out.rho = out.rho_tilde + out.atom_correction;
  return out;
}

double rho(const Measure& m, double p) { return rho_value(m, p).rho; }

double rho_bounded_density(const Measure& m, double p) {
  check_price(p);
  const auto* d = dynamic_cast<const PiecewiseConstantDensity*>(&m);
  if (d == nullptr) {
    throw std::invalid_argument(
        "rho_bounded_density requires a piecewise-constant density");
  }
  const auto& bp = d->breakpoints();
  const auto& h = d->heights();
  double cdf_at_start = 0.0;  // F at the current piece's left edge
  double double_int = 0.0;    // ∫_0^p ∫_0^λ f
  double mass_below = 0.0;    // ∫_0^p f
  double mu = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double lo = bp[i];
    const double hi = bp[i + 1];
    mu += h[i] * (hi + lo) * (hi - lo) * 0.5;
    if (lo < p) {
      const double seg = std::min(hi, p) - lo;
      double_int += cdf_at_start * seg + h[i] * seg * seg * 0.5;
      mass_below += h[i] * seg;
    }
    cdf_at_start += h[i] * (hi - lo);
  }
  return 2.0 * double_int + 2.0 * (mu - p) * mass_below;
}

PriceValue argmax_rho(const Measure& m) {
  if (m.density_bound().has_value()) {
    const double mu = m.mean();
    return {mu, rho(m, mu)};
  }
  const std::vector<double> atoms = m.atom_locations();
  if (atoms.empty()) {
    throw std::logic_error("argmax_rho: measure has neither density bound nor atoms");
  }
  std::vector<double> candidates;
  candidates.reserve(2 * atoms.size() + 2);
  candidates.push_back(0.0);
  candidates.push_back(1.0);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    candidates.push_back(atoms[i]);
    if (i + 1 < atoms.size()) {
      candidates.push_back(0.5 * (atoms[i] + atoms[i + 1]));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  PriceValue best{candidates.front(), rho(m, candidates.front())};
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = rho(m, candidates[i]);
    if (v > best.value) best = {candidates[i], v};  // ties keep the smaller price
  }
  return best;
}

double approximation_gap(const Measure& m, double p) {
  check_price(p);
  return rho_tilde(m, m.mean()) - rho_tilde(m, p);
}

MeanBounds discretized_mean_bounds(const Measure& m, std::int64_t T0) {
  if (T0 < 1) {
    throw std::domain_error("discretized_mean_bounds requires T0 >= 1");
  }
  double sum = 0.0;
  for (std::int64_t t = 1; t <= T0; ++t) {
    const double threshold = static_cast<double>(t) / static_cast<double>(T0);
    sum += 1.0 - m.cdf_left(threshold);  // P[threshold <= X]
  }
  MeanBounds out;
  out.estimate = sum / static_cast<double>(T0);
  out.gap = m.mean() - out.estimate;
  return out;
}

}  // namespace brokerlab

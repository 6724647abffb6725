#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "brokerlab/gft.hpp"
#include "brokerlab/rng.hpp"

namespace brokerlab {

/// Probability measure on [0,1] exposing the exact queries the expected
/// gain-from-trade functionals need. All integral queries are closed forms of
/// the stored representation; nothing is approximated by quadrature.
/// Implementations are immutable after construction (except EmpiricalMeasure,
/// which is owned by a single learner) and safe to share across threads.
class Measure {
 public:
  virtual ~Measure() = default;

  /// mu[0, lambda] — the right-continuous CDF.
  virtual double cdf(double lambda) const = 0;
  /// mu[0, lambda) — the left limit of the CDF.
  virtual double cdf_left(double lambda) const = 0;
  /// mu{p} — point mass at p (exact location match).
  virtual double atom(double p) const = 0;
  /// ∫ x dmu(x).
  virtual double mean() const = 0;
  /// ∫_a^b mu[0, lambda] d lambda, exact.
  virtual double cdf_integral(double a, double b) const = 0;
  /// ∫_a^b mu[lambda, 1] d lambda, exact.
  virtual double survival_integral(double a, double b) const = 0;
  /// Upper bound on the density when the measure has one, else empty.
  virtual std::optional<double> density_bound() const = 0;
  /// Locations carrying positive point mass, ascending; empty for densities.
  virtual std::vector<double> atom_locations() const = 0;
  /// Inverse-CDF (or categorical) draw from the stream.
  virtual Valuation sample(RngStream& rng) const = 0;
};

/// Density that is constant on each piece of a partition of [0,1].
/// breakpoints: ascending, first 0, last 1; heights: one per piece, >= 0;
/// total mass must equal 1 within 1e-12 (no renormalization is applied).
class PiecewiseConstantDensity final : public Measure {
 public:
  PiecewiseConstantDensity(std::vector<double> breakpoints,
                           std::vector<double> heights);

  double cdf(double lambda) const override;
  double cdf_left(double lambda) const override;
  double atom(double p) const override;
  double mean() const override;
  double cdf_integral(double a, double b) const override;
  double survival_integral(double a, double b) const override;
  std::optional<double> density_bound() const override;
  std::vector<double> atom_locations() const override;
  Valuation sample(RngStream& rng) const override;

  const std::vector<double>& breakpoints() const noexcept { return breaks_; }
  const std::vector<double>& heights() const noexcept { return heights_; }

 private:
  std::size_t piece_index(double x) const noexcept;
  double cdf_antiderivative(double x) const noexcept;

  std::vector<double> breaks_;
  std::vector<double> heights_;
  std::vector<double> mass_at_;     // CDF value at each breakpoint
  std::vector<double> cdf_int_at_;  // ∫_0^{break} CDF at each breakpoint
  double mean_ = 0.0;
  double max_height_ = 0.0;
};

/// Uniform distribution on [0,1] as a single-piece density.
PiecewiseConstantDensity uniform_measure();

/// Finitely many point masses. Duplicate locations are merged and zero
/// weights dropped at construction; remaining weights must sum to 1 within
/// 1e-12.
class FiniteAtomicMeasure final : public Measure {
 public:
  explicit FiniteAtomicMeasure(std::vector<std::pair<double, double>> atoms);

  double cdf(double lambda) const override;
  double cdf_left(double lambda) const override;
  double atom(double p) const override;
  double mean() const override;
  double cdf_integral(double a, double b) const override;
  double survival_integral(double a, double b) const override;
  std::optional<double> density_bound() const override;
  std::vector<double> atom_locations() const override;
  Valuation sample(RngStream& rng) const override;

  const std::vector<double>& locations() const noexcept { return locs_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<double> locs_;
  std::vector<double> weights_;
  std::vector<double> cum_;     // cum_[i] = sum of weights_[0..i)
  std::vector<double> moment_;  // moment_[i] = sum of weights_[j]*locs_[j], j<i
};

/// Uniform atomic measure over an observed sample multiset, equal to a
/// FiniteAtomicMeasure with weight multiplicity/n per distinct point.
/// Mutable via insert(); owned by one learner, not shared across threads.
class EmpiricalMeasure final : public Measure {
 public:
  EmpiricalMeasure() = default;

  void insert(Valuation v);
  std::int64_t size() const noexcept { return n_; }

  double cdf(double lambda) const override;
  double cdf_left(double lambda) const override;
  double atom(double p) const override;
  double mean() const override;
  double cdf_integral(double a, double b) const override;
  double survival_integral(double a, double b) const override;
  std::optional<double> density_bound() const override;
  std::vector<double> atom_locations() const override;
  Valuation sample(RngStream& rng) const override;

  const std::vector<double>& distinct_values() const noexcept { return values_; }
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

 private:
  void ensure_tables() const;
  void require_nonempty() const;

  std::vector<double> values_;  // distinct, ascending
  std::vector<std::int64_t> counts_;
  std::int64_t n_ = 0;

  mutable bool tables_ok_ = false;
  mutable std::vector<double> cum_;
  mutable std::vector<double> moment_;
};

}  // namespace brokerlab

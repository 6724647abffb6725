#include "brokerlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace brokerlab {

namespace {

constexpr double kMassTolerance = 1e-12;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::domain_error("cdf query point must lie in [0,1], got " +
                            std::to_string(lambda));
  }
}

void check_range(double a, double b) {
  if (!(a >= 0.0 && b <= 1.0 && a <= b)) {
    throw std::domain_error("integral range must satisfy 0 <= a <= b <= 1, got [" +
                            std::to_string(a) + ", " + std::to_string(b) + "]");
  }
}

// Shared step-CDF algebra over (locs, prefix weights, prefix moments).
// cum[i] holds the total weight of locs[0..i); moment[i] the corresponding
// first moment.
struct StepTables {
  const std::vector<double>& locs;
  const std::vector<double>& cum;
  const std::vector<double>& moment;

  double cdf(double lambda) const {
    const auto it = std::upper_bound(locs.begin(), locs.end(), lambda);
    return cum[static_cast<std::size_t>(it - locs.begin())];
  }
  double cdf_left(double lambda) const {
    const auto it = std::lower_bound(locs.begin(), locs.end(), lambda);
    return cum[static_cast<std::size_t>(it - locs.begin())];
  }
  // ∫_a^b F for the step CDF: atoms at or below a contribute over the whole
  // range, atoms inside (a,b] from their location on.
  double cdf_integral(double a, double b) const {
    const std::size_t ia =
        static_cast<std::size_t>(std::upper_bound(locs.begin(), locs.end(), a) -
                                 locs.begin());
    const std::size_t ib =
        static_cast<std::size_t>(std::upper_bound(locs.begin(), locs.end(), b) -
                                 locs.begin());
    return cum[ia] * (b - a) + b * (cum[ib] - cum[ia]) - (moment[ib] - moment[ia]);
  }
  std::size_t sample_index(double u) const {
    // first index whose cumulative weight (cum[i+1]) exceeds u
    const auto it = std::upper_bound(cum.begin() + 1, cum.end(), u);
    std::size_t i = static_cast<std::size_t>(it - (cum.begin() + 1));
    if (i >= locs.size()) i = locs.size() - 1;
    return i;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// PiecewiseConstantDensity

PiecewiseConstantDensity::PiecewiseConstantDensity(
    std::vector<double> breakpoints, std::vector<double> heights)
    : breaks_(std::move(breakpoints)), heights_(std::move(heights)) {
  if (breaks_.size() < 2 || heights_.size() + 1 != breaks_.size()) {
    throw std::invalid_argument(
        "piecewise density needs k+1 breakpoints for k heights, k >= 1");
  }
  if (breaks_.front() != 0.0 || breaks_.back() != 1.0) {
    throw std::invalid_argument("breakpoints must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    if (!(breaks_[i] < breaks_[i + 1])) {
      throw std::invalid_argument(
          "breakpoints must be strictly ascending (zero-width pieces rejected)");
    }
  }
  for (double h : heights_) {
    if (!(h >= 0.0) || !std::isfinite(h)) {
      throw std::invalid_argument("piece heights must be finite and >= 0");
    }
  }

  const std::size_t k = heights_.size();
  mass_at_.assign(k + 1, 0.0);
  cdf_int_at_.assign(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double len = breaks_[i + 1] - breaks_[i];
    mass_at_[i + 1] = mass_at_[i] + heights_[i] * len;
    cdf_int_at_[i + 1] =
        cdf_int_at_[i] + mass_at_[i] * len + heights_[i] * len * len * 0.5;
    mean_ += heights_[i] *
             (breaks_[i + 1] * breaks_[i + 1] - breaks_[i] * breaks_[i]) * 0.5;
    max_height_ = std::max(max_height_, heights_[i]);
  }
  if (std::abs(mass_at_.back() - 1.0) > kMassTolerance) {
    throw std::invalid_argument("piecewise density mass is " +
                                std::to_string(mass_at_.back()) +
                                ", must equal 1 within 1e-12");
  }
}

std::size_t PiecewiseConstantDensity::piece_index(double x) const noexcept {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - breaks_.begin());
  i = (i == 0) ? 0 : i - 1;
  if (i >= heights_.size()) i = heights_.size() - 1;
  return i;
}

double PiecewiseConstantDensity::cdf(double lambda) const {
  check_lambda(lambda);
  const std::size_t i = piece_index(lambda);
  return mass_at_[i] + heights_[i] * (lambda - breaks_[i]);
}

double PiecewiseConstantDensity::cdf_left(double lambda) const {
  return cdf(lambda);
}

double PiecewiseConstantDensity::atom(double p) const {
  check_lambda(p);
  return 0.0;
}

double PiecewiseConstantDensity::mean() const { return mean_; }

double PiecewiseConstantDensity::cdf_antiderivative(double x) const noexcept {
  const std::size_t i = piece_index(x);
  const double d = x - breaks_[i];
  return cdf_int_at_[i] + mass_at_[i] * d + heights_[i] * d * d * 0.5;
}

double PiecewiseConstantDensity::cdf_integral(double a, double b) const {
  check_range(a, b);
  return cdf_antiderivative(b) - cdf_antiderivative(a);
}

double PiecewiseConstantDensity::survival_integral(double a, double b) const {
  check_range(a, b);
  return (b - a) - cdf_integral(a, b);
}

std::optional<double> PiecewiseConstantDensity::density_bound() const {
  return max_height_;
}

std::vector<double> PiecewiseConstantDensity::atom_locations() const {
  return {};
}

Valuation PiecewiseConstantDensity::sample(RngStream& rng) const {
  const double u = rng.next_unit();
  const auto it = std::upper_bound(mass_at_.begin(), mass_at_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - mass_at_.begin());
  i = (i == 0) ? 0 : i - 1;
  if (i >= heights_.size()) i = heights_.size() - 1;
  while (i > 0 && heights_[i] == 0.0) --i;
  double x = breaks_[i];
  if (heights_[i] > 0.0) x += (u - mass_at_[i]) / heights_[i];
  x = std::clamp(x, breaks_[i], breaks_[i + 1]);
  return Valuation(x);
}

PiecewiseConstantDensity uniform_measure() {
  return PiecewiseConstantDensity({0.0, 1.0}, {1.0});
}

// ---------------------------------------------------------------------------
// FiniteAtomicMeasure

FiniteAtomicMeasure::FiniteAtomicMeasure(
    std::vector<std::pair<double, double>> atoms) {
  for (const auto& [loc, w] : atoms) {
    if (!(loc >= 0.0 && loc <= 1.0)) {
      throw std::invalid_argument("atom location must lie in [0,1]");
    }
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("atom weight must be finite and >= 0");
    }
  }
  std::sort(atoms.begin(), atoms.end());
  for (const auto& [loc, w] : atoms) {
    if (w == 0.0) continue;  // dropped
    if (!locs_.empty() && locs_.back() == loc) {
      weights_.back() += w;  // merge duplicates
    } else {
      locs_.push_back(loc);
      weights_.push_back(w);
    }
  }
  if (locs_.empty()) {
    throw std::invalid_argument("atomic measure needs at least one positive atom");
  }
  cum_.assign(locs_.size() + 1, 0.0);
  moment_.assign(locs_.size() + 1, 0.0);
  for (std::size_t i = 0; i < locs_.size(); ++i) {
    cum_[i + 1] = cum_[i] + weights_[i];
    moment_[i + 1] = moment_[i] + weights_[i] * locs_[i];
  }
  if (std::abs(cum_.back() - 1.0) > kMassTolerance) {
    throw std::invalid_argument("atomic weights sum to " +
                                std::to_string(cum_.back()) +
                                ", must equal 1 within 1e-12");
  }
}

double FiniteAtomicMeasure::cdf(double lambda) const {
  check_lambda(lambda);
  return StepTables{locs_, cum_, moment_}.cdf(lambda);
}

double FiniteAtomicMeasure::cdf_left(double lambda) const {
  check_lambda(lambda);
  return StepTables{locs_, cum_, moment_}.cdf_left(lambda);
}

double FiniteAtomicMeasure::atom(double p) const {
  check_lambda(p);
  const auto it = std::lower_bound(locs_.begin(), locs_.end(), p);
  if (it != locs_.end() && *it == p) {
    return weights_[static_cast<std::size_t>(it - locs_.begin())];
  }
  return 0.0;
}

double FiniteAtomicMeasure::mean() const { return moment_.back(); }

double FiniteAtomicMeasure::cdf_integral(double a, double b) const {
  check_range(a, b);
  return StepTables{locs_, cum_, moment_}.cdf_integral(a, b);
}

double FiniteAtomicMeasure::survival_integral(double a, double b) const {
  check_range(a, b);
  return (b - a) - cdf_integral(a, b);
}

std::optional<double> FiniteAtomicMeasure::density_bound() const {
  return std::nullopt;
}

std::vector<double> FiniteAtomicMeasure::atom_locations() const { return locs_; }

Valuation FiniteAtomicMeasure::sample(RngStream& rng) const {
  const std::size_t i =
      StepTables{locs_, cum_, moment_}.sample_index(rng.next_unit());
  return Valuation(locs_[i]);
}

// ---------------------------------------------------------------------------
// EmpiricalMeasure

void EmpiricalMeasure::insert(Valuation v) {
  const double x = v.value();
  const auto it = std::lower_bound(values_.begin(), values_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - values_.begin());
  if (it != values_.end() && *it == x) {
    ++counts_[i];
  } else {
    values_.insert(it, x);
    counts_.insert(counts_.begin() + static_cast<std::ptrdiff_t>(i), 1);
  }
  ++n_;
  tables_ok_ = false;
}

void EmpiricalMeasure::require_nonempty() const {
  if (n_ == 0) {
    throw std::logic_error("empirical measure query before any sample");
  }
}

void EmpiricalMeasure::ensure_tables() const {
  if (tables_ok_) return;
  const std::size_t k = values_.size();
  cum_.assign(k + 1, 0.0);
  moment_.assign(k + 1, 0.0);
  std::int64_t running = 0;
  double moment_raw = 0.0;
  const double n = static_cast<double>(n_);
  for (std::size_t i = 0; i < k; ++i) {
    running += counts_[i];
    moment_raw += static_cast<double>(counts_[i]) * values_[i];
    cum_[i + 1] = static_cast<double>(running) / n;
    moment_[i + 1] = moment_raw / n;
  }
  tables_ok_ = true;
}

double EmpiricalMeasure::cdf(double lambda) const {
  check_lambda(lambda);
  require_nonempty();
  ensure_tables();
  return StepTables{values_, cum_, moment_}.cdf(lambda);
}

double EmpiricalMeasure::cdf_left(double lambda) const {
  check_lambda(lambda);
  require_nonempty();
  ensure_tables();
  return StepTables{values_, cum_, moment_}.cdf_left(lambda);
}

double EmpiricalMeasure::atom(double p) const {
  check_lambda(p);
  require_nonempty();
  const auto it = std::lower_bound(values_.begin(), values_.end(), p);
  if (it != values_.end() && *it == p) {
    const std::size_t i = static_cast<std::size_t>(it - values_.begin());
    return static_cast<double>(counts_[i]) / static_cast<double>(n_);
  }
  return 0.0;
}

double EmpiricalMeasure::mean() const {
  require_nonempty();
  ensure_tables();
  return moment_.back();
}

double EmpiricalMeasure::cdf_integral(double a, double b) const {
  check_range(a, b);
  require_nonempty();
  ensure_tables();
  return StepTables{values_, cum_, moment_}.cdf_integral(a, b);
}

double EmpiricalMeasure::survival_integral(double a, double b) const {
  check_range(a, b);
  return (b - a) - cdf_integral(a, b);
}

std::optional<double> EmpiricalMeasure::density_bound() const {
  return std::nullopt;
}

std::vector<double> EmpiricalMeasure::atom_locations() const {
  require_nonempty();
  return values_;
}

Valuation EmpiricalMeasure::sample(RngStream& rng) const {
  require_nonempty();
  ensure_tables();
  const std::size_t i =
      StepTables{values_, cum_, moment_}.sample_index(rng.next_unit());
  return Valuation(values_[i]);
}

}  // namespace brokerlab

#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

namespace brokerlab {

namespace detail {
inline double checked_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0,1], got " +
                            std::to_string(v));
  }
  return v;
}
}  // namespace detail

/// A trading price in [0,1]. Validated once at construction.
class Price {
 public:
  explicit Price(double value) : value_(detail::checked_unit(value, "Price")) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// A trader's private valuation in [0,1]. Validated once at construction.
class Valuation {
 public:
  explicit Valuation(double value)
      : value_(detail::checked_unit(value, "Valuation")) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Gain from trade of price p for a pair of valuations:
/// (v1 ∨ v2 − v1 ∧ v2) · 1{v1 ∧ v2 ≤ p ≤ v1 ∨ v2}.
/// The trade indicator is non-strict on both sides.
inline double gft(Price p, Valuation v1, Valuation v2) noexcept {
  const double lo = std::min(v1.value(), v2.value());
  const double hi = std::max(v1.value(), v2.value());
  return (lo <= p.value() && p.value() <= hi) ? hi - lo : 0.0;
}

}  // namespace brokerlab

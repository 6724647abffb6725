#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "brokerlab/measure.hpp"
#include "brokerlab/rho.hpp"

namespace brokerlab {

enum class InstanceFamily {
  uniform,
  bounded_spike,
  discrete_four,
  needle_three,
  custom_piecewise,
  custom_atomic,
};

/// Declarative description of a valuation distribution: a built-in family
/// with parameters, or a custom piecewise density / atomic measure.
struct InstanceSpec {
  InstanceFamily family = InstanceFamily::uniform;
  double M = 0.0;        // bounded_spike
  double epsilon = 0.0;  // bounded_spike, discrete_four
  double x = 0.0;        // needle_three
  std::vector<double> breakpoints;               // custom_piecewise
  std::vector<double> heights;                   // custom_piecewise
  std::vector<std::pair<double, double>> atoms;  // custom_atomic

  bool operator==(const InstanceSpec&) const = default;
};

/// Base uniform density warped by an epsilon imbalance on [1/7, 2/7] and a
/// mass-M spike on J_M = [1/2 − 1/(14M), 1/2 + 1/(14M)]. Total mass 1 by
/// construction (never renormalized); mean is 1/2 + epsilon/196.
/// Requires M >= 2 and |epsilon| <= 1.
PiecewiseConstantDensity make_bounded_spike(double M, double epsilon);

/// Four atoms: 1/4 at 0, 1/4 + epsilon at 1/3, 1/4 − epsilon at 2/3, 1/4
/// at 1. Requires |epsilon| <= 1/4; mean is 1/2 − epsilon/3.
FiniteAtomicMeasure make_discrete_four(double epsilon);

/// Three equal atoms at 0, x, 1 with x in (0,1) strictly. The unique
/// rho-maximizer is x with value 4/9; every other price is suboptimal by at
/// least 2x/9 on (x,1] and (2−2x)/9 on [0,x).
FiniteAtomicMeasure make_needle_three(double x);

/// Materialize the described measure.
std::unique_ptr<Measure> make_measure(const InstanceSpec& spec);

/// Exact best fixed price and its rho value for regret accounting.
PriceValue optimal_benchmark(const Measure& m);
PriceValue optimal_benchmark(const InstanceSpec& spec);

/// Short human-readable tag, e.g. "bounded_spike(M=10,eps=0)".
std::string instance_label(const InstanceSpec& spec);

}  // namespace brokerlab

#include "brokerlab/instances.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace brokerlab {

PiecewiseConstantDensity make_bounded_spike(double M, double epsilon) {
  if (!(M >= 2.0) || !std::isfinite(M)) {
    throw std::domain_error("bounded_spike requires M >= 2");
  }
  if (!(epsilon >= -1.0 && epsilon <= 1.0)) {
    throw std::domain_error("bounded_spike requires |epsilon| <= 1");
  }
  const double half_width = 1.0 / (14.0 * M);
  std::vector<double> breaks = {0.0,
                                1.0 / 7.0,
                                3.0 / 14.0,
                                2.0 / 7.0,
                                3.0 / 7.0,
                                0.5 - half_width,
                                0.5 + half_width,
                                4.0 / 7.0,
                                1.0};
  std::vector<double> heights = {1.0, 1.0 - epsilon, 1.0 + epsilon, 1.0,
                                 0.0, M,             0.0,           1.0};
  return PiecewiseConstantDensity(std::move(breaks), std::move(heights));
}

FiniteAtomicMeasure make_discrete_four(double epsilon) {
  if (!(epsilon >= -0.25 && epsilon <= 0.25)) {
    throw std::domain_error("discrete_four requires |epsilon| <= 1/4");
  }
  return FiniteAtomicMeasure({{0.0, 0.25},
                              {1.0 / 3.0, 0.25 + epsilon},
                              {2.0 / 3.0, 0.25 - epsilon},
                              {1.0, 0.25}});
}

FiniteAtomicMeasure make_needle_three(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("needle_three requires x strictly inside (0,1)");
  }
  const double third = 1.0 / 3.0;
  return FiniteAtomicMeasure({{0.0, third}, {x, third}, {1.0, third}});
}

std::unique_ptr<Measure> make_measure(const InstanceSpec& spec) {
  switch (spec.family) {
    case InstanceFamily::uniform:
      return std::make_unique<PiecewiseConstantDensity>(uniform_measure());
    case InstanceFamily::bounded_spike:
      return std::make_unique<PiecewiseConstantDensity>(
          make_bounded_spike(spec.M, spec.epsilon));
    case InstanceFamily::discrete_four:
      return std::make_unique<FiniteAtomicMeasure>(
          make_discrete_four(spec.epsilon));
    case InstanceFamily::needle_three:
      return std::make_unique<FiniteAtomicMeasure>(make_needle_three(spec.x));
    case InstanceFamily::custom_piecewise:
      return std::make_unique<PiecewiseConstantDensity>(spec.breakpoints,
                                                        spec.heights);
    case InstanceFamily::custom_atomic:
      return std::make_unique<FiniteAtomicMeasure>(spec.atoms);
  }
  throw std::logic_error("unknown instance family");
}

PriceValue optimal_benchmark(const Measure& m) { return argmax_rho(m); }

PriceValue optimal_benchmark(const InstanceSpec& spec) {
  return optimal_benchmark(*make_measure(spec));
}

std::string instance_label(const InstanceSpec& spec) {
  std::ostringstream out;
  switch (spec.family) {
    case InstanceFamily::uniform:
      out << "uniform";
      break;
    case InstanceFamily::bounded_spike:
      out << "bounded_spike(M=" << spec.M << ",eps=" << spec.epsilon << ")";
      break;
    case InstanceFamily::discrete_four:
      out << "discrete_four(eps=" << spec.epsilon << ")";
      break;
    case InstanceFamily::needle_three:
      out << "needle_three(x=" << spec.x << ")";
      break;
    case InstanceFamily::custom_piecewise:
      out << "piecewise(" << spec.heights.size() << " pieces)";
      break;
    case InstanceFamily::custom_atomic:
      out << "atomic(" << spec.atoms.size() << " atoms)";
      break;
  }
  return out.str();
}

}  // namespace brokerlab

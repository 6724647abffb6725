#include "brokerlab/verify.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "brokerlab/instances.hpp"
#include "brokerlab/rho.hpp"

namespace brokerlab {

namespace {

constexpr double kClosedFormTol = 1e-12;
constexpr double kComposedTol = 1e-9;

struct NamedMeasure {
  std::string name;
  std::unique_ptr<Measure> measure;
};

std::vector<NamedMeasure> builtin_bench() {
  std::vector<NamedMeasure> out;
  out.push_back({"uniform",
                 std::make_unique<PiecewiseConstantDensity>(uniform_measure())});
  out.push_back({"bounded_spike(M=2,eps=0.3)",
                 std::make_unique<PiecewiseConstantDensity>(
                     make_bounded_spike(2.0, 0.3))});
  out.push_back({"bounded_spike(M=10,eps=-0.5)",
                 std::make_unique<PiecewiseConstantDensity>(
                     make_bounded_spike(10.0, -0.5))});
  out.push_back({"discrete_four(0.1)", std::make_unique<FiniteAtomicMeasure>(
                                           make_discrete_four(0.1))});
  out.push_back({"needle_three(0.4)", std::make_unique<FiniteAtomicMeasure>(
                                          make_needle_three(0.4))});
  return out;
}

std::vector<double> price_grid_21() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(static_cast<double>(i) / 20.0);
  return grid;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

SuiteReport verify_representation(std::uint64_t seed,
                                  std::int64_t pairs_per_cell) {
  SuiteReport report{"representation", {}};
  const auto bench = builtin_bench();
  const auto grid = price_grid_21();
  int total_cells = 0;
  int passed_cells = 0;
  std::uint64_t cell_id = 0;
  for (const auto& [name, m] : bench) {
    int cells_ok = 0;
    double worst_sigmas = 0.0;
    for (double p : grid) {
      const double expected = rho(*m, p);
      RngStream rng(seed, cell_id++, 0);
      double sum = 0.0;
      double sum_sq = 0.0;
      for (std::int64_t i = 0; i < pairs_per_cell; ++i) {
        const Valuation v1 = m->sample(rng);
        const Valuation v2 = m->sample(rng);
        const double g = gft(Price(p), v1, v2);
        sum += g;
        sum_sq += g * g;
      }
      const double n = static_cast<double>(pairs_per_cell);
      const double mc = sum / n;
      const double var = std::max(0.0, sum_sq / n - mc * mc);
      const double se = std::sqrt(var / n);
      bool cell_ok;
      if (se == 0.0) {
        cell_ok = std::abs(mc - expected) <= kClosedFormTol;
      } else {
        const double sigmas = std::abs(mc - expected) / se;
        worst_sigmas = std::max(worst_sigmas, sigmas);
        cell_ok = sigmas <= 3.0;
      }
      ++total_cells;
      if (cell_ok) {
        ++cells_ok;
        ++passed_cells;
      }
    }
    report.checks.push_back({"mc vs rho: " + name, cells_ok >= 16,
                             std::to_string(cells_ok) + "/21 cells within 3se"
                             ", worst " + fmt(worst_sigmas) + " sigma"});
  }
  report.checks.push_back(
      {"overall cells within 3se", passed_cells >= 100,
       std::to_string(passed_cells) + "/" + std::to_string(total_cells) +
           " (needs >= 100)"});
  return report;
}

SuiteReport verify_lemmas() {
  SuiteReport report{"lemmas", {}};
  const auto bench = builtin_bench();
  const auto grid = price_grid_21();

  // approximation bounds
  for (const auto& [name, m] : bench) {
    const double mu = m->mean();
    const auto bound = m->density_bound();
    bool ok = true;
    std::string detail;
    for (double p : grid) {
      const double gap = approximation_gap(*m, p);
      const double d = std::abs(mu - p);
      if (gap < -kClosedFormTol || gap > 2.0 * d + kClosedFormTol) {
        ok = false;
        detail = "gap " + fmt(gap) + " at p=" + fmt(p) + " outside [0, 2|mu-p|]";
        break;
      }
      if (bound.has_value()) {
        if (gap > *bound * d * d + kClosedFormTol) {
          ok = false;
          detail = "gap " + fmt(gap) + " at p=" + fmt(p) + " above M|mu-p|^2";
          break;
        }
        if (std::abs(rho(*m, p) - rho_tilde(*m, p)) > kClosedFormTol) {
          ok = false;
          detail = "rho != rho~ at p=" + fmt(p);
          break;
        }
      }
    }
    if (ok) detail = "21 prices within bounds";
    report.checks.push_back({"approximation bounds: " + name, ok, detail});
  }

  // discretized-mean bounds
  for (const auto& [name, m] : bench) {
    bool ok = true;
    std::string detail;
    for (std::int64_t T0 : {1, 3, 10, 100}) {
      const MeanBounds mb = discretized_mean_bounds(*m, T0);
      const double cap = 1.0 / static_cast<double>(T0);
      if (mb.gap < -kClosedFormTol || mb.gap > cap + kClosedFormTol) {
        ok = false;
        detail = "gap " + fmt(mb.gap) + " at T0=" + std::to_string(T0) +
                 " outside [0, 1/T0]";
        break;
      }
    }
    if (ok) detail = "T0 in {1,3,10,100} within bounds";
    report.checks.push_back({"discretized mean bounds: " + name, ok, detail});
  }
  return report;
}

SuiteReport verify_instances() {
  SuiteReport report{"instances", {}};

  // bounded spike: mass is checked at construction; mean, height, and the
  // quadratic gap law across the parameter grid
  {
    bool mean_ok = true;
    bool height_ok = true;
    bool gap_in_ok = true;
    bool gap_ext_ok = true;
    std::string detail;
    int in_regime_cells = 0;
    for (double M : {2.0, 7.0, 20.0}) {
      for (double eps : {-1.0, -0.3, 0.0, 0.3, 1.0}) {
        const auto m = make_bounded_spike(M, eps);
        const double mu = m.mean();
        if (std::abs(mu - (0.5 + eps / 196.0)) > kClosedFormTol) mean_ok = false;
        // M >= 2 >= 1 + |eps|, so the spike is always the tallest piece
        if (*m.density_bound() != M) height_ok = false;
        const double lo = 0.5 - 1.0 / (14.0 * M);
        const double hi = 0.5 + 1.0 / (14.0 * M);
        const bool in_regime = (mu >= lo && mu <= hi);
        // distance of the mean beyond the spike, zero when inside
        const double e = std::max(0.0, std::abs(mu - 0.5) - 1.0 / (14.0 * M));
        const double rho_mu = rho(m, mu);
        for (int k = 0; k <= 10; ++k) {
          const double p = lo + (hi - lo) * static_cast<double>(k) / 10.0;
          const double gap = rho_mu - rho(m, p);
          const double d = std::abs(mu - p);
          if (in_regime) {
            ++in_regime_cells;
            if (std::abs(gap - M * d * d) > kComposedTol) gap_in_ok = false;
          }
          if (std::abs(gap - M * (d * d - e * e)) > kComposedTol) {
            gap_ext_ok = false;
          }
        }
      }
    }
    report.checks.push_back({"bounded_spike mean = 1/2 + eps/196", mean_ok,
                             "grid M in {2,7,20} x eps in {-1,-0.3,0,0.3,1}"});
    report.checks.push_back(
        {"bounded_spike density bound = M", height_ok, "same grid"});
    report.checks.push_back(
        {"quadratic gap on J_M (mean inside spike)", gap_in_ok,
         std::to_string(in_regime_cells) + " cells, tol 1e-9"});
    report.checks.push_back(
        {"quadratic gap, extended form M(d^2-e^2), all cells", gap_ext_ok,
         "165 cells, tol 1e-9"});
  }

  // discrete four: mean and the sign structure of the 1/3-vs-2/3 gap
  {
    bool mean_ok = true;
    for (double eps : {-0.25, -0.1, 0.0, 0.1, 0.25}) {
      const auto m = make_discrete_four(eps);
      if (std::abs(m.mean() - (0.5 - eps / 3.0)) > kClosedFormTol) mean_ok = false;
    }
    report.checks.push_back(
        {"discrete_four mean = 1/2 - eps/3", mean_ok, "eps grid"});

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    bool positive = true;
    const int n = 10;
    for (int i = 1; i <= n; ++i) {
      const double eps = 0.01 * static_cast<double>(i);
      const auto m = make_discrete_four(eps);
      const double diff = rho(m, 1.0 / 3.0) - rho(m, 2.0 / 3.0);
      if (diff <= 0.0) positive = false;
      sx += eps;
      sy += diff;
      sxx += eps * eps;
      sxy += eps * diff;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    const bool linear_ok =
        positive && slope > 0.0 && std::abs(intercept) <= kComposedTol;
    report.checks.push_back(
        {"discrete_four gap rho(1/3)-rho(2/3) ~ eps", linear_ok,
         "slope " + fmt(slope) + ", intercept " + fmt(intercept)});

    bool argmax_ok = true;
    for (double eps : {0.05, 0.1}) {
      const auto m = make_discrete_four(eps);
      if (std::abs(argmax_rho(m).price - 1.0 / 3.0) > kClosedFormTol) {
        argmax_ok = false;
      }
    }
    report.checks.push_back(
        {"discrete_four argmax at 1/3 for eps > 0", argmax_ok, ""});
  }

  // needle: optimal value 4/9 at x, right-side gap 2x/9
  {
    bool ok = true;
    std::string detail = "x in {0.41, 0.45, 0.49}";
    for (double x : {0.41, 0.45, 0.49}) {
      const auto m = make_needle_three(x);
      const auto best = argmax_rho(m);
      if (std::abs(best.price - x) > kClosedFormTol ||
          std::abs(best.value - 4.0 / 9.0) > kClosedFormTol) {
        ok = false;
        detail = "argmax wrong at x=" + fmt(x);
        break;
      }
      const double best_right =
          std::max(rho(m, 0.5 * (x + 1.0)), rho(m, 1.0));
      if (std::abs((best.value - best_right) - 2.0 * x / 9.0) > kClosedFormTol) {
        ok = false;
        detail = "right-side gap != 2x/9 at x=" + fmt(x);
        break;
      }
      const double eta = 0.5 - x;
      double best_other = 0.0;
      for (int i = 0; i <= 10000; ++i) {
        const double p = static_cast<double>(i) / 10000.0;
        if (p == x) continue;
        best_other = std::max(best_other, rho(m, p));
      }
      best_other = std::max(best_other, best_right);
      if (best.value - best_other < (1.0 - 2.0 * eta) / 9.0 - kClosedFormTol) {
        ok = false;
        detail = "overall gap below (1-2eta)/9 at x=" + fmt(x);
        break;
      }
    }
    report.checks.push_back({"needle_three gap identities", ok, detail});
  }
  return report;
}

std::vector<SuiteReport> verify_all(std::uint64_t seed) {
  std::vector<SuiteReport> out;
  out.push_back(verify_representation(seed));
  out.push_back(verify_lemmas());
  out.push_back(verify_instances());
  return out;
}

}  // namespace brokerlab

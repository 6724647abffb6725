#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace brokerlab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

/// Monte-Carlo estimates of E[gft(p, V, V')] against rho over the built-in
/// instances and a price grid; each cell must land within 3 standard errors,
/// at least 100 of 105 cells overall.
SuiteReport verify_representation(std::uint64_t seed,
                                  std::int64_t pairs_per_cell = 200000);

/// Deterministic inequality grids: the approximation bounds
/// 0 <= rho~(mean) − rho~(p) <= min(2|mean−p|, M|mean−p|²) and the
/// discretized-mean bounds 0 <= gap <= 1/T0 (closed-form slack 1e-12).
SuiteReport verify_lemmas();

/// Factory identities: exact mass and mean, spike height, the quadratic-gap
/// law on the spike, the discrete-four sign structure, and the needle gaps.
SuiteReport verify_instances();

std::vector<SuiteReport> verify_all(std::uint64_t seed);

}  // namespace brokerlab

#include "brokerlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "brokerlab/instances.hpp"
#include "brokerlab/rho.hpp"

namespace brokerlab {

namespace {

std::vector<RoundRecord> run_episode_against(Learner& learner, const Measure& m,
                                             FeedbackMode mode, std::int64_t T,
                                             std::uint64_t seed,
                                             std::uint64_t replication,
                                             double benchmark_value) {
  std::vector<RoundRecord> records;
  records.reserve(static_cast<std::size_t>(T));
  double cum = 0.0;
  for (std::int64_t t = 1; t <= T; ++t) {
    const Price p = learner.propose(t);
    RngStream rng(seed, replication, static_cast<std::uint64_t>(t));
    const Valuation v1 = m.sample(rng);
    const Valuation v2 = m.sample(rng);
    const double realized = gft(p, v1, v2);
    const double expected = rho(m, p.value());
    const double inst = benchmark_value - expected;
    cum += inst;
    records.push_back({t, p.value(), realized, expected, inst, cum});
    if (mode == FeedbackMode::full) {
      learner.observe(FullFeedback{v1, v2});
    } else {
      learner.observe(
          TwoBitFeedback{p.value() <= v1.value(), p.value() <= v2.value()});
    }
  }
  return records;
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

std::vector<std::int64_t> default_checkpoints(std::int64_t T) {
  std::vector<std::int64_t> out;
  for (std::int64_t t = 16; t < T; t *= 2) out.push_back(t);
  out.push_back(T);
  return out;
}

std::vector<RoundRecord> run_episode(Learner& learner, const Measure& m,
                                     FeedbackMode mode, std::int64_t T,
                                     std::uint64_t seed,
                                     std::uint64_t replication) {
  if (T < 1) throw std::invalid_argument("horizon T must be >= 1");
  if (!learner.accepts(mode)) {
    throw std::invalid_argument(std::string(learner.name()) +
                                " does not accept the requested feedback mode");
  }
  const PriceValue best = optimal_benchmark(m);
  return run_episode_against(learner, m, mode, T, seed, replication, best.value);
}

void for_each_replication(
    const Measure& m, const LearnerFactory& factory, FeedbackMode mode,
    std::int64_t T, std::int64_t R, std::uint64_t seed, int threads,
    const std::function<void(std::int64_t, const std::vector<RoundRecord>&)>&
        sink) {
  if (T < 1) throw std::invalid_argument("horizon T must be >= 1");
  if (R < 1) throw std::invalid_argument("replication count must be >= 1");
  {
    const auto probe = factory();
    if (!probe->accepts(mode)) {
      throw std::invalid_argument(std::string(probe->name()) +
                                  " does not accept the requested feedback mode");
    }
  }
  const PriceValue best = optimal_benchmark(m);
  const int workers = std::min<std::int64_t>(resolve_threads(threads), R);

  if (workers <= 1) {
    for (std::int64_t r = 0; r < R; ++r) {
      const auto learner = factory();
      const auto records = run_episode_against(
          *learner, m, mode, T, seed, static_cast<std::uint64_t>(r), best.value);
      sink(r, records);
    }
    return;
  }

  for (std::int64_t start = 0; start < R; start += workers) {
    const std::int64_t batch = std::min<std::int64_t>(workers, R - start);
    std::vector<std::vector<RoundRecord>> results(
        static_cast<std::size_t>(batch));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(batch));
    for (std::int64_t j = 0; j < batch; ++j) {
      pool.emplace_back([&, j] {
        const auto learner = factory();
        results[static_cast<std::size_t>(j)] = run_episode_against(
            *learner, m, mode, T, seed, static_cast<std::uint64_t>(start + j),
            best.value);
      });
    }
    for (auto& th : pool) th.join();
    for (std::int64_t j = 0; j < batch; ++j) {
      sink(start + j, results[static_cast<std::size_t>(j)]);
    }
  }
}

RegretCurve estimate_regret(const Measure& m, const LearnerFactory& factory,
                            FeedbackMode mode, std::int64_t T, std::int64_t R,
                            std::uint64_t seed,
                            std::vector<std::int64_t> checkpoints, int threads) {
  if (R < 2) throw std::invalid_argument("estimate_regret requires R >= 2");
  if (checkpoints.empty()) checkpoints = default_checkpoints(T);
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      checkpoints.front() < 1 || checkpoints.back() > T) {
    throw std::invalid_argument("checkpoints must ascend within [1, T]");
  }

  const std::size_t C = checkpoints.size();
  // per-checkpoint cum regret, replication-major
  std::vector<std::vector<double>> values(C,
                                          std::vector<double>(
                                              static_cast<std::size_t>(R), 0.0));
  for_each_replication(
      m, factory, mode, T, R, seed, threads,
      [&](std::int64_t r, const std::vector<RoundRecord>& records) {
        for (std::size_t c = 0; c < C; ++c) {
          values[c][static_cast<std::size_t>(r)] =
              records[static_cast<std::size_t>(checkpoints[c] - 1)].cum_regret;
        }
      });

  RegretCurve curve;
  curve.T = T;
  curve.replications = R;
  curve.seed = seed;
  curve.checkpoints.reserve(C);
  for (std::size_t c = 0; c < C; ++c) {
    double sum = 0.0;
    for (double v : values[c]) sum += v;
    const double mean = sum / static_cast<double>(R);
    double ss = 0.0;
    for (double v : values[c]) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(R - 1));
    curve.checkpoints.push_back(
        {checkpoints[c], mean, sd / std::sqrt(static_cast<double>(R))});
  }
  return curve;
}

RateFit rate_fit(const RegretCurve& curve, RateFit::Model model) {
  const auto& cps = curve.checkpoints;
  if (cps.size() < 5) {
    throw std::invalid_argument("rate_fit requires at least 5 checkpoints");
  }
  std::vector<double> xs;
  xs.reserve(cps.size());
  for (const auto& cp : cps) {
    if (model == RateFit::Model::log_t) {
      if (cp.t < 2) {
        throw std::invalid_argument("log model requires checkpoints t >= 2");
      }
      xs.push_back(std::log(static_cast<double>(cp.t - 1)));
    } else {
      xs.push_back(std::sqrt(static_cast<double>(cp.t)));
    }
  }
  const double n = static_cast<double>(cps.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    sx += xs[i];
    sy += cps[i].mean;
    sxx += xs[i] * xs[i];
    sxy += xs[i] * cps[i].mean;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) {
    throw std::invalid_argument("rate_fit design matrix is degenerate");
  }
  RateFit fit;
  fit.model = model;
  fit.b = (n * sxy - sx * sy) / denom;
  fit.a = (sy - fit.b * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const double r = cps[i].mean - (fit.a + fit.b * xs[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

MinimaxProbe minimax_probe(const Measure& plus, const Measure& minus,
                           const LearnerFactory& factory, FeedbackMode mode,
                           std::int64_t T, std::int64_t R, std::uint64_t seed,
                           int threads) {
  MinimaxProbe probe;
  probe.plus = estimate_regret(plus, factory, mode, T, R, seed, {}, threads);
  probe.minus = estimate_regret(minus, factory, mode, T, R, seed, {}, threads);
  const auto& pe = probe.plus.endpoint();
  const auto& me = probe.minus.endpoint();
  if (pe.mean >= me.mean) {
    probe.worst = pe.mean;
    probe.worst_stderr = pe.stderr_of_mean;
  } else {
    probe.worst = me.mean;
    probe.worst_stderr = me.stderr_of_mean;
  }
  return probe;
}

void write_csv_header(std::ostream& out) {
  out << "replication,t,price,realized_gft,expected_gft,inst_regret,cum_regret\n";
}

void append_csv_rows(std::ostream& out, std::int64_t replication,
                     const std::vector<RoundRecord>& records) {
  char line[256];
  for (const auto& r : records) {
    std::snprintf(line, sizeof(line),
                  "%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(replication),
                  static_cast<long long>(r.t), r.price, r.realized_gft,
                  r.expected_gft, r.inst_regret, r.cum_regret);
    out << line;
  }
}

}  // namespace brokerlab

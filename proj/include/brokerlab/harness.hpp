#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "brokerlab/learners.hpp"
#include "brokerlab/measure.hpp"

namespace brokerlab {

/// One simulated round. expected_gft is rho(nu, P_t), evaluated exactly;
/// inst_regret measures against the instance's fixed optimal price, so a
/// deterministic learner produces identical records on every replication.
struct RoundRecord {
  std::int64_t t = 0;
  double price = 0.0;
  double realized_gft = 0.0;
  double expected_gft = 0.0;
  double inst_regret = 0.0;
  double cum_regret = 0.0;
};

struct CheckpointStat {
  std::int64_t t = 0;
  double mean = 0.0;
  double stderr_of_mean = 0.0;
};

struct RegretCurve {
  std::int64_t T = 0;
  std::int64_t replications = 0;
  std::uint64_t seed = 0;
  std::string instance_label;
  std::string learner_label;
  std::vector<CheckpointStat> checkpoints;

  const CheckpointStat& endpoint() const { return checkpoints.back(); }
};

struct RateFit {
  enum class Model { log_t, sqrt_t };
  Model model = Model::log_t;
  double a = 0.0;
  double b = 0.0;
  double rms = 0.0;
};

/// Geometric checkpoints {16, 32, ...} capped by and always including T.
std::vector<std::int64_t> default_checkpoints(std::int64_t T);

/// Play one episode: per round, the learner proposes, a fresh (seed,
/// replication, round) stream draws the two valuations, gain from trade is
/// realized, and regret is accounted through rho against the measure's exact
/// benchmark. Throws std::invalid_argument when the learner does not accept
/// the feedback mode.
std::vector<RoundRecord> run_episode(Learner& learner, const Measure& m,
                                     FeedbackMode mode, std::int64_t T,
                                     std::uint64_t seed,
                                     std::uint64_t replication = 0);

/// Run replications 0..R-1 and hand each record list to the sink in
/// replication order. Replications run on `threads` workers (0 = hardware
/// concurrency); the sink is always called sequentially and in order.
void for_each_replication(
    const Measure& m, const LearnerFactory& factory, FeedbackMode mode,
    std::int64_t T, std::int64_t R, std::uint64_t seed, int threads,
    const std::function<void(std::int64_t, const std::vector<RoundRecord>&)>&
        sink);

/// Mean and standard error of cumulative regret at each checkpoint over R
/// seeded replications. Requires R >= 2. Deterministic given (config, seed).
RegretCurve estimate_regret(const Measure& m, const LearnerFactory& factory,
                            FeedbackMode mode, std::int64_t T, std::int64_t R,
                            std::uint64_t seed,
                            std::vector<std::int64_t> checkpoints = {},
                            int threads = 1);

/// Least-squares fit of the checkpoint means to a + b*ln(t-1) or a + b*sqrt(t).
/// Requires at least 5 checkpoints (and t >= 2 everywhere for the log model).
RateFit rate_fit(const RegretCurve& curve, RateFit::Model model);

struct MinimaxProbe {
  RegretCurve plus;
  RegretCurve minus;
  double worst = 0.0;
  double worst_stderr = 0.0;
};

/// Max of the two endpoint regrets of the same learner on a (+eps, -eps)
/// instance pair, with the stderr propagated from the attaining side.
MinimaxProbe minimax_probe(const Measure& plus, const Measure& minus,
                           const LearnerFactory& factory, FeedbackMode mode,
                           std::int64_t T, std::int64_t R, std::uint64_t seed,
                           int threads = 1);

/// CSV schema: replication,t,price,realized_gft,expected_gft,inst_regret,cum_regret.
/// Doubles are written with 17 significant digits so reruns are byte-identical.
void write_csv_header(std::ostream& out);
void append_csv_rows(std::ostream& out, std::int64_t replication,
                     const std::vector<RoundRecord>& records);

}  // namespace brokerlab

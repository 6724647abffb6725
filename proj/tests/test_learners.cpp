#include <doctest.h>

#include <cmath>
#include <vector>

#include "brokerlab/harness.hpp"
#include "brokerlab/instances.hpp"
#include "brokerlab/learners.hpp"
#include "brokerlab/rho.hpp"
#include "oracles.hpp"

using brokerlab::EtcLearner;
using brokerlab::Feedback;
using brokerlab::FeedbackMode;
using brokerlab::FtmLearner;
using brokerlab::FtmThenRhoLearner;
using brokerlab::FtRhoLearner;
using brokerlab::FullFeedback;
using brokerlab::Price;
using brokerlab::TwoBitFeedback;
using brokerlab::Valuation;

namespace {

Feedback full(double a, double b) {
  return FullFeedback{Valuation(a), Valuation(b)};
}

}  // namespace

TEST_SUITE("learners") {

TEST_CASE("ftm posts one half first, then the running mean") {
  FtmLearner ftm;
  CHECK(ftm.propose(1).value() == 0.5);
  ftm.observe(full(0.2, 0.4));
  CHECK(ftm.propose(2).value() == doctest::Approx(0.3).epsilon(1e-15));
  ftm.observe(full(0.6, 0.8));
  CHECK(ftm.propose(3).value() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ftm.observed_count() == 4);
}

TEST_CASE("ftm count contract") {
  FtmLearner ftm;
  CHECK_THROWS_AS(ftm.propose(2), std::logic_error);
  ftm.observe(full(0.5, 0.5));
  CHECK_THROWS_AS(ftm.propose(1), std::logic_error);
  CHECK_THROWS_AS(ftm.observe(Feedback{TwoBitFeedback{true, true}}),
                  std::logic_error);
}

TEST_CASE("ftm replays an independent accumulator") {
  const auto m = brokerlab::make_bounded_spike(3.0, 0.2);
  FtmLearner ftm;
  double sum = 0.0;
  int count = 0;
  brokerlab::RngStream rng(11, 0, 0);
  for (int t = 1; t <= 300; ++t) {
    const double p = ftm.propose(t).value();
    if (t == 1) {
      CHECK(p == 0.5);
    } else {
      CHECK(p == doctest::Approx(sum / count).epsilon(1e-15));
    }
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    const double v1 = m.sample(rng).value();
    const double v2 = m.sample(rng).value();
    ftm.observe(full(v1, v2));
    sum += v1 + v2;
    count += 2;
  }
}

TEST_CASE("etc posts the exploration ladder then the tally") {
  EtcLearner etc(4);
  CHECK(etc.propose(3).value() == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(etc.propose(4).value() == 1.0);
  for (int t = 1; t <= 4; ++t) {
    etc.observe(Feedback{TwoBitFeedback{true, true}});
  }
  CHECK(etc.propose(5).value() == 1.0);  // tally 8/(2*4)

  EtcLearner etc2(2);
  etc2.observe(Feedback{TwoBitFeedback{true, true}});
  etc2.observe(Feedback{TwoBitFeedback{false, true}});
  CHECK(etc2.propose(3).value() == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("etc ignores feedback after the exploration phase") {
  EtcLearner etc(2);
  etc.observe(Feedback{TwoBitFeedback{true, false}});
  etc.observe(Feedback{TwoBitFeedback{true, false}});
  const double committed = etc.propose(3).value();
  for (int t = 3; t < 20; ++t) {
    etc.observe(Feedback{TwoBitFeedback{true, true}});
    CHECK(etc.propose(t + 1).value() == committed);
  }
  CHECK(etc.tally() == 2);
}

TEST_CASE("etc rejects bad construction and full feedback") {
  CHECK_THROWS_AS(EtcLearner(0), std::invalid_argument);
  EtcLearner etc(3);
  CHECK(!etc.accepts(FeedbackMode::full));
  CHECK_THROWS_AS(etc.observe(full(0.5, 0.5)), std::logic_error);
}

TEST_CASE("ftrho starts at one half") {
  FtRhoLearner ftrho;
  CHECK(ftrho.propose(1).value() == 0.5);
}

TEST_CASE("ftrho degenerate history ties to the smallest candidate") {
  FtRhoLearner ftrho;
  ftrho.propose(1);
  ftrho.observe(full(0.3, 0.3));
  // single-atom empirical measure: rho is identically zero, tie -> 0
  CHECK(ftrho.propose(2).value() == 0.0);
}

TEST_CASE("ftrho on a zero-one history attains the oracle maximum") {
  FtRhoLearner ftrho;
  ftrho.propose(1);
  ftrho.observe(full(0.0, 0.0));
  ftrho.propose(2);
  ftrho.observe(full(1.0, 1.0));
  const double posted = ftrho.propose(3).value();
  const auto& hist = ftrho.history();
  const double brute = oracles::grid_max(
      [&](double p) { return brokerlab::rho(hist, p); }, 10000);
  CHECK(brokerlab::rho(hist, posted) >= brute - 1e-12);
  // every price carries the same value 1/2 here; the tie rule posts 0
  CHECK(posted == 0.0);
  CHECK(brokerlab::rho(hist, posted) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ftrho maximizes rho of the empirical measure on random prefixes") {
  const auto m = brokerlab::make_discrete_four(0.05);
  for (int trial = 0; trial < 50; ++trial) {
    FtRhoLearner ftrho;
    brokerlab::RngStream rng(900 + trial, 0, 0);
    const int rounds = 2 + static_cast<int>(rng.next_unit() * 12.0);
    for (int t = 1; t <= rounds; ++t) {
      ftrho.propose(t);
      ftrho.observe(full(m.sample(rng).value(), m.sample(rng).value()));
    }
    const double posted = ftrho.propose(rounds + 1).value();
    const auto& hist = ftrho.history();
    double brute = oracles::grid_max(
        [&](double p) { return brokerlab::rho(hist, p); }, 2000);
    for (double loc : hist.distinct_values()) {
      brute = std::max(brute, brokerlab::rho(hist, loc));
    }
    CHECK(brokerlab::rho(hist, posted) >= brute - 1e-12);
  }
}

TEST_CASE("ftm_then_rho switches when the pair repeats an earlier sample") {
  FtmThenRhoLearner learner;
  learner.propose(1);
  learner.observe(full(0.1, 0.2));
  CHECK(!learner.switched());
  learner.propose(2);
  learner.observe(full(0.2, 0.9));  // 0.2 repeats
  CHECK(learner.switched());
  CHECK(learner.switch_round() == 2);
}

TEST_CASE("a within-pair duplicate alone does not switch") {
  FtmThenRhoLearner learner;
  learner.propose(1);
  learner.observe(full(0.3, 0.3));
  CHECK(!learner.switched());
  // but a later hit on the stored value does
  learner.propose(2);
  learner.observe(full(0.3, 0.8));
  CHECK(learner.switched());
}

TEST_CASE("switch round itself is priced by ftm, later rounds by ftrho") {
  FtmThenRhoLearner learner;
  CHECK(learner.propose(1).value() == 0.5);
  learner.observe(full(0.0, 1.0));
  // duplicate arrives in round 2's feedback, so round 2 was priced by FTM
  CHECK(learner.propose(2).value() == doctest::Approx(0.5).epsilon(1e-15));
  learner.observe(full(0.0, 1.0));
  CHECK(learner.switched());
  CHECK(learner.switch_round() == 2);
  // from round 3 on, proposals come from the rho maximizer of the history
  FtRhoLearner reference;
  reference.propose(1);
  reference.observe(full(0.0, 1.0));
  reference.propose(2);
  reference.observe(full(0.0, 1.0));
  CHECK(learner.propose(3).value() == reference.propose(3).value());
}

TEST_CASE("ftm_then_rho is trajectory-identical to ftm on an atomless source") {
  const auto m = brokerlab::make_bounded_spike(6.0, -0.2);
  FtmLearner ftm;
  FtmThenRhoLearner dual;
  const auto a = brokerlab::run_episode(ftm, m, FeedbackMode::full, 400, 77, 0);
  const auto b = brokerlab::run_episode(dual, m, FeedbackMode::full, 400, 77, 0);
  CHECK(!dual.switched());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].price == b[i].price);
    CHECK(a[i].cum_regret == b[i].cum_regret);
  }
}

TEST_CASE("ftm_then_rho switch time on the needle is small") {
  const auto m = brokerlab::make_needle_three(0.4);
  const int reps = 10000;
  double tau_sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    FtmThenRhoLearner learner;
    std::int64_t tau = 200;  // cap; conservative for the mean bound below
    for (std::int64_t t = 1; t <= 200; ++t) {
      learner.propose(t);
      brokerlab::RngStream rng(123456, static_cast<std::uint64_t>(r),
                               static_cast<std::uint64_t>(t));
      learner.observe(FullFeedback{m.sample(rng), m.sample(rng)});
      if (learner.switched()) {
        tau = learner.switch_round();
        break;
      }
    }
    tau_sum += static_cast<double>(tau);
  }
  const double mean_tau = tau_sum / reps;
  // dominated by a negative-binomial(2, 1/6) stopping time, mean 10
  CHECK(mean_tau >= 1.0);
  CHECK(mean_tau <= 10.0);
}

TEST_CASE("all proposals stay inside the unit interval") {
  const auto m = brokerlab::make_discrete_four(-0.15);
  std::vector<std::unique_ptr<brokerlab::Learner>> learners;
  learners.push_back(std::make_unique<FtmLearner>());
  learners.push_back(std::make_unique<FtRhoLearner>());
  learners.push_back(std::make_unique<FtmThenRhoLearner>());
  for (auto& learner : learners) {
    brokerlab::RngStream rng(5, 0, 0);
    for (int t = 1; t <= 60; ++t) {
      const double p = learner->propose(t).value();
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      learner->observe(full(m.sample(rng).value(), m.sample(rng).value()));
    }
  }
  EtcLearner etc(7);
  for (int t = 1; t <= 60; ++t) {
    const double p = etc.propose(t).value();
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    etc.observe(Feedback{TwoBitFeedback{t % 2 == 0, t % 3 == 0}});
  }
}

}  // TEST_SUITE

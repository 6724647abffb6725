#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <unordered_set>
#include <variant>

#include "brokerlab/gft.hpp"
#include "brokerlab/measure.hpp"

namespace brokerlab {

enum class FeedbackMode { full, two_bit };

/// Both valuations, revealed after the round (direct-revelation mechanisms).
struct FullFeedback {
  Valuation v1;
  Valuation v2;
};

/// Only the indicators 1{P_t <= V} for each trader (posted-price mechanisms).
struct TwoBitFeedback {
  bool b1 = false;
  bool b2 = false;
};

using Feedback = std::variant<FullFeedback, TwoBitFeedback>;

/// Stateful price-posting agent. propose(t) is called before the round-t
/// valuations are drawn; observe() exactly once afterwards with the feedback
/// kind the learner declared. State is owned by a single episode.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string_view name() const = 0;
  virtual bool accepts(FeedbackMode mode) const = 0;
  virtual Price propose(std::int64_t t) = 0;
  virtual void observe(const Feedback& feedback) = 0;
};

using LearnerFactory = std::function<std::unique_ptr<Learner>()>;

/// Follow-the-Mean: P_1 = 1/2, then the empirical mean of all observed
/// valuations. Full feedback.
class FtmLearner final : public Learner {
 public:
  std::string_view name() const override { return "ftm"; }
  bool accepts(FeedbackMode mode) const override {
    return mode == FeedbackMode::full;
  }
  Price propose(std::int64_t t) override;
  void observe(const Feedback& feedback) override;

  double observed_sum() const noexcept { return sum_; }
  std::int64_t observed_count() const noexcept { return count_; }

 private:
  double sum_ = 0.0;
  std::int64_t count_ = 0;
};

/// Explore-then-Commit: posts the ladder t/T0 for t <= T0, then commits to
/// the two-bit tally (1/(2·T0))·Σ(b1 + b2) forever. Two-bit feedback;
/// feedback after round T0 is ignored.
class EtcLearner final : public Learner {
 public:
  explicit EtcLearner(std::int64_t exploration_rounds);

  std::string_view name() const override { return "etc"; }
  bool accepts(FeedbackMode mode) const override {
    return mode == FeedbackMode::two_bit;
  }
  Price propose(std::int64_t t) override;
  void observe(const Feedback& feedback) override;

  std::int64_t exploration_rounds() const noexcept { return T0_; }
  std::int64_t tally() const noexcept { return tally_; }

 private:
  std::int64_t T0_;
  std::int64_t round_ = 0;
  std::int64_t tally_ = 0;
};

/// Follow-the-rho: P_1 = 1/2, then an exact maximizer of rho of the
/// empirical measure over all observed valuations. Full feedback.
class FtRhoLearner final : public Learner {
 public:
  std::string_view name() const override { return "ftrho"; }
  bool accepts(FeedbackMode mode) const override {
    return mode == FeedbackMode::full;
  }
  Price propose(std::int64_t t) override;
  void observe(const Feedback& feedback) override;

  const EmpiricalMeasure& history() const noexcept { return history_; }

 private:
  EmpiricalMeasure history_;
};

/// Follow-the-Mean until the current pair of valuations repeats any earlier
/// sample exactly, then switch to Follow-the-rho over the full history. The
/// switch round itself is still priced by FTM; the duplicate check runs
/// after that round's feedback. A within-pair duplicate alone does not
/// trigger the switch. Full feedback.
class FtmThenRhoLearner final : public Learner {
 public:
  std::string_view name() const override { return "ftm_then_rho"; }
  bool accepts(FeedbackMode mode) const override {
    return mode == FeedbackMode::full;
  }
  Price propose(std::int64_t t) override;
  void observe(const Feedback& feedback) override;

  bool switched() const noexcept { return switched_; }
  /// Round whose feedback triggered the switch; 0 while running as FTM.
  std::int64_t switch_round() const noexcept { return switch_round_; }

 private:
  double sum_ = 0.0;
  std::int64_t count_ = 0;
  std::int64_t round_ = 0;
  std::unordered_set<double> seen_;
  std::vector<double> raw_history_;  // in arrival order
  EmpiricalMeasure history_;         // built at switch time, then maintained
  bool switched_ = false;
  std::int64_t switch_round_ = 0;
};

/// Posts one fixed price forever and ignores feedback of either kind.
class FixedPriceLearner final : public Learner {
 public:
  explicit FixedPriceLearner(Price p) : price_(p) {}

  std::string_view name() const override { return "fixed"; }
  bool accepts(FeedbackMode) const override { return true; }
  Price propose(std::int64_t) override { return price_; }
  void observe(const Feedback&) override {}

 private:
  Price price_;
};

}  // namespace brokerlab

#include "brokerlab/learners.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "brokerlab/rho.hpp"

namespace brokerlab {

namespace {

const FullFeedback& as_full(const Feedback& feedback, const char* who) {
  const auto* full = std::get_if<FullFeedback>(&feedback);
  if (full == nullptr) {
    throw std::logic_error(std::string(who) + " requires full feedback");
  }
  return *full;
}

const TwoBitFeedback& as_two_bit(const Feedback& feedback, const char* who) {
  const auto* bits = std::get_if<TwoBitFeedback>(&feedback);
  if (bits == nullptr) {
    throw std::logic_error(std::string(who) + " requires two-bit feedback");
  }
  return *bits;
}

}  // namespace

// ---------------------------------------------------------------------------
// FTM

Price FtmLearner::propose(std::int64_t t) {
  if (t < 1) throw std::logic_error("round index must be >= 1");
  if (count_ != 2 * (t - 1)) {
    throw std::logic_error("ftm proposed at round " + std::to_string(t) +
                           " after observing " + std::to_string(count_) +
                           " valuations, expected " + std::to_string(2 * (t - 1)));
  }
  if (t == 1) return Price(0.5);
  return Price(std::clamp(sum_ / static_cast<double>(count_), 0.0, 1.0));
}

void FtmLearner::observe(const Feedback& feedback) {
  const FullFeedback& full = as_full(feedback, "ftm");
  sum_ += full.v1.value() + full.v2.value();
  count_ += 2;
}

// ---------------------------------------------------------------------------
// ETC

EtcLearner::EtcLearner(std::int64_t exploration_rounds) : T0_(exploration_rounds) {
  if (T0_ < 1) throw std::invalid_argument("etc requires T0 >= 1");
}

Price EtcLearner::propose(std::int64_t t) {
  if (t < 1) throw std::logic_error("round index must be >= 1");
  if (t <= T0_) {
    return Price(static_cast<double>(t) / static_cast<double>(T0_));
  }
  return Price(static_cast<double>(tally_) / (2.0 * static_cast<double>(T0_)));
}

void EtcLearner::observe(const Feedback& feedback) {
  const TwoBitFeedback& bits = as_two_bit(feedback, "etc");
  ++round_;
  if (round_ <= T0_) {
    tally_ += (bits.b1 ? 1 : 0) + (bits.b2 ? 1 : 0);
  }
  // feedback after the exploration phase is ignored
}

// ---------------------------------------------------------------------------
// FT-rho

Price FtRhoLearner::propose(std::int64_t t) {
  if (t < 1) throw std::logic_error("round index must be >= 1");
  if (history_.size() != 2 * (t - 1)) {
    throw std::logic_error("ftrho proposed at round " + std::to_string(t) +
                           " holding " + std::to_string(history_.size()) +
                           " samples, expected " + std::to_string(2 * (t - 1)));
  }
  if (t == 1) return Price(0.5);
  return Price(argmax_rho(history_).price);
}

void FtRhoLearner::observe(const Feedback& feedback) {
  const FullFeedback& full = as_full(feedback, "ftrho");
  history_.insert(full.v1);
  history_.insert(full.v2);
}

// ---------------------------------------------------------------------------
// FTM-then-rho

Price FtmThenRhoLearner::propose(std::int64_t t) {
  if (t < 1) throw std::logic_error("round index must be >= 1");
  if (count_ != 2 * (t - 1)) {
    throw std::logic_error("ftm_then_rho proposed at round " + std::to_string(t) +
                           " after observing " + std::to_string(count_) +
                           " valuations, expected " + std::to_string(2 * (t - 1)));
  }
  if (switched_) {
    return Price(argmax_rho(history_).price);
  }
  if (t == 1) return Price(0.5);
  return Price(std::clamp(sum_ / static_cast<double>(count_), 0.0, 1.0));
}

void FtmThenRhoLearner::observe(const Feedback& feedback) {
  const FullFeedback& full = as_full(feedback, "ftm_then_rho");
  const double v1 = full.v1.value();
  const double v2 = full.v2.value();
  ++round_;
  const bool was_switched = switched_;
  if (!switched_ && (seen_.count(v1) != 0 || seen_.count(v2) != 0)) {
    switched_ = true;
    switch_round_ = round_;
  }
  seen_.insert(v1);
  seen_.insert(v2);
  sum_ += v1 + v2;
  count_ += 2;
  raw_history_.push_back(v1);
  raw_history_.push_back(v2);
  if (switched_ && !was_switched) {
    // first switch: feed the entire observed history into the rho learner
    for (double v : raw_history_) history_.insert(Valuation(v));
  } else if (was_switched) {
    history_.insert(full.v1);
    history_.insert(full.v2);
  }
}

}  // namespace brokerlab

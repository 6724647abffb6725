#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "brokerlab/harness.hpp"
#include "brokerlab/serialize.hpp"

namespace brokerlab {

/// Raised when a learner is paired with a feedback kind it cannot consume.
class FeedbackMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LearnerSpec {
  std::string name;                    // ftm | etc | ftrho | ftm_then_rho | fixed
  std::optional<std::int64_t> etc_T0;  // etc only; empty means "auto"
  std::optional<double> fixed_price;   // fixed only

  bool operator==(const LearnerSpec&) const = default;
};

struct OutputSpec {
  std::string csv = "run.csv";
  std::string summary = "summary.json";

  bool operator==(const OutputSpec&) const = default;
};

/// A fully described experiment; schema_version 1.
struct ExperimentConfig {
  InstanceSpec instance;
  LearnerSpec learner;
  FeedbackMode feedback = FeedbackMode::full;
  std::int64_t T = 1;
  std::int64_t replications = 2;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> checkpoints;  // empty = harness default
  OutputSpec output;

  bool operator==(const ExperimentConfig&) const = default;
};

struct SweepConfig {
  nlohmann::json base;               // validated run config as JSON
  std::vector<nlohmann::json> grid;  // JSON merge patches applied to base
};

/// Parse and fully validate; unknown fields anywhere are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

SweepConfig sweep_from_json(const nlohmann::json& j);

/// Config for one sweep grid point: base with the patch merged in.
ExperimentConfig apply_patch(const SweepConfig& sweep, std::size_t index);

std::string learner_label(const LearnerSpec& spec);
FeedbackMode feedback_from_string(const std::string& text);
std::string feedback_to_string(FeedbackMode mode);

/// Build the learner factory, resolving etc's "auto" exploration length to
/// ceil(sqrt(M*T)) from the instance's declared density bound. Throws
/// ConfigError when "auto" is requested for an instance with no bound, and
/// FeedbackMismatchError when the learner cannot consume the configured
/// feedback kind.
LearnerFactory make_learner_factory(const LearnerSpec& learner,
                                    const InstanceSpec& instance, std::int64_t T,
                                    FeedbackMode mode);

}  // namespace brokerlab

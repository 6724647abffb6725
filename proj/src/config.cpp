#include "brokerlab/config.hpp"

#include <cmath>

namespace brokerlab {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown field \"" + key + "\" in " + where);
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError("missing field \"" + std::string(key) + "\" in " + where);
  }
  return *it;
}

std::int64_t int_at(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + " must be an integer");
  return j.get<std::int64_t>();
}

LearnerSpec learner_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("learner must be a JSON object");
  const json& name = require(j, "name", "learner");
  if (!name.is_string()) throw ConfigError("learner name must be a string");
  LearnerSpec spec;
  spec.name = name.get<std::string>();
  if (spec.name == "ftm" || spec.name == "ftrho" || spec.name == "ftm_then_rho") {
    reject_unknown_keys(j, {"name"}, "learner \"" + spec.name + "\"");
  } else if (spec.name == "etc") {
    reject_unknown_keys(j, {"name", "T0"}, "learner \"etc\"");
    const json& t0 = require(j, "T0", "learner \"etc\"");
    if (t0.is_string()) {
      if (t0.get<std::string>() != "auto") {
        throw ConfigError("etc T0 must be a positive integer or \"auto\"");
      }
    } else {
      const std::int64_t v = int_at(t0, "etc T0");
      if (v < 1) throw ConfigError("etc T0 must be >= 1");
      spec.etc_T0 = v;
    }
  } else if (spec.name == "fixed") {
    reject_unknown_keys(j, {"name", "p"}, "learner \"fixed\"");
    const json& p = require(j, "p", "learner \"fixed\"");
    if (!p.is_number()) throw ConfigError("fixed learner p must be a number");
    const double v = p.get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError("fixed learner p must lie in [0,1]");
    }
    spec.fixed_price = v;
  } else {
    throw ConfigError("unknown learner \"" + spec.name + "\"");
  }
  return spec;
}

json learner_to_json(const LearnerSpec& spec) {
  json j{{"name", spec.name}};
  if (spec.name == "etc") {
    if (spec.etc_T0.has_value()) {
      j["T0"] = *spec.etc_T0;
    } else {
      j["T0"] = "auto";
    }
  }
  if (spec.name == "fixed") j["p"] = *spec.fixed_price;
  return j;
}

}  // namespace

FeedbackMode feedback_from_string(const std::string& text) {
  if (text == "full") return FeedbackMode::full;
  if (text == "two_bit") return FeedbackMode::two_bit;
  throw ConfigError("feedback must be \"full\" or \"two_bit\", got \"" + text +
                    "\"");
}

std::string feedback_to_string(FeedbackMode mode) {
  return mode == FeedbackMode::full ? "full" : "two_bit";
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(j,
                      {"schema_version", "instance", "learner", "feedback", "T",
                       "replications", "seed", "checkpoints", "output"},
                      "config");
  const std::int64_t version =
      int_at(require(j, "schema_version", "config"), "schema_version");
  if (version != 1) {
    throw ConfigError("unsupported schema_version " + std::to_string(version));
  }

  ExperimentConfig config;
  config.instance = instance_from_json(require(j, "instance", "config"));
  config.learner = learner_from_json(require(j, "learner", "config"));
  const json& fb = require(j, "feedback", "config");
  if (!fb.is_string()) throw ConfigError("feedback must be a string");
  config.feedback = feedback_from_string(fb.get<std::string>());

  config.T = int_at(require(j, "T", "config"), "T");
  if (config.T < 1) throw ConfigError("T must be >= 1");
  config.replications =
      int_at(require(j, "replications", "config"), "replications");
  if (config.replications < 2) throw ConfigError("replications must be >= 2");
  const json& seed = require(j, "seed", "config");
  if (!seed.is_number_integer() ||
      (seed.is_number_integer() && !seed.is_number_unsigned() &&
       seed.get<std::int64_t>() < 0)) {
    throw ConfigError("seed must be a non-negative integer");
  }
  config.seed = seed.get<std::uint64_t>();

  if (j.contains("checkpoints")) {
    const json& cps = j.at("checkpoints");
    if (!cps.is_array() || cps.empty()) {
      throw ConfigError("checkpoints must be a non-empty array");
    }
    for (const auto& c : cps) {
      config.checkpoints.push_back(int_at(c, "checkpoint"));
    }
    for (std::size_t i = 0; i + 1 < config.checkpoints.size(); ++i) {
      if (config.checkpoints[i] >= config.checkpoints[i + 1]) {
        throw ConfigError("checkpoints must be strictly ascending");
      }
    }
    if (config.checkpoints.front() < 1 || config.checkpoints.back() > config.T) {
      throw ConfigError("checkpoints must lie in [1, T]");
    }
  }

  if (j.contains("output")) {
    const json& out = j.at("output");
    if (!out.is_object()) throw ConfigError("output must be an object");
    reject_unknown_keys(out, {"csv", "summary"}, "output");
    if (out.contains("csv")) {
      if (!out.at("csv").is_string()) throw ConfigError("output.csv must be a string");
      config.output.csv = out.at("csv").get<std::string>();
    }
    if (out.contains("summary")) {
      if (!out.at("summary").is_string()) {
        throw ConfigError("output.summary must be a string");
      }
      config.output.summary = out.at("summary").get<std::string>();
    }
  }
  return config;
}

json config_to_json(const ExperimentConfig& config) {
  json j;
  j["schema_version"] = 1;
  j["instance"] = instance_to_json(config.instance);
  j["learner"] = learner_to_json(config.learner);
  j["feedback"] = feedback_to_string(config.feedback);
  j["T"] = config.T;
  j["replications"] = config.replications;
  j["seed"] = config.seed;
  if (!config.checkpoints.empty()) j["checkpoints"] = config.checkpoints;
  j["output"] = {{"csv", config.output.csv}, {"summary", config.output.summary}};
  return j;
}

SweepConfig sweep_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("sweep config must be a JSON object");
  reject_unknown_keys(j, {"schema_version", "base", "grid"}, "sweep config");
  const std::int64_t version =
      int_at(require(j, "schema_version", "sweep config"), "schema_version");
  if (version != 1) {
    throw ConfigError("unsupported schema_version " + std::to_string(version));
  }
  SweepConfig sweep;
  sweep.base = require(j, "base", "sweep config");
  if (!sweep.base.is_object()) throw ConfigError("sweep base must be an object");
  if (!sweep.base.contains("schema_version")) {
    sweep.base["schema_version"] = 1;
  }
  config_from_json(sweep.base);  // validate eagerly
  const json& grid = require(j, "grid", "sweep config");
  if (!grid.is_array() || grid.empty()) {
    throw ConfigError("sweep grid must be a non-empty array");
  }
  for (const auto& patch : grid) {
    if (!patch.is_object()) throw ConfigError("each grid entry must be an object");
    sweep.grid.push_back(patch);
  }
  // validate every grid point up front
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) apply_patch(sweep, i);
  return sweep;
}

ExperimentConfig apply_patch(const SweepConfig& sweep, std::size_t index) {
  json merged = sweep.base;
  merged.merge_patch(sweep.grid.at(index));
  try {
    return config_from_json(merged);
  } catch (const ConfigError& e) {
    throw ConfigError("grid point " + std::to_string(index) + ": " + e.what());
  }
}

std::string learner_label(const LearnerSpec& spec) {
  if (spec.name == "etc") {
    return spec.etc_T0.has_value()
               ? "etc(T0=" + std::to_string(*spec.etc_T0) + ")"
               : "etc(T0=auto)";
  }
  if (spec.name == "fixed") {
    return "fixed(p=" + std::to_string(*spec.fixed_price) + ")";
  }
  return spec.name;
}

LearnerFactory make_learner_factory(const LearnerSpec& learner,
                                    const InstanceSpec& instance, std::int64_t T,
                                    FeedbackMode mode) {
  LearnerFactory factory;
  if (learner.name == "ftm") {
    factory = [] { return std::make_unique<FtmLearner>(); };
  } else if (learner.name == "ftrho") {
    factory = [] { return std::make_unique<FtRhoLearner>(); };
  } else if (learner.name == "ftm_then_rho") {
    factory = [] { return std::make_unique<FtmThenRhoLearner>(); };
  } else if (learner.name == "etc") {
    std::int64_t T0 = 0;
    if (learner.etc_T0.has_value()) {
      T0 = *learner.etc_T0;
    } else {
      const auto bound = make_measure(instance)->density_bound();
      if (!bound.has_value()) {
        throw ConfigError(
            "etc T0 \"auto\" needs an instance with a declared density bound; "
            "supply T0 explicitly");
      }
      T0 = static_cast<std::int64_t>(
          std::ceil(std::sqrt(*bound * static_cast<double>(T))));
      if (T0 < 1) T0 = 1;
    }
    factory = [T0] { return std::make_unique<EtcLearner>(T0); };
  } else if (learner.name == "fixed") {
    const Price p(*learner.fixed_price);
    factory = [p] { return std::make_unique<FixedPriceLearner>(p); };
  } else {
    throw ConfigError("unknown learner \"" + learner.name + "\"");
  }
  if (!factory()->accepts(mode)) {
    throw FeedbackMismatchError("learner \"" + learner.name +
                                "\" cannot consume " + feedback_to_string(mode) +
                                " feedback");
  }
  return factory;
}

}  // namespace brokerlab

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "brokerlab/config.hpp"
#include "brokerlab/harness.hpp"
#include "brokerlab/instances.hpp"
#include "brokerlab/verify.hpp"

namespace fs = std::filesystem;
using brokerlab::ConfigError;
using brokerlab::FeedbackMismatchError;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFeedbackMismatch = 3;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in \"" + path + "\": " + e.what());
  }
  return j;
}

struct RunResult {
  brokerlab::RegretCurve curve;
  json summary;
};

json fit_to_json(const brokerlab::RegretCurve& curve) {
  // fit both growth models when enough checkpoints exist; report the better
  bool log_applicable = curve.checkpoints.size() >= 5;
  for (const auto& cp : curve.checkpoints) {
    if (cp.t < 2) log_applicable = false;
  }
  if (curve.checkpoints.size() < 5) return nullptr;
  const auto sqrt_fit = brokerlab::rate_fit(curve, brokerlab::RateFit::Model::sqrt_t);
  const brokerlab::RateFit* best = &sqrt_fit;
  brokerlab::RateFit log_fit;
  if (log_applicable) {
    log_fit = brokerlab::rate_fit(curve, brokerlab::RateFit::Model::log_t);
    if (log_fit.rms < sqrt_fit.rms) best = &log_fit;
  }
  return json{{"model", best->model == brokerlab::RateFit::Model::log_t
                            ? "log"
                            : "sqrt"},
              {"a", best->a},
              {"b", best->b},
              {"rms", best->rms}};
}

json curve_to_json(const brokerlab::ExperimentConfig& config,
                   const brokerlab::RegretCurve& curve) {
  json cps = json::array();
  for (const auto& cp : curve.checkpoints) {
    cps.push_back({{"t", cp.t}, {"mean", cp.mean}, {"stderr", cp.stderr_of_mean}});
  }
  return json{{"instance", brokerlab::instance_to_json(config.instance)},
              {"learner", brokerlab::learner_label(config.learner)},
              {"T", curve.T},
              {"R", curve.replications},
              {"seed", curve.seed},
              {"checkpoints", cps},
              {"fit", fit_to_json(curve)}};
}

RunResult execute_run(const brokerlab::ExperimentConfig& config,
                      const fs::path& out_dir, bool write_csv, int threads) {
  const auto measure = brokerlab::make_measure(config.instance);
  const auto factory = brokerlab::make_learner_factory(
      config.learner, config.instance, config.T, config.feedback);

  auto checkpoints = config.checkpoints;
  if (checkpoints.empty()) {
    checkpoints = brokerlab::default_checkpoints(config.T);
  }
  const std::size_t C = checkpoints.size();
  std::vector<std::vector<double>> values(
      C, std::vector<double>(static_cast<std::size_t>(config.replications), 0.0));

  std::ofstream csv;
  if (write_csv) {
    fs::create_directories(out_dir);
    csv.open(out_dir / config.output.csv, std::ios::binary);
    if (!csv) {
      throw std::runtime_error("cannot open CSV output file");
    }
    brokerlab::write_csv_header(csv);
  }

  brokerlab::for_each_replication(
      *measure, factory, config.feedback, config.T, config.replications,
      config.seed, threads,
      [&](std::int64_t r, const std::vector<brokerlab::RoundRecord>& records) {
        for (std::size_t c = 0; c < C; ++c) {
          values[c][static_cast<std::size_t>(r)] =
              records[static_cast<std::size_t>(checkpoints[c] - 1)].cum_regret;
        }
        if (write_csv) brokerlab::append_csv_rows(csv, r, records);
      });

  RunResult result;
  result.curve.T = config.T;
  result.curve.replications = config.replications;
  result.curve.seed = config.seed;
  result.curve.instance_label = brokerlab::instance_label(config.instance);
  result.curve.learner_label = brokerlab::learner_label(config.learner);
  const double R = static_cast<double>(config.replications);
  for (std::size_t c = 0; c < C; ++c) {
    double sum = 0.0;
    for (double v : values[c]) sum += v;
    const double mean = sum / R;
    double ss = 0.0;
    for (double v : values[c]) ss += (v - mean) * (v - mean);
    result.curve.checkpoints.push_back(
        {checkpoints[c], mean, std::sqrt(ss / (R - 1.0)) / std::sqrt(R)});
  }
  result.summary = curve_to_json(config, result.curve);
  return result;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, bool json_output,
            int threads) {
  auto config = brokerlab::config_from_json(load_json_file(config_path));
  if (seed_override.has_value()) config.seed = *seed_override;
  const fs::path out(out_dir);
  const RunResult result = execute_run(config, out, /*write_csv=*/true, threads);

  fs::create_directories(out);
  std::ofstream summary(out / config.output.summary, std::ios::binary);
  summary << result.summary.dump(2) << "\n";

  if (json_output) {
    std::cout << result.summary.dump() << "\n";
  } else {
    std::cout << result.curve.instance_label << " / "
              << result.curve.learner_label << ": T=" << result.curve.T
              << " R=" << result.curve.replications << " seed="
              << result.curve.seed << "\n";
    for (const auto& cp : result.curve.checkpoints) {
      std::printf("  t=%-8lld mean=%-12.6g stderr=%.6g\n",
                  static_cast<long long>(cp.t), cp.mean, cp.stderr_of_mean);
    }
    std::cout << "wrote " << (out / config.output.csv).string() << " and "
              << (out / config.output.summary).string() << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override, bool json_output,
              int threads) {
  const auto sweep = brokerlab::sweep_from_json(load_json_file(config_path));
  const fs::path out(out_dir);
  fs::create_directories(out);

  json index = json::array();
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
    auto config = brokerlab::apply_patch(sweep, i);
    if (seed_override.has_value()) config.seed = *seed_override;
    const RunResult result =
        execute_run(config, out, /*write_csv=*/false, threads);
    char name[64];
    std::snprintf(name, sizeof(name), "sweep_%03zu.json", i);
    std::ofstream summary(out / name, std::ios::binary);
    summary << result.summary.dump(2) << "\n";
    index.push_back({{"point", i},
                     {"patch", sweep.grid[i]},
                     {"summary", name},
                     {"endpoint_mean", result.curve.endpoint().mean},
                     {"endpoint_stderr", result.curve.endpoint().stderr_of_mean}});
    if (!json_output) {
      std::cout << name << ": " << result.curve.instance_label << " / "
                << result.curve.learner_label
                << " endpoint=" << result.curve.endpoint().mean << "\n";
    }
  }
  std::ofstream index_file(out / "index.json", std::ios::binary);
  index_file << json{{"points", index}}.dump(2) << "\n";
  if (json_output) {
    std::cout << json{{"points", index}}.dump() << "\n";
  } else {
    std::cout << "wrote " << (out / "index.json").string() << "\n";
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, bool json_output) {
  std::vector<brokerlab::SuiteReport> reports;
  if (suite == "representation") {
    reports.push_back(brokerlab::verify_representation(seed));
  } else if (suite == "lemmas") {
    reports.push_back(brokerlab::verify_lemmas());
  } else if (suite == "instances") {
    reports.push_back(brokerlab::verify_instances());
  } else if (suite == "all") {
    reports = brokerlab::verify_all(seed);
  } else {
    std::cerr << "unknown suite \"" << suite
              << "\" (expected representation|lemmas|instances|all)\n";
    return kExitConfig;
  }

  bool all_pass = true;
  if (json_output) {
    json out = json::array();
    for (const auto& report : reports) {
      json checks = json::array();
      for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        all_pass = all_pass && c.pass;
      }
      out.push_back({{"suite", report.suite}, {"checks", checks}});
    }
    std::cout << out.dump() << "\n";
  } else {
    for (const auto& report : reports) {
      std::cout << "suite: " << report.suite << "\n";
      for (const auto& c : report.checks) {
        all_pass = all_pass && c.pass;
        std::printf("  [%s] %-55s %s\n", c.pass ? " ok " : "FAIL",
                    c.name.c_str(), c.detail.c_str());
      }
    }
    std::cout << (all_pass ? "all checks passed\n" : "some checks FAILED\n");
  }
  return all_pass ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"brokerage trading-price simulation laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string suite = "all";
  std::optional<std::uint64_t> seed_override;
  std::uint64_t verify_seed = 20240001;
  bool json_output = false;
  int threads = 0;

  auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
  run->add_option("--config", config_path, "experiment config path")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed_override, "override the config seed");
  run->add_flag("--json", json_output, "machine-readable stdout");
  run->add_option("--threads", threads, "worker threads (0 = auto)");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "representation|lemmas|instances|all");
  verify->add_option("--seed", verify_seed, "Monte-Carlo seed");
  verify->add_flag("--json", json_output, "machine-readable stdout");

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid of experiments");
  sweep->add_option("--config", config_path, "sweep config path")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--seed", seed_override, "override the config seed");
  sweep->add_flag("--json", json_output, "machine-readable stdout");
  sweep->add_option("--threads", threads, "worker threads (0 = auto)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, out_dir, seed_override, json_output, threads);
    }
    if (verify->parsed()) {
      return cmd_verify(suite, verify_seed, json_output);
    }
    if (sweep->parsed()) {
      return cmd_sweep(config_path, out_dir, seed_override, json_output, threads);
    }
  } catch (const FeedbackMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFeedbackMismatch;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

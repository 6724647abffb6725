#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "brokerlab/config.hpp"
#include "brokerlab/harness.hpp"
#include "brokerlab/instances.hpp"
#include "brokerlab/learners.hpp"
#include "brokerlab/rho.hpp"
#include "brokerlab/serialize.hpp"
#include "brokerlab/verify.hpp"

namespace py = pybind11;
using namespace brokerlab;

namespace {

FeedbackMode parse_mode(const std::string& text) {
  return feedback_from_string(text);
}

LearnerSpec parse_learner(const std::string& name, const py::dict& params) {
  LearnerSpec spec;
  spec.name = name;
  for (const auto& item : params) {
    const std::string key = py::cast<std::string>(item.first);
    if (key == "T0" && name == "etc") {
      if (py::isinstance<py::str>(item.second)) {
        if (py::cast<std::string>(item.second) != "auto") {
          throw ConfigError("etc T0 must be a positive integer or \"auto\"");
        }
      } else {
        spec.etc_T0 = py::cast<std::int64_t>(item.second);
      }
    } else if (key == "p" && name == "fixed") {
      spec.fixed_price = py::cast<double>(item.second);
    } else {
      throw ConfigError("unknown parameter \"" + key + "\" for learner \"" +
                        name + "\"");
    }
  }
  if (name == "fixed" && !spec.fixed_price.has_value()) {
    throw ConfigError("fixed learner needs p");
  }
  return spec;
}

std::unique_ptr<Learner> build_learner(const LearnerSpec& spec) {
  if (spec.name == "ftm") return std::make_unique<FtmLearner>();
  if (spec.name == "ftrho") return std::make_unique<FtRhoLearner>();
  if (spec.name == "ftm_then_rho") return std::make_unique<FtmThenRhoLearner>();
  if (spec.name == "etc") {
    if (!spec.etc_T0.has_value()) {
      throw ConfigError("etc needs an explicit T0 here");
    }
    return std::make_unique<EtcLearner>(*spec.etc_T0);
  }
  if (spec.name == "fixed") {
    if (!spec.fixed_price.has_value()) {
      throw ConfigError("fixed learner needs p");
    }
    return std::make_unique<FixedPriceLearner>(Price(*spec.fixed_price));
  }
  throw ConfigError("unknown learner \"" + spec.name + "\"");
}

LearnerFactory factory_for(const std::string& name, const py::dict& params,
                           const InstanceSpec& instance, std::int64_t T,
                           FeedbackMode mode) {
  return make_learner_factory(parse_learner(name, params), instance, T, mode);
}

py::dict records_to_dict(const std::vector<RoundRecord>& records) {
  std::vector<std::int64_t> t;
  std::vector<double> price, realized, expected, inst, cum;
  t.reserve(records.size());
  for (const auto& r : records) {
    t.push_back(r.t);
    price.push_back(r.price);
    realized.push_back(r.realized_gft);
    expected.push_back(r.expected_gft);
    inst.push_back(r.inst_regret);
    cum.push_back(r.cum_regret);
  }
  py::dict out;
  out["t"] = t;
  out["price"] = price;
  out["realized_gft"] = realized;
  out["expected_gft"] = expected;
  out["inst_regret"] = inst;
  out["cum_regret"] = cum;
  return out;
}

py::dict curve_to_dict(const RegretCurve& curve) {
  std::vector<std::int64_t> t;
  std::vector<double> mean, se;
  for (const auto& cp : curve.checkpoints) {
    t.push_back(cp.t);
    mean.push_back(cp.mean);
    se.push_back(cp.stderr_of_mean);
  }
  py::dict out;
  out["T"] = curve.T;
  out["replications"] = curve.replications;
  out["seed"] = curve.seed;
  out["checkpoints"] = t;
  out["mean"] = mean;
  out["stderr"] = se;
  return out;
}

class PyMeasure {
 public:
  explicit PyMeasure(std::shared_ptr<const Measure> m, InstanceSpec spec)
      : measure_(std::move(m)), spec_(std::move(spec)) {}

  const Measure& get() const { return *measure_; }
  const InstanceSpec& spec() const { return spec_; }

 private:
  std::shared_ptr<const Measure> measure_;
  InstanceSpec spec_;
};

PyMeasure from_spec(InstanceSpec spec) {
  std::shared_ptr<const Measure> measure(make_measure(spec));
  return PyMeasure(std::move(measure), std::move(spec));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "brokerage trading-price simulation core";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<FeedbackMismatchError>(m, "FeedbackMismatchError");

  m.def(
      "gft",
      [](double p, double v1, double v2) {
        return gft(Price(p), Valuation(v1), Valuation(v2));
      },
      py::arg("p"), py::arg("v1"), py::arg("v2"),
      "Gain from trade of price p for valuations v1, v2.");

  py::class_<PyMeasure>(m, "Measure")
      .def("cdf", [](const PyMeasure& s, double x) { return s.get().cdf(x); })
      .def("cdf_left",
           [](const PyMeasure& s, double x) { return s.get().cdf_left(x); })
      .def("atom", [](const PyMeasure& s, double p) { return s.get().atom(p); })
      .def("mean", [](const PyMeasure& s) { return s.get().mean(); })
      .def("cdf_integral",
           [](const PyMeasure& s, double a, double b) {
             return s.get().cdf_integral(a, b);
           })
      .def("survival_integral",
           [](const PyMeasure& s, double a, double b) {
             return s.get().survival_integral(a, b);
           })
      .def("density_bound",
           [](const PyMeasure& s) -> std::optional<double> {
             return s.get().density_bound();
           })
      .def("atoms",
           [](const PyMeasure& s) { return s.get().atom_locations(); })
      .def(
          "sample",
          [](const PyMeasure& s, std::int64_t n, std::uint64_t seed,
             std::uint64_t replication) {
            std::vector<double> out;
            out.reserve(static_cast<std::size_t>(n));
            RngStream rng(seed, replication, 0);
            for (std::int64_t i = 0; i < n; ++i) {
              out.push_back(s.get().sample(rng).value());
            }
            return out;
          },
          py::arg("n"), py::arg("seed"), py::arg("replication") = 0)
      .def("to_json",
           [](const PyMeasure& s) { return instance_to_string(s.spec()); })
      .def("__repr__", [](const PyMeasure& s) {
        return "<Measure " + instance_label(s.spec()) + ">";
      });

  m.def("uniform", [] {
    InstanceSpec spec;
    spec.family = InstanceFamily::uniform;
    return from_spec(spec);
  });
  m.def(
      "bounded_spike",
      [](double M, double epsilon) {
        InstanceSpec spec;
        spec.family = InstanceFamily::bounded_spike;
        spec.M = M;
        spec.epsilon = epsilon;
        return from_spec(spec);
      },
      py::arg("M"), py::arg("epsilon"));
  m.def(
      "discrete_four",
      [](double epsilon) {
        InstanceSpec spec;
        spec.family = InstanceFamily::discrete_four;
        spec.epsilon = epsilon;
        return from_spec(spec);
      },
      py::arg("epsilon"));
  m.def(
      "needle_three",
      [](double x) {
        InstanceSpec spec;
        spec.family = InstanceFamily::needle_three;
        spec.x = x;
        return from_spec(spec);
      },
      py::arg("x"));
  m.def(
      "piecewise",
      [](std::vector<double> breakpoints, std::vector<double> heights) {
        InstanceSpec spec;
        spec.family = InstanceFamily::custom_piecewise;
        spec.breakpoints = std::move(breakpoints);
        spec.heights = std::move(heights);
        return from_spec(spec);
      },
      py::arg("breakpoints"), py::arg("heights"));
  m.def(
      "atomic",
      [](std::vector<std::pair<double, double>> atoms) {
        InstanceSpec spec;
        spec.family = InstanceFamily::custom_atomic;
        spec.atoms = std::move(atoms);
        return from_spec(spec);
      },
      py::arg("atoms"));
  m.def(
      "measure_from_json",
      [](const std::string& text) { return from_spec(instance_from_string(text)); },
      py::arg("text"));

  m.def(
      "rho_tilde",
      [](const PyMeasure& s, double p) { return rho_tilde(s.get(), p); },
      py::arg("measure"), py::arg("p"));
  m.def(
      "rho", [](const PyMeasure& s, double p) { return rho(s.get(), p); },
      py::arg("measure"), py::arg("p"));
  m.def(
      "rho_bounded_density",
      [](const PyMeasure& s, double p) { return rho_bounded_density(s.get(), p); },
      py::arg("measure"), py::arg("p"));
  m.def(
      "argmax_rho",
      [](const PyMeasure& s) {
        const auto best = argmax_rho(s.get());
        return py::make_tuple(best.price, best.value);
      },
      py::arg("measure"));
  m.def(
      "approximation_gap",
      [](const PyMeasure& s, double p) { return approximation_gap(s.get(), p); },
      py::arg("measure"), py::arg("p"));
  m.def(
      "discretized_mean_bounds",
      [](const PyMeasure& s, std::int64_t T0) {
        const auto b = discretized_mean_bounds(s.get(), T0);
        return py::make_tuple(b.estimate, b.gap);
      },
      py::arg("measure"), py::arg("T0"));
  m.def(
      "optimal_benchmark",
      [](const PyMeasure& s) {
        const auto best = optimal_benchmark(s.get());
        return py::make_tuple(best.price, best.value);
      },
      py::arg("measure"));

  py::class_<Learner, std::unique_ptr<Learner>>(m, "Learner")
      .def("name", [](const Learner& l) { return std::string(l.name()); })
      .def("propose",
           [](Learner& l, std::int64_t t) { return l.propose(t).value(); })
      .def("observe_full",
           [](Learner& l, double v1, double v2) {
             l.observe(FullFeedback{Valuation(v1), Valuation(v2)});
           })
      .def("observe_two_bit", [](Learner& l, bool b1, bool b2) {
        l.observe(TwoBitFeedback{b1, b2});
      });
  m.def(
      "make_learner",
      [](const std::string& name, const py::dict& params) {
        return build_learner(parse_learner(name, params));
      },
      py::arg("name"), py::arg("params") = py::dict());

  m.def(
      "run_episode",
      [](const std::string& learner, const py::dict& params, const PyMeasure& s,
         const std::string& feedback, std::int64_t T, std::uint64_t seed,
         std::uint64_t replication) {
        const FeedbackMode mode = parse_mode(feedback);
        auto l = factory_for(learner, params, s.spec(), T, mode)();
        return records_to_dict(run_episode(*l, s.get(), mode, T, seed, replication));
      },
      py::arg("learner"), py::arg("params"), py::arg("measure"),
      py::arg("feedback"), py::arg("T"), py::arg("seed"),
      py::arg("replication") = 0);

  m.def(
      "estimate_regret",
      [](const std::string& learner, const py::dict& params, const PyMeasure& s,
         const std::string& feedback, std::int64_t T, std::int64_t R,
         std::uint64_t seed, std::vector<std::int64_t> checkpoints, int threads) {
        const FeedbackMode mode = parse_mode(feedback);
        const auto factory = factory_for(learner, params, s.spec(), T, mode);
        return curve_to_dict(estimate_regret(s.get(), factory, mode, T, R, seed,
                                             std::move(checkpoints), threads));
      },
      py::arg("learner"), py::arg("params"), py::arg("measure"),
      py::arg("feedback"), py::arg("T"), py::arg("R"), py::arg("seed"),
      py::arg("checkpoints") = std::vector<std::int64_t>{},
      py::arg("threads") = 1);

  m.def(
      "minimax_probe",
      [](const std::string& learner, const py::dict& params,
         const PyMeasure& plus, const PyMeasure& minus,
         const std::string& feedback, std::int64_t T, std::int64_t R,
         std::uint64_t seed, int threads) {
        const FeedbackMode mode = parse_mode(feedback);
        const auto factory = factory_for(learner, params, plus.spec(), T, mode);
        const auto probe =
            minimax_probe(plus.get(), minus.get(), factory, mode, T, R, seed,
                          threads);
        py::dict out;
        out["worst"] = probe.worst;
        out["worst_stderr"] = probe.worst_stderr;
        out["plus"] = curve_to_dict(probe.plus);
        out["minus"] = curve_to_dict(probe.minus);
        return out;
      },
      py::arg("learner"), py::arg("params"), py::arg("plus"), py::arg("minus"),
      py::arg("feedback"), py::arg("T"), py::arg("R"), py::arg("seed"),
      py::arg("threads") = 1);

  m.def(
      "rate_fit",
      [](std::vector<std::int64_t> ts, std::vector<double> means,
         const std::string& model) {
        if (ts.size() != means.size()) {
          throw ConfigError("checkpoints and means must have equal length");
        }
        RegretCurve curve;
        curve.T = ts.empty() ? 0 : ts.back();
        for (std::size_t i = 0; i < ts.size(); ++i) {
          curve.checkpoints.push_back({ts[i], means[i], 0.0});
        }
        RateFit::Model kind;
        if (model == "log") {
          kind = RateFit::Model::log_t;
        } else if (model == "sqrt") {
          kind = RateFit::Model::sqrt_t;
        } else {
          throw ConfigError("model must be \"log\" or \"sqrt\"");
        }
        const auto fit = rate_fit(curve, kind);
        py::dict out;
        out["model"] = model;
        out["a"] = fit.a;
        out["b"] = fit.b;
        out["rms"] = fit.rms;
        return out;
      },
      py::arg("checkpoints"), py::arg("means"), py::arg("model"));

  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed) {
        std::vector<SuiteReport> reports;
        if (suite == "representation") {
          reports.push_back(verify_representation(seed));
        } else if (suite == "lemmas") {
          reports.push_back(verify_lemmas());
        } else if (suite == "instances") {
          reports.push_back(verify_instances());
        } else if (suite == "all") {
          reports = verify_all(seed);
        } else {
          throw ConfigError("unknown suite \"" + suite + "\"");
        }
        py::list out;
        for (const auto& report : reports) {
          for (const auto& check : report.checks) {
            py::dict d;
            d["suite"] = report.suite;
            d["name"] = check.name;
            d["pass"] = check.pass;
            d["detail"] = check.detail;
            out.append(d);
          }
        }
        return out;
      },
      py::arg("suite") = "all", py::arg("seed") = 20240001);
}

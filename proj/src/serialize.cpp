#include "brokerlab/serialize.hpp"

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

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  return j.get<double>();
}

InstanceSpec builtin_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "name", "params"}, "instance");
  const json& name = require(j, "name", "builtin instance");
  if (!name.is_string()) throw ConfigError("instance name must be a string");
  json params = j.value("params", json::object());
  if (!params.is_object()) throw ConfigError("instance params must be an object");

  InstanceSpec spec;
  const std::string n = name.get<std::string>();
  if (n == "uniform") {
    reject_unknown_keys(params, {}, "uniform params");
    spec.family = InstanceFamily::uniform;
  } else if (n == "bounded_spike") {
    reject_unknown_keys(params, {"M", "epsilon"}, "bounded_spike params");
    spec.family = InstanceFamily::bounded_spike;
    spec.M = number_at(require(params, "M", "bounded_spike params"),
                       "bounded_spike M");
    spec.epsilon = number_at(require(params, "epsilon", "bounded_spike params"),
                             "bounded_spike epsilon");
  } else if (n == "discrete_four") {
    reject_unknown_keys(params, {"epsilon"}, "discrete_four params");
    spec.family = InstanceFamily::discrete_four;
    spec.epsilon = number_at(require(params, "epsilon", "discrete_four params"),
                             "discrete_four epsilon");
  } else if (n == "needle_three") {
    reject_unknown_keys(params, {"x"}, "needle_three params");
    spec.family = InstanceFamily::needle_three;
    spec.x = number_at(require(params, "x", "needle_three params"),
                       "needle_three x");
  } else {
    throw ConfigError("unknown builtin instance \"" + n + "\"");
  }
  return spec;
}

}  // namespace

InstanceSpec instance_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("instance must be a JSON object");
  const json& kind = require(j, "kind", "instance");
  if (!kind.is_string()) throw ConfigError("instance kind must be a string");
  const std::string k = kind.get<std::string>();

  InstanceSpec spec;
  if (k == "builtin") {
    spec = builtin_from_json(j);
  } else if (k == "piecewise") {
    reject_unknown_keys(j, {"kind", "breakpoints", "heights"}, "instance");
    const json& bp = require(j, "breakpoints", "piecewise instance");
    const json& h = require(j, "heights", "piecewise instance");
    if (!bp.is_array() || !h.is_array()) {
      throw ConfigError("piecewise breakpoints/heights must be arrays");
    }
    spec.family = InstanceFamily::custom_piecewise;
    for (const auto& v : bp) {
      spec.breakpoints.push_back(number_at(v, "piecewise breakpoint"));
    }
    for (const auto& v : h) {
      spec.heights.push_back(number_at(v, "piecewise height"));
    }
  } else if (k == "atomic") {
    reject_unknown_keys(j, {"kind", "atoms"}, "instance");
    const json& atoms = require(j, "atoms", "atomic instance");
    if (!atoms.is_array()) throw ConfigError("atoms must be an array");
    spec.family = InstanceFamily::custom_atomic;
    for (const auto& pair : atoms) {
      if (!pair.is_array() || pair.size() != 2) {
        throw ConfigError("each atom must be a [location, weight] pair");
      }
      spec.atoms.emplace_back(number_at(pair[0], "atom location"),
                              number_at(pair[1], "atom weight"));
    }
  } else {
    throw ConfigError("unknown instance kind \"" + k + "\"");
  }
  // construction validates parameter ranges, ordering, and total mass;
  // surface factory rejections as schema diagnostics
  try {
    make_measure(spec);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid instance: ") + e.what());
  }
  return spec;
}

json instance_to_json(const InstanceSpec& spec) {
  json j;
  switch (spec.family) {
    case InstanceFamily::uniform:
      j = {{"kind", "builtin"}, {"name", "uniform"}, {"params", json::object()}};
      break;
    case InstanceFamily::bounded_spike:
      j = {{"kind", "builtin"},
           {"name", "bounded_spike"},
           {"params", {{"M", spec.M}, {"epsilon", spec.epsilon}}}};
      break;
    case InstanceFamily::discrete_four:
      j = {{"kind", "builtin"},
           {"name", "discrete_four"},
           {"params", {{"epsilon", spec.epsilon}}}};
      break;
    case InstanceFamily::needle_three:
      j = {{"kind", "builtin"},
           {"name", "needle_three"},
           {"params", {{"x", spec.x}}}};
      break;
    case InstanceFamily::custom_piecewise:
      j = {{"kind", "piecewise"},
           {"breakpoints", spec.breakpoints},
           {"heights", spec.heights}};
      break;
    case InstanceFamily::custom_atomic: {
      json atoms = json::array();
      for (const auto& [loc, w] : spec.atoms) {
        atoms.push_back(json::array({loc, w}));
      }
      j = {{"kind", "atomic"}, {"atoms", atoms}};
      break;
    }
  }
  return j;
}

InstanceSpec instance_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return instance_from_json(j);
}

std::string instance_to_string(const InstanceSpec& spec) {
  return instance_to_json(spec).dump();
}

}  // namespace brokerlab

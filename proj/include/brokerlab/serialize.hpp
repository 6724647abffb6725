#pragma once

#include <string>

#include <json.hpp>

#include "brokerlab/instances.hpp"

namespace brokerlab {

/// Raised on any malformed or out-of-schema JSON input. The message carries
/// the offending key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Measure descriptions:
///   {"kind":"piecewise","breakpoints":[...],"heights":[...]}
///   {"kind":"atomic","atoms":[[loc,w],...]}
///   {"kind":"builtin","name":...,"params":{...}}
/// Unknown fields are rejected.
InstanceSpec instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const InstanceSpec& spec);

InstanceSpec instance_from_string(const std::string& text);
std::string instance_to_string(const InstanceSpec& spec);

}  // namespace brokerlab

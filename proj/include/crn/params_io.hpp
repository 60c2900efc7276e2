#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crn/dynamics.hpp"
#include "crn/network.hpp"

namespace crn {

/// Parameter file contents. Maps are keyed by species name / reaction label:
///   { "cbar": {...}, "k": {...} }                       detailed balance
///   { "cbar": {...}, "kplus": {...}, "kminus": {...} }  general mass action (cbar optional)
/// plus optional "c0": {...} for simulations and "t_max": number.
struct ParamSet {
  std::optional<KineticParams> db;
  std::optional<GeneralKineticParams> general;
  std::vector<double> cbar;  // empty when not given
  std::vector<double> c0;    // empty when not given
  std::optional<double> t_max;

  bool is_general() const { return general.has_value(); }
};

class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ParamSet params_from_json(const nlohmann::json& j, const Network& net);

/// `source` is either a path or an inline JSON object (first non-blank character '{').
ParamSet load_params(const std::string& source, const Network& net);

nlohmann::ordered_json params_to_json(const Network& net, const KineticParams& params);

}  // namespace crn

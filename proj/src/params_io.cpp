#include "crn/params_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace crn {

namespace {

double number(const nlohmann::json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>()).get_d();
    } catch (const std::invalid_argument&) {
    }
  }
  throw ParamError(what + ": expected a number");
}

std::vector<double> species_map(const nlohmann::json& j, const Network& net, const std::string& key) {
  const auto& m = j.at(key);
  std::vector<double> out(net.num_species(), std::nan(""));
  if (m.is_array()) {
    if (m.size() != net.num_species()) throw ParamError("'" + key + "' has wrong length");
    for (std::size_t s = 0; s < m.size(); ++s) out[s] = number(m[s], key);
    return out;
  }
  if (!m.is_object()) throw ParamError("'" + key + "' must be an object keyed by species");
  for (auto it = m.begin(); it != m.end(); ++it) {
    auto idx = net.species_index(it.key());
    if (!idx) throw ParamError("'" + key + "' names unknown species '" + it.key() + "'");
    out[*idx] = number(it.value(), key + "." + it.key());
  }
  for (std::size_t s = 0; s < out.size(); ++s)
    if (std::isnan(out[s])) throw ParamError("'" + key + "' is missing species '" + net.species()[s].name + "'");
  return out;
}

std::vector<double> reaction_map(const nlohmann::json& j, const Network& net, const std::string& key) {
  const auto& m = j.at(key);
  std::vector<double> out(net.num_reactions(), std::nan(""));
  if (m.is_array()) {
    if (m.size() != net.num_reactions()) throw ParamError("'" + key + "' has wrong length");
    for (std::size_t r = 0; r < m.size(); ++r) out[r] = number(m[r], key);
    return out;
  }
  if (!m.is_object()) throw ParamError("'" + key + "' must be an object keyed by reaction label");
  for (auto it = m.begin(); it != m.end(); ++it) {
    auto idx = net.reaction_index(it.key());
    if (!idx) throw ParamError("'" + key + "' names unknown reaction '" + it.key() + "'");
    out[*idx] = number(it.value(), key + "." + it.key());
  }
  for (std::size_t r = 0; r < out.size(); ++r)
    if (std::isnan(out[r])) throw ParamError("'" + key + "' is missing reaction '" + net.reactions()[r].label + "'");
  return out;
}

}  // namespace

ParamSet params_from_json(const nlohmann::json& j, const Network& net) {
  if (!j.is_object()) throw ParamError("parameters must be a JSON object");
  ParamSet ps;
  if (j.contains("cbar")) ps.cbar = species_map(j, net, "cbar");
  if (j.contains("c0")) ps.c0 = species_map(j, net, "c0");
  if (j.contains("t_max")) ps.t_max = number(j.at("t_max"), "t_max");
  const bool has_k = j.contains("k");
  const bool has_pm = j.contains("kplus") || j.contains("kminus");
  if (has_k && has_pm) throw ParamError("give either 'k' or 'kplus'/'kminus', not both");
  try {
    if (has_k) {
      if (ps.cbar.empty()) throw ParamError("'k' needs 'cbar'");
      KineticParams p{ps.cbar, reaction_map(j, net, "k")};
      p.validate(net);
      ps.db = std::move(p);
    } else if (has_pm) {
      if (!j.contains("kplus") || !j.contains("kminus")) throw ParamError("'kplus' and 'kminus' go together");
      GeneralKineticParams g{reaction_map(j, net, "kplus"), reaction_map(j, net, "kminus")};
      g.validate(net);
      ps.general = std::move(g);
    } else {
      throw ParamError("parameters need 'k' or 'kplus'/'kminus'");
    }
  } catch (const ParamError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParamError(e.what());
  }
  for (double x : ps.cbar)
    if (!(x > 0)) throw ParamError("cbar must be positive");
  for (double x : ps.c0)
    if (!(x > 0)) throw ParamError("c0 must be positive");
  return ps;
}

ParamSet load_params(const std::string& source, const Network& net) {
  std::string text;
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && source[first] == '{') {
    text = source;
  } else {
    std::ifstream in(source);
    if (!in) throw ParamError("cannot open parameter file '" + source + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParamError(std::string("invalid parameter JSON: ") + e.what());
  }
  return params_from_json(j, net);
}

nlohmann::ordered_json params_to_json(const Network& net, const KineticParams& params) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json cbar = nlohmann::ordered_json::object();
  nlohmann::ordered_json k = nlohmann::ordered_json::object();
  for (std::size_t s = 0; s < net.num_species(); ++s) cbar[net.species()[s].name] = params.cbar[s];
  for (std::size_t r = 0; r < net.num_reactions(); ++r) k[net.reactions()[r].label] = params.k[r];
  j["cbar"] = cbar;
  j["k"] = k;
  return j;
}

}  // namespace crn

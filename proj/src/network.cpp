#include "crn/network.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace crn {

RationalVector Reaction::net() const {
  RationalVector n(alpha.size());
  for (std::size_t s = 0; s < alpha.size(); ++s) n[s] = alpha[s] - beta[s];
  return n;
}

Network::Network(std::vector<std::string> species_names, std::vector<Reaction> reactions) {
  if (species_names.empty()) throw NetworkError("network has no species");
  if (reactions.empty()) throw NetworkError("network has no reactions");
  std::set<std::string> seen;
  for (std::size_t s = 0; s < species_names.size(); ++s) {
    if (species_names[s].empty()) throw NetworkError("empty species name");
    if (!seen.insert(species_names[s]).second) throw NetworkError("duplicate species '" + species_names[s] + "'");
    species_.push_back({species_names[s], s});
  }
  const std::size_t ns = species_.size();
  stoich_ = RationalMatrix(ns, reactions.size());
  for (std::size_t r = 0; r < reactions.size(); ++r) {
    auto& rx = reactions[r];
    if (rx.alpha.size() != ns || rx.beta.size() != ns)
      throw NetworkError("reaction " + std::to_string(r + 1) + " has wrong coefficient count");
    bool nonzero = false;
    for (std::size_t s = 0; s < ns; ++s) {
      if (rx.alpha[s] < 0 || rx.beta[s] < 0)
        throw NetworkError("reaction " + std::to_string(r + 1) + " has a negative coefficient");
      stoich_(s, r) = rx.alpha[s] - rx.beta[s];
      if (stoich_(s, r) != 0) nonzero = true;
    }
    if (!nonzero) throw NetworkError("reaction " + std::to_string(r + 1) + " has a zero net stoichiometry");
    if (rx.label.empty()) rx.label = "r" + std::to_string(r + 1);
  }
  std::set<std::string> labels;
  for (const auto& rx : reactions)
    if (!labels.insert(rx.label).second) throw NetworkError("duplicate reaction label '" + rx.label + "'");
  reactions_ = std::move(reactions);
}

std::optional<std::size_t> Network::species_index(std::string_view name) const {
  for (const auto& s : species_)
    if (s.name == name) return s.index;
  return std::nullopt;
}

std::optional<std::size_t> Network::reaction_index(std::string_view label) const {
  for (std::size_t r = 0; r < reactions_.size(); ++r)
    if (reactions_[r].label == label) return r;
  return std::nullopt;
}

std::vector<std::string> Network::species_names() const {
  std::vector<std::string> names;
  for (const auto& s : species_) names.push_back(s.name);
  return names;
}

Network Network::restrict_to(std::span<const std::size_t> reaction_subset) const {
  std::vector<Reaction> rx;
  for (auto r : reaction_subset) {
    if (r >= reactions_.size()) throw std::out_of_range("reaction index out of range");
    rx.push_back(reactions_[r]);
  }
  return Network(species_names(), std::move(rx));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'' || ch == '.')) return false;
  return true;
}

using Side = std::map<std::string, Rational>;

// "2 X1 + X2" -> {X1: 2, X2: 1}; "0" or "" -> empty.
Side parse_side(std::string_view text, std::size_t line, std::vector<std::string>& order) {
  Side side;
  text = trim(text);
  if (text.empty() || text == "0" || text == "\xE2\x88\x85") return side;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t plus = text.find('+', start);
    std::string_view term = trim(text.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start));
    if (term.empty()) throw NetworkError("empty term", line);
    Rational coef = 1;
    std::string_view name = term;
    auto space = term.find_first_of(" \t");
    if (space != std::string_view::npos) {
      std::string_view c = trim(term.substr(0, space));
      name = trim(term.substr(space));
      try {
        coef = parse_rational(c);
      } catch (const std::invalid_argument&) {
        throw NetworkError("non-numeric coefficient '" + std::string(c) + "'", line);
      }
    } else if (!term.empty() && (std::isdigit(static_cast<unsigned char>(term[0])) || term[0] == '-')) {
      // "2X1" style: split leading number
      std::size_t k = 0;
      while (k < term.size() && (std::isdigit(static_cast<unsigned char>(term[k])) || term[k] == '/' ||
                                 term[k] == '.' || term[k] == '-'))
        ++k;
      try {
        coef = parse_rational(term.substr(0, k));
      } catch (const std::invalid_argument&) {
        throw NetworkError("non-numeric coefficient in '" + std::string(term) + "'", line);
      }
      name = term.substr(k);
    }
    if (coef < 0) throw NetworkError("negative coefficient", line);
    if (!valid_identifier(name)) throw NetworkError("invalid species name '" + std::string(name) + "'", line);
    std::string key(name);
    if (std::find(order.begin(), order.end(), key) == order.end()) order.push_back(key);
    side[key] += coef;
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return side;
}

}  // namespace

Network parse_network(std::string_view text) {
  struct RawReaction {
    Side lhs, rhs;
    std::string label;
    std::size_t line;
  };
  std::vector<std::string> order;
  std::vector<RawReaction> raw;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::string label;
    if (auto bar = line.find('|'); bar != std::string_view::npos) {
      label = std::string(trim(line.substr(bar + 1)));
      line = trim(line.substr(0, bar));
      if (label.empty()) throw NetworkError("empty label after '|'", line_no);
    }
    auto arrow = line.find("<->");
    if (arrow == std::string_view::npos) throw NetworkError("expected '<->'", line_no);
    if (line.find("<->", arrow + 3) != std::string_view::npos) throw NetworkError("more than one '<->'", line_no);
    RawReaction rr;
    rr.lhs = parse_side(line.substr(0, arrow), line_no, order);
    rr.rhs = parse_side(line.substr(arrow + 3), line_no, order);
    rr.label = label;
    rr.line = line_no;
    if (rr.lhs.empty() && rr.rhs.empty()) throw NetworkError("both sides empty", line_no);
    raw.push_back(std::move(rr));
  }
  if (raw.empty()) throw NetworkError("no reactions found");

  std::vector<Reaction> reactions;
  for (const auto& rr : raw) {
    Reaction rx;
    rx.alpha.assign(order.size(), Rational(0));
    rx.beta.assign(order.size(), Rational(0));
    for (std::size_t s = 0; s < order.size(); ++s) {
      if (auto it = rr.lhs.find(order[s]); it != rr.lhs.end()) rx.alpha[s] = it->second;
      if (auto it = rr.rhs.find(order[s]); it != rr.rhs.end()) rx.beta[s] = it->second;
    }
    if (rx.alpha == rx.beta) throw NetworkError("reaction has zero net stoichiometry", rr.line);
    rx.label = rr.label;
    reactions.push_back(std::move(rx));
  }
  return Network(std::move(order), std::move(reactions));
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NetworkError("cannot open network file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

namespace {

std::string side_to_dsl(const Network& net, const RationalVector& coefs) {
  std::string out;
  for (std::size_t s = 0; s < coefs.size(); ++s) {
    if (coefs[s] == 0) continue;
    if (!out.empty()) out += " + ";
    if (coefs[s] != 1) out += to_string(coefs[s]) + " ";
    out += net.species()[s].name;
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string to_dsl(const Network& net) {
  std::string out;
  for (const auto& rx : net.reactions()) {
    out += side_to_dsl(net, rx.alpha) + " <-> " + side_to_dsl(net, rx.beta) + " | " + rx.label + "\n";
  }
  return out;
}

nlohmann::json to_json(const Network& net) {
  nlohmann::json j;
  j["species"] = net.species_names();
  j["reactions"] = nlohmann::json::array();
  for (const auto& rx : net.reactions()) {
    nlohmann::json alpha = nlohmann::json::object();
    nlohmann::json beta = nlohmann::json::object();
    for (std::size_t s = 0; s < net.num_species(); ++s) {
      if (rx.alpha[s] != 0) alpha[net.species()[s].name] = to_string(rx.alpha[s]);
      if (rx.beta[s] != 0) beta[net.species()[s].name] = to_string(rx.beta[s]);
    }
    j["reactions"].push_back({{"label", rx.label}, {"alpha", alpha}, {"beta", beta}});
  }
  return j;
}

RationalMatrix stoichiometric_matrix(const Network& net) { return net.stoichiometry(); }

std::vector<std::vector<std::size_t>> reaction_subsets(std::size_t num_reactions) {
  if (num_reactions >= 63) throw std::invalid_argument("too many reactions for subset enumeration");
  std::vector<std::vector<std::size_t>> subsets;
  const std::uint64_t total = std::uint64_t{1} << num_reactions;
  subsets.reserve(total - 1);
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t r = 0; r < num_reactions; ++r)
      if (mask & (std::uint64_t{1} << r)) subset.push_back(r);
    subsets.push_back(std::move(subset));
  }
  return subsets;
}

std::vector<Network> subsystems(const Network& net) {
  std::vector<Network> out;
  for (const auto& subset : reaction_subsets(net.num_reactions())) out.push_back(net.restrict_to(subset));
  return out;
}

}  // namespace crn

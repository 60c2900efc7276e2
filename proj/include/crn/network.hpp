#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crn/exact_linalg.hpp"
#include "crn/rational.hpp"

namespace crn {

struct Species {
  std::string name;
  std::size_t index = 0;

  friend bool operator==(const Species&, const Species&) = default;
};

/// One reversible reaction  sum alpha_s X_s <-> sum beta_s X_s.
/// alpha and beta are dense over the species of the owning network.
struct Reaction {
  RationalVector alpha;
  RationalVector beta;
  std::string label;

  RationalVector net() const;  // alpha - beta

  friend bool operator==(const Reaction&, const Reaction&) = default;
};

class NetworkError : public std::runtime_error {
 public:
  NetworkError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Species, reactions and the derived stoichiometric matrix N = alpha - beta.
/// Immutable after construction.
class Network {
 public:
  Network(std::vector<std::string> species_names, std::vector<Reaction> reactions);

  std::span<const Species> species() const { return species_; }
  std::span<const Reaction> reactions() const { return reactions_; }
  std::size_t num_species() const { return species_.size(); }
  std::size_t num_reactions() const { return reactions_.size(); }

  std::optional<std::size_t> species_index(std::string_view name) const;
  std::optional<std::size_t> reaction_index(std::string_view label) const;
  std::vector<std::string> species_names() const;

  /// |S| x |R|, column r equals alpha_r - beta_r.
  const RationalMatrix& stoichiometry() const { return stoich_; }

  /// Same species, only the listed reactions (in the given order).
  Network restrict_to(std::span<const std::size_t> reaction_subset) const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.species_ == b.species_ && a.reactions_ == b.reactions_;
  }

 private:
  std::vector<Species> species_;
  std::vector<Reaction> reactions_;
  RationalMatrix stoich_;
};

/// Parses the reaction DSL: one reaction per line,
///   2 X1 <-> X2 + X3 | label     # comment
/// Coefficients default to 1 and may be fractions ("3/2") or decimals.
Network parse_network(std::string_view text);
Network load_network(const std::string& path);

std::string to_dsl(const Network& net);
nlohmann::json to_json(const Network& net);

RationalMatrix stoichiometric_matrix(const Network& net);

/// Nonempty reaction subsets ordered by bitmask (bit r = reaction r).
std::vector<std::vector<std::size_t>> reaction_subsets(std::size_t num_reactions);

/// All 2^|R| - 1 subsystems, in reaction_subsets order.
std::vector<Network> subsystems(const Network& net);

}  // namespace crn

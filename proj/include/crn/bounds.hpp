#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crn/dynamics.hpp"
#include "crn/execution.hpp"
#include "crn/linearized.hpp"
#include "crn/matroid.hpp"
#include "crn/network.hpp"

namespace crn {

/// kappa when every reaction reads kappa X_s <-> kappa X_s' with one common kappa.
std::optional<Rational> homogeneous_order(const Network& net);

/// Homogeneous of order 1.
bool is_unimolecular(const Network& net);

/// P = sum_s cbar_s / cbar_i; throws std::invalid_argument for non-homogeneous networks.
double homogeneous_precision(const Network& net, std::span<const double> cbar, std::size_t i);
Rational homogeneous_precision(const Network& net, const RationalVector& cbar, std::size_t i);

/// sqrt(cbar_i / cbar_o).
double sensitivity_sqrt_bound(std::span<const double> cbar, std::size_t i, std::size_t o);

struct SubsystemBound {
  Rational value;
  std::vector<std::size_t> reactions;  // witnessing subsystem
  InvPrecisionCertificate certificate;
};

/// max over nonempty reaction subsets of maxInvP(subsystem, i, o). Ties go to the earliest subset
/// in bitmask order, so the result does not depend on the schedule.
SubsystemBound max_sensitivity_lower_bound(const Network& net, std::size_t i, std::size_t o,
                                           std::size_t max_reactions = 20, Execution exec = Execution::Parallel);

struct BoundFlag {
  std::string name;
  bool applicable = true;
  bool holds = true;
  double lhs = 0.0;  // holds iff lhs <= rhs + tolerance
  double rhs = 0.0;
  double tolerance = 0.0;
  double margin() const { return rhs - lhs; }
};

struct BoundReport {
  std::string input, output;
  OperatorKind kind = OperatorKind::DetailedBalance;
  double sensitivity = 0.0;
  double t_at_sensitivity = 0.0;
  bool sensitivity_at_horizon = false;
  double inv_precision = 0.0;
  bool inv_precision_converged = true;
  bool divergent = false;
  double sqrt_bound = 0.0;
  Rational max_inv_p;
  std::optional<Rational> homogeneous_order;
  bool reversible_unimolecular = false;
  std::vector<BoundFlag> flags;

  bool all_hold() const;
};

BoundReport check_all_bounds(const Network& net, const KineticParams& params, std::size_t i, std::size_t o);
BoundReport check_all_bounds(const Network& net, std::span<const double> cbar, const GeneralKineticParams& params,
                             std::size_t i, std::size_t o);

nlohmann::ordered_json to_json(const BoundReport& report);
void print_table(std::ostream& out, const BoundReport& report);

/// Log-uniform in [1e-3, 1e3] per entry.
KineticParams random_db_params(const Network& net, std::mt19937_64& rng);
GeneralKineticParams random_general_params(const Network& net, std::mt19937_64& rng);

/// Positive stationary state of a unimolecular network (normalized to sum |S|).
std::vector<double> unimolecular_steady_state(const Network& net, const GeneralKineticParams& params);

struct VerifySummary {
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failing flags
  nlohmann::ordered_json to_json() const;
};

/// Random parameter trials over every ordered (i, o) pair of the listed pairs; DB kinetics unless
/// the network is unimolecular and `general` is set, in which case non-detailed-balance rates are drawn.
VerifySummary verify_bounds(const Network& net, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                            std::size_t trials, std::uint64_t seed, bool general = false);

}  // namespace crn

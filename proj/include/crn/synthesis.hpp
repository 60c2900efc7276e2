#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "crn/matroid.hpp"

namespace crn {

struct SynthesisResult {
  std::vector<double> cbar;  // gauge fixed so that min * max = 1
  std::vector<double> u;
  std::vector<double> w;     // rescaled with cbar
  RationalVector u_exact;
  RationalVector w_exact;    // before the gauge rescaling
  std::vector<std::pair<std::size_t, double>> deltas;  // in the order they were applied
  double achieved = 0.0;     // u_o
  Rational achieved_exact;
  Rational max_inv_p;
  bool degenerate = false;   // maxInvP = 0, zero witnesses
};

class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds (u, w, cbar) with u in W-perp, w in W, u - e_i = diag(1/cbar) w and u_o >= maxInvP - epsilon.
SynthesisResult synthesize_cbar(const RationalMatrix& n, std::size_t i, std::size_t o, double epsilon);

struct SignCheck {
  bool ok = true;
  std::vector<std::size_t> violations;  // species where the sign condition fails
};

/// sign(u_s) = sign(w_s) for s != i and sign(u_i - 1) = sign(w_i); zero matches zero only.
SignCheck verify_sign_conditions(const RationalVector& u, const RationalVector& w, std::size_t i);
SignCheck verify_sign_conditions(const std::vector<double>& u, const std::vector<double>& w, std::size_t i);

nlohmann::ordered_json to_json(const SynthesisResult& res, const std::vector<std::string>& species);

}  // namespace crn

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crn/dynamics.hpp"
#include "crn/execution.hpp"
#include "crn/network.hpp"

namespace crn {

enum class OperatorKind { DetailedBalance, General };

/// Relaxation operator acting on multiplicative perturbations u = (c - cbar)/cbar.
struct LinearOperator {
  Eigen::MatrixXd matrix;
  OperatorKind kind = OperatorKind::DetailedBalance;
  std::vector<double> cbar;
  std::vector<std::string> species;
  Eigen::MatrixXd range_basis;  // columns span W = range N
  std::size_t nullity = 0;      // dim W-perp, from the exact rank of N

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// A_ss' = -(1/cbar_s) sum_r N_sr k_r N_s'r.
LinearOperator linearize_db(const Network& net, const KineticParams& params);

/// A^_ss' = -(1/cbar_s) sum_r N_sr (alpha_s'r k+_r cbar^alpha_r - beta_s'r k-_r cbar^beta_r).
LinearOperator linearize_general(const Network& net, std::span<const double> cbar,
                                 const GeneralKineticParams& params);

/// Eigen-decomposition used by the exponential and the time window.
/// Detailed balance: e^{tA} = D^{-1/2} [ P0 + Y e^{Lt} Y^T ] D^{1/2} with P0 the projector on the
/// kernel of the symmetrized operator and Y orthonormal on its range.
/// General: eigenvalues only.
struct Spectrum {
  Eigen::VectorXd rates;           // DB: nonzero eigenvalues (negative), ascending magnitude order not assumed
  Eigen::MatrixXd modes;           // DB: orthonormal eigenvectors for `rates`, |S| x rank
  Eigen::MatrixXd kernel_projector;  // DB: P0
  Eigen::VectorXcd eigenvalues;    // all eigenvalues of the operator
  double max_abs_rate = 0.0;       // largest |lambda| over nonzero modes
  double min_abs_rate = 0.0;       // smallest |lambda| over nonzero modes
  bool unstable = false;           // a nonzero mode with positive real part
};

Spectrum spectrum(const LinearOperator& op);

/// e^{tA}, t >= 0.
Eigen::MatrixXd matrix_exponential(const LinearOperator& op, double t);
Eigen::MatrixXd matrix_exponential(const LinearOperator& op, const Spectrum& spec, double t);

struct TimeWindow {
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t samples = 400;
};

/// t_min = 0.01/|lambda|_max, t_max = 100/|lambda|_min over nonzero modes.
TimeWindow default_window(const Spectrum& spec, std::size_t samples = 400);

struct ResponseCurve {
  std::size_t input = 0;
  std::size_t output = 0;
  std::vector<double> times;   // t = 0 followed by log-spaced samples
  std::vector<double> values;  // (e^{tA})_{oi}
};

/// Single entry (e^{tA})_{oi}.
double response_entry(const LinearOperator& op, const Spectrum& spec, std::size_t i, std::size_t o, double t);

ResponseCurve response_curve(const LinearOperator& op, std::size_t i, std::size_t o,
                             std::optional<TimeWindow> window = std::nullopt,
                             Execution exec = Execution::Parallel);
ResponseCurve response_curve(const LinearOperator& op, const Spectrum& spec, std::size_t i, std::size_t o,
                             const TimeWindow& window, Execution exec = Execution::Parallel);

struct SensitivityResult {
  double value = 0.0;  // sup_t (e^{tA})_{oi}
  double t_max = 0.0;  // maximizing time (infinity when the sup is the limit)
  double min_value = 0.0;
  double t_min = 0.0;
  bool at_horizon = false;  // best grid sample was the last one
};

SensitivityResult sensitivity(const LinearOperator& op, std::size_t i, std::size_t o,
                              std::optional<TimeWindow> window = std::nullopt);

struct PrecisionLimit {
  double value = 0.0;  // lim_{t->inf} (e^{tA})_{oi}
  bool converged = true;
  bool divergent = false;
};

PrecisionLimit inverse_precision_limit(const LinearOperator& op, std::size_t i, std::size_t o);

void write_response_csv(std::ostream& out, const ResponseCurve& curve);

}  // namespace crn

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "crn/network.hpp"

namespace crn {

/// Detailed-balance parameters: reference stationary state cbar and one rate scale per reaction.
struct KineticParams {
  std::vector<double> cbar;
  std::vector<double> k;

  void validate(const Network& net) const;
};

/// Plain mass-action rate constants, K_r(c) = k+_r c^alpha_r - k-_r c^beta_r.
struct GeneralKineticParams {
  std::vector<double> kplus;
  std::vector<double> kminus;

  void validate(const Network& net) const;
  bool reversible() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};

struct IntegratorOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 picks a step from the first sampling interval
  std::size_t max_steps = 5'000'000;
  bool require_positive = true;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// K_r(c) = k_r [ (c/cbar)^alpha_r - (c/cbar)^beta_r ].
std::vector<double> db_rates(const Network& net, const KineticParams& params, std::span<const double> c);

/// K_r(c) = k+_r c^alpha_r - k-_r c^beta_r.
std::vector<double> mass_action_rates(const Network& net, const GeneralKineticParams& params,
                                      std::span<const double> c);

/// Right-hand side and Jacobian of a first-order system y' = f(y).
struct OdeSystem {
  std::function<void(const Eigen::VectorXd& y, Eigen::VectorXd& dydt)> rhs;
  std::function<void(const Eigen::VectorXd& y, Eigen::MatrixXd& jac)> jacobian;
};

/// Adaptive Rosenbrock integration sampled at `grid` (increasing, grid[0] is the start time).
/// With require_positive, steps that leave the open positive orthant are rejected and halved.
Trajectory integrate_stiff(const OdeSystem& system, std::span<const double> y0, std::span<const double> grid,
                           const IntegratorOptions& options = {});

/// c' = -N K(c) under detailed-balance kinetics.
Trajectory simulate(const Network& net, const KineticParams& params, std::span<const double> c0,
                    std::span<const double> t_grid, const IntegratorOptions& options = {});

/// c' = -N K(c) under general mass-action kinetics.
Trajectory simulate(const Network& net, const GeneralKineticParams& params, std::span<const double> c0,
                    std::span<const double> t_grid, const IntegratorOptions& options = {});

/// u' = A u, no positivity constraint.
Trajectory simulate_linear(const Eigen::MatrixXd& a, std::span<const double> u0, std::span<const double> t_grid,
                           const IntegratorOptions& options = {});

/// Integrates until |c'|_inf < tol * |c|_inf (checked once per decade of time) or the horizon.
std::vector<double> integrate_to_steady_state(const Network& net, const GeneralKineticParams& params,
                                              std::span<const double> c0, double horizon = 1e12,
                                              double tol = 1e-10, const IntegratorOptions& options = {});

/// 0 followed by `samples` log-spaced points in [t_min, t_max].
std::vector<double> log_time_grid(double t_min, double t_max, std::size_t samples, bool include_zero = true);

/// The unique stationary point in (gamma + range N) with N^T log(c/cbar) = 0.
std::vector<double> stationary_state(const Network& net, const KineticParams& params, std::span<const double> gamma,
                                     double tol = 1e-12);

/// Equivalent parameters (c_hat[gamma], k~) with k~_r = k_r (c_hat/cbar)^alpha_r.
KineticParams rebase_params(const Network& net, const KineticParams& params, std::span<const double> gamma);

/// F(c) = sum_s c_s (log(c_s/cbar_s) - 1) + cbar_s, zero at cbar.
double free_energy(std::span<const double> c, std::span<const double> cbar);

/// Detailed-balance description of mass-action constants that admit a detailed-balanced state c_star:
/// k_r := k+_r c_star^alpha_r.
KineticParams detailed_balance_form(const Network& net, const GeneralKineticParams& params,
                                    std::span<const double> c_star);

void write_trajectory_csv(std::ostream& out, const Network& net, const Trajectory& traj);

}  // namespace crn

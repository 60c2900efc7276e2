#pragma once

// Plain interface to the odeint Rosenbrock stepper. Boost 1.74 uBLAS does not build as C++20,
// so rosenbrock.cpp is compiled as C++17 and only this header is shared.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace crn::detail {

struct RosenbrockProblem {
  std::size_t dim = 0;
  std::function<void(const double* y, double* dydt)> rhs;
  std::function<void(const double* y, double* jac)> jacobian;  // row-major dim x dim
};

struct RosenbrockSettings {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double initial_step = 0.0;
  std::size_t max_steps = 5000000;
  bool require_positive = true;
};

struct RosenbrockOutcome {
  bool ok = true;
  double fail_time = 0.0;
  std::string message;
};

/// Integrates from grid[0]; states[k] receives the solution at grid[k] (states[0] = y0).
RosenbrockOutcome rosenbrock_integrate(const RosenbrockProblem& problem, const std::vector<double>& y0,
                                       const std::vector<double>& grid, const RosenbrockSettings& settings,
                                       std::vector<std::vector<double>>& states);

}  // namespace crn::detail

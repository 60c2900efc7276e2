#include "rosenbrock.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <utility>

namespace crn::detail {

namespace odeint = boost::numeric::odeint;
using UVector = boost::numeric::ublas::vector<double>;
using UMatrix = boost::numeric::ublas::matrix<double>;

RosenbrockOutcome rosenbrock_integrate(const RosenbrockProblem& problem, const std::vector<double>& y0,
                                       const std::vector<double>& grid, const RosenbrockSettings& settings,
                                       std::vector<std::vector<double>>& states) {
  const std::size_t n = problem.dim;
  std::vector<double> ybuf(n), dbuf(n), jbuf(n * n);

  auto deriv = [&](const UVector& x, UVector& dxdt, double) {
    std::copy(x.begin(), x.end(), ybuf.begin());
    problem.rhs(ybuf.data(), dbuf.data());
    std::copy(dbuf.begin(), dbuf.end(), dxdt.begin());
  };
  auto jacobi = [&](const UVector& x, UMatrix& jac, double, UVector& dfdt) {
    std::copy(x.begin(), x.end(), ybuf.begin());
    problem.jacobian(ybuf.data(), jbuf.data());
    for (std::size_t a = 0; a < n; ++a) {
      dfdt[a] = 0.0;
      for (std::size_t b = 0; b < n; ++b) jac(a, b) = jbuf[a * n + b];
    }
  };
  auto sys = std::make_pair(deriv, jacobi);

  odeint::rosenbrock4_controller<odeint::rosenbrock4<double>> stepper(settings.abs_tol, settings.rel_tol);
  UVector x(n);
  std::copy(y0.begin(), y0.end(), x.begin());
  states.clear();
  states.push_back(y0);

  double t = grid.front();
  double dt = settings.initial_step;
  if (!(dt > 0)) dt = grid.size() > 1 ? (grid[1] - grid[0]) * 1e-3 : 1e-6;
  std::size_t steps = 0;

  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double target = grid[k];
    while (t < target) {
      if (++steps > settings.max_steps) return {false, t, "step budget exhausted"};
      const double remaining = target - t;
      const bool capped = dt >= remaining;
      double h = capped ? remaining : dt;
      const double h_tried = h;
      const UVector x_saved = x;
      const double t_saved = t;
      if (stepper.try_step(sys, x, t, h) == odeint::fail) {
        dt = h;
      } else {
        bool admissible = true;
        for (std::size_t s = 0; s < n; ++s)
          if (!std::isfinite(x[s]) || (settings.require_positive && !(x[s] > 0))) admissible = false;
        if (!admissible) {
          // positivity guard: undo and halve
          x = x_saved;
          t = t_saved;
          dt = h_tried / 2;
        } else if (capped) {
          t = target;
          dt = std::max(dt, h);
        } else {
          dt = h;
        }
      }
      if (!(dt > 1e-15 * std::max(1.0, std::abs(t))) || !std::isfinite(dt)) return {false, t, "step size underflow"};
    }
    states.emplace_back(x.begin(), x.end());
  }
  return {};
}

}  // namespace crn::detail

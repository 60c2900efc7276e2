#include "crn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "internal/rosenbrock.hpp"

namespace crn {

void KineticParams::validate(const Network& net) const {
  if (cbar.size() != net.num_species()) throw std::invalid_argument("cbar has wrong length");
  if (k.size() != net.num_reactions()) throw std::invalid_argument("k has wrong length");
  for (double x : cbar)
    if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("cbar must be positive and finite");
  for (double x : k)
    if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("k must be positive and finite");
}

void GeneralKineticParams::validate(const Network& net) const {
  if (kplus.size() != net.num_reactions() || kminus.size() != net.num_reactions())
    throw std::invalid_argument("kplus/kminus have wrong length");
  for (std::size_t r = 0; r < kplus.size(); ++r) {
    if (kplus[r] < 0 || kminus[r] < 0 || !std::isfinite(kplus[r]) || !std::isfinite(kminus[r]))
      throw std::invalid_argument("rate constants must be non-negative and finite");
    if (kplus[r] == 0 && kminus[r] == 0) throw std::invalid_argument("reaction with both rate constants zero");
  }
}

bool GeneralKineticParams::reversible() const {
  for (std::size_t r = 0; r < kplus.size(); ++r)
    if (!(kplus[r] > 0 && kminus[r] > 0)) return false;
  return true;
}

namespace {

// rate_r(c) = forward_r * prod (c/ref)^alpha_r - backward_r * prod (c/ref)^beta_r
struct RateLaw {
  std::vector<std::vector<std::pair<std::size_t, double>>> alpha, beta;  // sparse exponents
  std::vector<double> forward, backward;
  std::vector<double> ref;
  Eigen::MatrixXd stoich;

  static RateLaw build(const Network& net) {
    RateLaw law;
    law.stoich = net.stoichiometry().to_eigen();
    for (const auto& rx : net.reactions()) {
      std::vector<std::pair<std::size_t, double>> a, b;
      for (std::size_t s = 0; s < net.num_species(); ++s) {
        if (rx.alpha[s] != 0) a.emplace_back(s, rx.alpha[s].get_d());
        if (rx.beta[s] != 0) b.emplace_back(s, rx.beta[s].get_d());
      }
      law.alpha.push_back(std::move(a));
      law.beta.push_back(std::move(b));
    }
    return law;
  }

  static double power(double x, double e) {
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    return std::pow(x, e);
  }

  double monomial(const std::vector<std::pair<std::size_t, double>>& exps, const double* c) const {
    double m = 1.0;
    for (const auto& [s, e] : exps) m *= power(c[s] / ref[s], e);
    return m;
  }

  void rates(const double* c, double* out) const {
    for (std::size_t r = 0; r < alpha.size(); ++r)
      out[r] = forward[r] * monomial(alpha[r], c) - backward[r] * monomial(beta[r], c);
  }

  void rhs(const Eigen::VectorXd& c, Eigen::VectorXd& dc) const {
    Eigen::VectorXd k(static_cast<Eigen::Index>(alpha.size()));
    rates(c.data(), k.data());
    dc = -stoich * k;
  }

  void jacobian(const Eigen::VectorXd& c, Eigen::MatrixXd& jac) const {
    const auto ns = c.size();
    Eigen::MatrixXd dk = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(alpha.size()), ns);
    for (std::size_t r = 0; r < alpha.size(); ++r) {
      const auto ri = static_cast<Eigen::Index>(r);
      const double ma = forward[r] * monomial(alpha[r], c.data());
      const double mb = backward[r] * monomial(beta[r], c.data());
      for (const auto& [s, e] : alpha[r]) dk(ri, static_cast<Eigen::Index>(s)) += ma * e / c[static_cast<Eigen::Index>(s)];
      for (const auto& [s, e] : beta[r]) dk(ri, static_cast<Eigen::Index>(s)) -= mb * e / c[static_cast<Eigen::Index>(s)];
    }
    jac = -stoich * dk;
  }
};

RateLaw db_law(const Network& net, const KineticParams& params) {
  params.validate(net);
  RateLaw law = RateLaw::build(net);
  law.forward = params.k;
  law.backward = params.k;
  law.ref = params.cbar;
  return law;
}

RateLaw general_law(const Network& net, const GeneralKineticParams& params) {
  params.validate(net);
  RateLaw law = RateLaw::build(net);
  law.forward = params.kplus;
  law.backward = params.kminus;
  law.ref.assign(net.num_species(), 1.0);
  return law;
}

void require_positive(std::span<const double> c, std::size_t expected) {
  if (c.size() != expected) throw std::invalid_argument("concentration vector has wrong length");
  for (double x : c)
    if (!(x > 0)) throw DomainError("concentrations must be strictly positive");
}

OdeSystem system_from(const RateLaw& law) {
  return OdeSystem{[law](const Eigen::VectorXd& y, Eigen::VectorXd& dy) { law.rhs(y, dy); },
                   [law](const Eigen::VectorXd& y, Eigen::MatrixXd& j) { law.jacobian(y, j); }};
}

}  // namespace

std::vector<double> db_rates(const Network& net, const KineticParams& params, std::span<const double> c) {
  require_positive(c, net.num_species());
  RateLaw law = db_law(net, params);
  std::vector<double> out(net.num_reactions());
  law.rates(c.data(), out.data());
  return out;
}

std::vector<double> mass_action_rates(const Network& net, const GeneralKineticParams& params,
                                      std::span<const double> c) {
  require_positive(c, net.num_species());
  RateLaw law = general_law(net, params);
  std::vector<double> out(net.num_reactions());
  law.rates(c.data(), out.data());
  return out;
}

Trajectory integrate_stiff(const OdeSystem& system, std::span<const double> y0, std::span<const double> grid,
                           const IntegratorOptions& options) {
  if (grid.empty()) throw std::invalid_argument("empty time grid");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("time grid must be strictly increasing");
  const std::size_t n = y0.size();
  if (options.require_positive)
    for (double x : y0)
      if (!(x > 0)) throw DomainError("initial state must be strictly positive");

  detail::RosenbrockProblem problem;
  problem.dim = n;
  const auto dim = static_cast<Eigen::Index>(n);
  problem.rhs = [&](const double* y, double* dydt) {
    Eigen::VectorXd dy;
    system.rhs(Eigen::Map<const Eigen::VectorXd>(y, dim), dy);
    Eigen::Map<Eigen::VectorXd>(dydt, dim) = dy;
  };
  problem.jacobian = [&](const double* y, double* jac) {
    Eigen::MatrixXd j;
    system.jacobian(Eigen::Map<const Eigen::VectorXd>(y, dim), j);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(jac, dim, dim) = j;
  };
  detail::RosenbrockSettings settings{options.rel_tol, options.abs_tol, options.initial_step, options.max_steps,
                                      options.require_positive};
  Trajectory traj;
  traj.times.assign(grid.begin(), grid.end());
  auto outcome = detail::rosenbrock_integrate(problem, std::vector<double>(y0.begin(), y0.end()), traj.times,
                                              settings, traj.states);
  if (!outcome.ok) throw IntegrationError(outcome.message, outcome.fail_time);
  return traj;
}

Trajectory simulate(const Network& net, const KineticParams& params, std::span<const double> c0,
                    std::span<const double> t_grid, const IntegratorOptions& options) {
  require_positive(c0, net.num_species());
  return integrate_stiff(system_from(db_law(net, params)), c0, t_grid, options);
}

Trajectory simulate(const Network& net, const GeneralKineticParams& params, std::span<const double> c0,
                    std::span<const double> t_grid, const IntegratorOptions& options) {
  require_positive(c0, net.num_species());
  return integrate_stiff(system_from(general_law(net, params)), c0, t_grid, options);
}

Trajectory simulate_linear(const Eigen::MatrixXd& a, std::span<const double> u0, std::span<const double> t_grid,
                           const IntegratorOptions& options) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != u0.size())
    throw std::invalid_argument("simulate_linear: dimension mismatch");
  IntegratorOptions opts = options;
  opts.require_positive = false;
  OdeSystem sys{[a](const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = a * y; },
                [a](const Eigen::VectorXd&, Eigen::MatrixXd& j) { j = a; }};
  return integrate_stiff(sys, u0, t_grid, opts);
}

std::vector<double> integrate_to_steady_state(const Network& net, const GeneralKineticParams& params,
                                              std::span<const double> c0, double horizon, double tol,
                                              const IntegratorOptions& options) {
  require_positive(c0, net.num_species());
  RateLaw law = general_law(net, params);
  OdeSystem sys = system_from(law);
  std::vector<double> c(c0.begin(), c0.end());
  double t = 0.0;
  double next = 1e-6;
  while (t < horizon) {
    next = std::min(next, horizon);
    std::vector<double> grid{t, next};
    Trajectory seg = integrate_stiff(sys, c, grid, options);
    c = seg.states.back();
    t = next;
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    Eigen::VectorXd dy;
    law.rhs(y, dy);
    if (dy.lpNorm<Eigen::Infinity>() < tol * y.lpNorm<Eigen::Infinity>()) break;
    next = t * 10.0;
  }
  return c;
}

std::vector<double> log_time_grid(double t_min, double t_max, std::size_t samples, bool include_zero) {
  if (!(t_min > 0) || !(t_max > t_min)) throw std::invalid_argument("log grid needs 0 < t_min < t_max");
  if (samples < 2) throw std::invalid_argument("log grid needs at least two samples");
  std::vector<double> grid;
  if (include_zero) grid.push_back(0.0);
  const double a = std::log10(t_min);
  const double b = std::log10(t_max);
  for (std::size_t k = 0; k < samples; ++k)
    grid.push_back(std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(samples - 1)));
  return grid;
}

std::vector<double> stationary_state(const Network& net, const KineticParams& params, std::span<const double> gamma,
                                     double tol) {
  params.validate(net);
  require_positive(gamma, net.num_species());
  const auto ns = static_cast<Eigen::Index>(net.num_species());
  const RationalMatrix& n_exact = net.stoichiometry();
  const auto cols = column_basis(n_exact);
  const Eigen::MatrixXd basis = n_exact.select_columns(cols).to_eigen();
  const Eigen::MatrixXd nt = n_exact.to_eigen().transpose();
  const Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(gamma.data(), ns);
  const Eigen::VectorXd cbar = Eigen::Map<const Eigen::VectorXd>(params.cbar.data(), ns);

  auto energy = [&](const Eigen::VectorXd& c) {
    double f = 0;
    for (Eigen::Index s = 0; s < ns; ++s) f += c[s] * (std::log(c[s] / cbar[s]) - 1.0) + cbar[s];
    return f;
  };
  auto positive = [&](const Eigen::VectorXd& c) { return (c.array() > 0).all(); };
  auto residual = [&](const Eigen::VectorXd& c) {
    Eigen::VectorXd mu = (c.array() / cbar.array()).log().matrix();
    return (nt * mu).lpNorm<Eigen::Infinity>();
  };

  Eigen::VectorXd xi = Eigen::VectorXd::Zero(basis.cols());
  Eigen::VectorXd c = g;
  for (int iter = 0; iter < 500; ++iter) {
    if (residual(c) <= tol) return std::vector<double>(c.data(), c.data() + ns);
    Eigen::VectorXd mu = (c.array() / cbar.array()).log().matrix();
    Eigen::VectorXd grad = basis.transpose() * mu;
    Eigen::MatrixXd hess = basis.transpose() * c.cwiseInverse().asDiagonal() * basis;
    Eigen::VectorXd step = hess.ldlt().solve(-grad);
    if (!step.allFinite() || grad.dot(step) >= 0) step = -grad;  // fall back to steepest descent
    const double f0 = energy(c);
    const double slope = grad.dot(step);
    const double r0 = residual(c);
    double t = 1.0;
    Eigen::VectorXd trial;
    for (int ls = 0; ls < 200; ++ls, t *= 0.5) {
      trial = g + basis * (xi + t * step);
      if (!positive(trial)) continue;
      // energy differences drown in rounding near the optimum; a smaller residual is good enough there
      if (energy(trial) <= f0 + 1e-4 * t * slope || residual(trial) < 0.5 * r0) break;
      if (t * step.lpNorm<Eigen::Infinity>() < 1e-300) break;
    }
    if (!positive(trial)) break;
    Eigen::VectorXd moved = t * step;
    xi += moved;
    c = trial;
    if (moved.lpNorm<Eigen::Infinity>() == 0.0) break;
  }
  if (residual(c) <= std::max(tol, 1e-10)) return std::vector<double>(c.data(), c.data() + ns);
  std::ostringstream msg;
  msg << "stationary_state did not converge (residual " << residual(c) << ")";
  throw IntegrationError(msg.str(), 0.0);
}

KineticParams rebase_params(const Network& net, const KineticParams& params, std::span<const double> gamma) {
  std::vector<double> chat = stationary_state(net, params, gamma);
  KineticParams out;
  out.cbar = chat;
  out.k.resize(net.num_reactions());
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    double m = 1.0;
    const auto& rx = net.reactions()[r];
    for (std::size_t s = 0; s < net.num_species(); ++s)
      if (rx.alpha[s] != 0) m *= std::pow(chat[s] / params.cbar[s], rx.alpha[s].get_d());
    out.k[r] = params.k[r] * m;
  }
  return out;
}

double free_energy(std::span<const double> c, std::span<const double> cbar) {
  if (c.size() != cbar.size()) throw std::invalid_argument("free_energy: length mismatch");
  double f = 0;
  for (std::size_t s = 0; s < c.size(); ++s) {
    if (!(c[s] > 0) || !(cbar[s] > 0)) throw DomainError("free_energy needs positive concentrations");
    f += c[s] * (std::log(c[s] / cbar[s]) - 1.0) + cbar[s];
  }
  return f;
}

KineticParams detailed_balance_form(const Network& net, const GeneralKineticParams& params,
                                    std::span<const double> c_star) {
  params.validate(net);
  require_positive(c_star, net.num_species());
  KineticParams out;
  out.cbar.assign(c_star.begin(), c_star.end());
  out.k.resize(net.num_reactions());
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    double m = 1.0;
    const auto& rx = net.reactions()[r];
    for (std::size_t s = 0; s < net.num_species(); ++s)
      if (rx.alpha[s] != 0) m *= std::pow(c_star[s], rx.alpha[s].get_d());
    out.k[r] = params.kplus[r] * m;
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const Network& net, const Trajectory& traj) {
  out << "t";
  for (const auto& s : net.species()) out << ',' << s.name;
  out << '\n';
  const auto old_precision = out.precision(17);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << traj.times[k];
    for (double x : traj.states[k]) out << ',' << x;
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace crn

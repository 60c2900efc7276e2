#include "crn/linearized.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace crn {

namespace {

void check_cbar(std::span<const double> cbar, std::size_t n) {
  if (cbar.size() != n) throw std::invalid_argument("cbar has wrong length");
  for (double x : cbar)
    if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("cbar must be positive and finite");
}

void fill_structure(LinearOperator& op, const Network& net) {
  const RationalMatrix& n = net.stoichiometry();
  const auto cols = column_basis(n);
  op.range_basis = n.select_columns(cols).to_eigen();
  op.nullity = net.num_species() - cols.size();
  op.species = net.species_names();
}

void check_pair(const LinearOperator& op, std::size_t i, std::size_t o) {
  if (i >= op.size() || o >= op.size()) throw std::out_of_range("species index out of range");
  if (i == o) throw std::invalid_argument("input and output species must differ");
}

}  // namespace

LinearOperator linearize_db(const Network& net, const KineticParams& params) {
  params.validate(net);
  const auto ns = static_cast<Eigen::Index>(net.num_species());
  const Eigen::MatrixXd n = net.stoichiometry().to_eigen();
  const Eigen::VectorXd k = Eigen::Map<const Eigen::VectorXd>(params.k.data(), n.cols());
  LinearOperator op;
  op.kind = OperatorKind::DetailedBalance;
  op.cbar = params.cbar;
  op.matrix = -(n * k.asDiagonal() * n.transpose());
  for (Eigen::Index s = 0; s < ns; ++s) op.matrix.row(s) /= params.cbar[static_cast<std::size_t>(s)];
  fill_structure(op, net);
  return op;
}

LinearOperator linearize_general(const Network& net, std::span<const double> cbar,
                                 const GeneralKineticParams& params) {
  params.validate(net);
  check_cbar(cbar, net.num_species());
  const auto ns = static_cast<Eigen::Index>(net.num_species());
  const auto nr = static_cast<Eigen::Index>(net.num_reactions());
  // G_s'r = alpha_s'r k+_r cbar^alpha_r - beta_s'r k-_r cbar^beta_r
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(ns, nr);
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    const auto& rx = net.reactions()[r];
    double fwd = params.kplus[r];
    double bwd = params.kminus[r];
    for (std::size_t s = 0; s < net.num_species(); ++s) {
      if (rx.alpha[s] != 0) fwd *= std::pow(cbar[s], rx.alpha[s].get_d());
      if (rx.beta[s] != 0) bwd *= std::pow(cbar[s], rx.beta[s].get_d());
    }
    for (std::size_t s = 0; s < net.num_species(); ++s)
      g(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)) = rx.alpha[s].get_d() * fwd - rx.beta[s].get_d() * bwd;
  }
  LinearOperator op;
  op.kind = OperatorKind::General;
  op.cbar.assign(cbar.begin(), cbar.end());
  op.matrix = -(net.stoichiometry().to_eigen() * g.transpose());
  for (Eigen::Index s = 0; s < ns; ++s) op.matrix.row(s) /= cbar[static_cast<std::size_t>(s)];
  fill_structure(op, net);
  return op;
}

Spectrum spectrum(const LinearOperator& op) {
  Spectrum spec;
  const auto n = static_cast<Eigen::Index>(op.size());
  if (op.kind == OperatorKind::DetailedBalance) {
    Eigen::VectorXd sq(n);
    for (Eigen::Index s = 0; s < n; ++s) sq[s] = std::sqrt(op.cbar[static_cast<std::size_t>(s)]);
    Eigen::MatrixXd ay = sq.asDiagonal() * op.matrix * sq.cwiseInverse().asDiagonal();
    ay = 0.5 * (ay + ay.transpose());
    // Deflate the exact kernel: the range of A_y is D^{-1/2} W.
    const Eigen::MatrixXd scaled = sq.cwiseInverse().asDiagonal() * op.range_basis;
    const auto r = scaled.cols();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(scaled);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
    Eigen::MatrixXd h = q.transpose() * ay * q;
    h = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    spec.rates = eig.eigenvalues();
    spec.modes = q * eig.eigenvectors();
    spec.kernel_projector = Eigen::MatrixXd::Identity(n, n) - q * q.transpose();
    spec.eigenvalues = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index k = 0; k < r; ++k) spec.eigenvalues[k] = spec.rates[k];
    spec.max_abs_rate = spec.rates.cwiseAbs().maxCoeff();
    spec.min_abs_rate = spec.rates.cwiseAbs().minCoeff();
    spec.unstable = (spec.rates.array() > 0).any();
    return spec;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> eig(op.matrix, false);
  spec.eigenvalues = eig.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return std::abs(spec.eigenvalues[a]) < std::abs(spec.eigenvalues[b]); });
  double max_abs = 0;
  for (auto k : order) max_abs = std::max(max_abs, std::abs(spec.eigenvalues[k]));
  spec.max_abs_rate = max_abs;
  spec.min_abs_rate = max_abs;
  for (std::size_t k = op.nullity; k < order.size(); ++k) {
    const auto lam = spec.eigenvalues[order[k]];
    spec.min_abs_rate = std::min(spec.min_abs_rate, std::abs(lam));
    if (lam.real() > 1e-9 * max_abs) spec.unstable = true;
  }
  return spec;
}

Eigen::MatrixXd matrix_exponential(const LinearOperator& op, const Spectrum& spec, double t) {
  if (t < 0) throw std::invalid_argument("matrix_exponential needs t >= 0");
  const auto n = static_cast<Eigen::Index>(op.size());
  if (t == 0) return Eigen::MatrixXd::Identity(n, n);
  if (op.kind == OperatorKind::DetailedBalance) {
    const Eigen::VectorXd decay = (spec.rates * t).array().exp().matrix();
    Eigen::MatrixXd ey = spec.kernel_projector + spec.modes * decay.asDiagonal() * spec.modes.transpose();
    Eigen::VectorXd sq(n);
    for (Eigen::Index s = 0; s < n; ++s) sq[s] = std::sqrt(op.cbar[static_cast<std::size_t>(s)]);
    return sq.cwiseInverse().asDiagonal() * ey * sq.asDiagonal();
  }
  return (op.matrix * t).exp();
}

Eigen::MatrixXd matrix_exponential(const LinearOperator& op, double t) {
  if (op.kind == OperatorKind::General) return matrix_exponential(op, Spectrum{}, t);
  return matrix_exponential(op, spectrum(op), t);
}

TimeWindow default_window(const Spectrum& spec, std::size_t samples) {
  if (!(spec.max_abs_rate > 0) || !(spec.min_abs_rate > 0)) throw std::runtime_error("operator has no relaxing modes");
  return TimeWindow{0.01 / spec.max_abs_rate, 100.0 / spec.min_abs_rate, samples};
}

double response_entry(const LinearOperator& op, const Spectrum& spec, std::size_t i, std::size_t o, double t) {
  if (t == 0) return i == o ? 1.0 : 0.0;
  if (op.kind == OperatorKind::DetailedBalance) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto oo = static_cast<Eigen::Index>(o);
    double v = spec.kernel_projector(oo, ii);
    for (Eigen::Index k = 0; k < spec.rates.size(); ++k)
      v += spec.modes(oo, k) * spec.modes(ii, k) * std::exp(spec.rates[k] * t);
    return v * std::sqrt(op.cbar[i] / op.cbar[o]);
  }
  return matrix_exponential(op, spec, t)(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i));
}

ResponseCurve response_curve(const LinearOperator& op, const Spectrum& spec, std::size_t i, std::size_t o,
                             const TimeWindow& window, Execution exec) {
  check_pair(op, i, o);
  ResponseCurve curve;
  curve.input = i;
  curve.output = o;
  curve.times = log_time_grid(window.t_min, window.t_max, window.samples, true);
  curve.values.assign(curve.times.size(), 0.0);
  const auto count = static_cast<std::ptrdiff_t>(curve.times.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k)
      curve.values[static_cast<std::size_t>(k)] = response_entry(op, spec, i, o, curve.times[static_cast<std::size_t>(k)]);
  } else {
    for (std::ptrdiff_t k = 0; k < count; ++k)
      curve.values[static_cast<std::size_t>(k)] = response_entry(op, spec, i, o, curve.times[static_cast<std::size_t>(k)]);
  }
  return curve;
}

ResponseCurve response_curve(const LinearOperator& op, std::size_t i, std::size_t o, std::optional<TimeWindow> window,
                             Execution exec) {
  const Spectrum spec = spectrum(op);
  return response_curve(op, spec, i, o, window ? *window : default_window(spec), exec);
}

namespace {

// Golden-section maximization of f(exp(x)) on [log a, log b].
std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(a), hi = std::log(b);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(std::exp(x1)), f2 = f(std::exp(x2));
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(std::exp(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(std::exp(x1));
    }
  }
  return f1 >= f2 ? std::pair{std::exp(x1), f1} : std::pair{std::exp(x2), f2};
}

}  // namespace

SensitivityResult sensitivity(const LinearOperator& op, std::size_t i, std::size_t o,
                              std::optional<TimeWindow> window) {
  check_pair(op, i, o);
  const Spectrum spec = spectrum(op);
  const TimeWindow w = window ? *window : default_window(spec);
  const ResponseCurve curve = response_curve(op, spec, i, o, w);
  const auto& t = curve.times;
  const auto& v = curve.values;
  const std::size_t m = v.size();

  SensitivityResult res;
  const auto best = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  const auto worst = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  res.value = v[best];
  res.t_max = t[best];
  res.min_value = v[worst];
  res.t_min = t[worst];
  res.at_horizon = best == m - 1;

  std::vector<std::size_t> peaks;
  for (std::size_t k = 1; k + 1 < m; ++k)
    if (v[k] >= v[k - 1] && v[k] >= v[k + 1]) peaks.push_back(k);
  std::sort(peaks.begin(), peaks.end(), [&](auto a, auto b) { return v[a] > v[b]; });
  if (peaks.size() > 3) peaks.resize(3);

  auto f = [&](double tt) { return response_entry(op, spec, i, o, tt); };
  for (auto k : peaks) {
    const double a = k > 1 ? t[k - 1] : t[k] / 10.0;
    const double b = t[k + 1];
    auto [tt, val] = golden_max(f, a, b);
    if (val > res.value) {
      res.value = val;
      res.t_max = tt;
    }
  }
  // the sup over t >= 0 includes the t -> infinity limit
  const PrecisionLimit lim = inverse_precision_limit(op, i, o);
  if (lim.converged && !lim.divergent) {
    if (lim.value > res.value) {
      res.value = lim.value;
      res.t_max = std::numeric_limits<double>::infinity();
    }
  }
  return res;
}

PrecisionLimit inverse_precision_limit(const LinearOperator& op, std::size_t i, std::size_t o) {
  check_pair(op, i, o);
  const Spectrum spec = spectrum(op);
  PrecisionLimit lim;
  if (op.kind == OperatorKind::DetailedBalance) {
    lim.value = spec.kernel_projector(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) *
                std::sqrt(op.cbar[i] / op.cbar[o]);
    return lim;
  }
  if (spec.unstable) {
    lim.divergent = true;
    lim.converged = false;
    lim.value = std::numeric_limits<double>::quiet_NaN();
    return lim;
  }
  const double horizon = 1e4 / spec.min_abs_rate;
  const double f0 = response_entry(op, spec, i, o, horizon);
  const double f1 = response_entry(op, spec, i, o, horizon / 10);
  const double f2 = response_entry(op, spec, i, o, horizon / 100);
  const double scale = std::max(1.0, std::abs(f0));
  lim.value = f0;
  lim.converged = std::isfinite(f0) && std::abs(f0 - f1) <= 1e-6 * scale && std::abs(f0 - f2) <= 1e-6 * scale;
  return lim;
}

void write_response_csv(std::ostream& out, const ResponseCurve& curve) {
  const auto old = out.precision(17);
  out << "t,value\n";
  for (std::size_t k = 0; k < curve.times.size(); ++k) out << curve.times[k] << ',' << curve.values[k] << '\n';
  out.precision(old);
}

}  // namespace crn

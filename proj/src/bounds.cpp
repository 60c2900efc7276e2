#include "crn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace crn {

std::optional<Rational> homogeneous_order(const Network& net) {
  std::optional<Rational> kappa;
  for (const auto& rx : net.reactions()) {
    const auto a = support_of(rx.alpha);
    const auto b = support_of(rx.beta);
    if (a.size() != 1 || b.size() != 1 || a[0] == b[0]) return std::nullopt;
    const Rational& ka = rx.alpha[a[0]];
    if (ka != rx.beta[b[0]]) return std::nullopt;
    if (kappa && *kappa != ka) return std::nullopt;
    kappa = ka;
  }
  return kappa;
}

bool is_unimolecular(const Network& net) {
  auto k = homogeneous_order(net);
  return k && *k == 1;
}

double homogeneous_precision(const Network& net, std::span<const double> cbar, std::size_t i) {
  if (!homogeneous_order(net)) throw std::invalid_argument("network is not homogeneous");
  if (cbar.size() != net.num_species() || i >= cbar.size()) throw std::invalid_argument("bad cbar or index");
  double total = 0;
  for (double c : cbar) total += c;
  return total / cbar[i];
}

Rational homogeneous_precision(const Network& net, const RationalVector& cbar, std::size_t i) {
  if (!homogeneous_order(net)) throw std::invalid_argument("network is not homogeneous");
  if (cbar.size() != net.num_species() || i >= cbar.size()) throw std::invalid_argument("bad cbar or index");
  Rational total;
  for (const auto& c : cbar) total += c;
  return total / cbar[i];
}

double sensitivity_sqrt_bound(std::span<const double> cbar, std::size_t i, std::size_t o) {
  if (i >= cbar.size() || o >= cbar.size()) throw std::out_of_range("species index out of range");
  if (!(cbar[i] > 0) || !(cbar[o] > 0)) throw std::invalid_argument("cbar must be positive");
  return std::sqrt(cbar[i] / cbar[o]);
}

SubsystemBound max_sensitivity_lower_bound(const Network& net, std::size_t i, std::size_t o,
                                           std::size_t max_reactions, Execution exec) {
  if (net.num_reactions() > max_reactions)
    throw std::invalid_argument("too many reactions for the subsystem sweep (" + std::to_string(net.num_reactions()) +
                                " > " + std::to_string(max_reactions) + ")");
  const auto subsets = reaction_subsets(net.num_reactions());
  const RationalMatrix& n = net.stoichiometry();
  std::vector<InvPrecisionCertificate> certs(subsets.size());
  const auto count = static_cast<std::ptrdiff_t>(subsets.size());
  auto body = [&](std::ptrdiff_t k) {
    const auto& subset = subsets[static_cast<std::size_t>(k)];
    certs[static_cast<std::size_t>(k)] = max_inv_precision(n.select_columns(subset), i, o, Execution::Serial);
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < count; ++k) body(k);
  } else {
    for (std::ptrdiff_t k = 0; k < count; ++k) body(k);
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < certs.size(); ++k)
    if (certs[k].value > certs[best].value) best = k;
  return SubsystemBound{certs[best].value, subsets[best], certs[best]};
}

bool BoundReport::all_hold() const {
  return std::all_of(flags.begin(), flags.end(), [](const BoundFlag& f) { return !f.applicable || f.holds; });
}

namespace {

BoundFlag make_flag(std::string name, bool applicable, double lhs, double rhs, double tol) {
  BoundFlag f;
  f.name = std::move(name);
  f.applicable = applicable;
  f.lhs = lhs;
  f.rhs = rhs;
  f.tolerance = tol;
  f.holds = !applicable || lhs <= rhs + tol;
  return f;
}

BoundReport common_report(const Network& net, const LinearOperator& op, std::size_t i, std::size_t o) {
  BoundReport rep;
  rep.input = net.species()[i].name;
  rep.output = net.species()[o].name;
  rep.kind = op.kind;
  const SensitivityResult s = sensitivity(op, i, o);
  rep.sensitivity = s.value;
  rep.t_at_sensitivity = s.t_max;
  rep.sensitivity_at_horizon = s.at_horizon;
  const PrecisionLimit p = inverse_precision_limit(op, i, o);
  rep.inv_precision = p.value;
  rep.inv_precision_converged = p.converged;
  rep.divergent = p.divergent;
  rep.sqrt_bound = sensitivity_sqrt_bound(op.cbar, i, o);
  rep.max_inv_p = max_inv_precision(net.stoichiometry(), i, o).value;
  rep.homogeneous_order = homogeneous_order(net);
  const double tol = 1e-9;
  if (!p.divergent)
    rep.flags.push_back(make_flag("S >= invP", p.value >= 0, rep.inv_precision, rep.sensitivity,
                                  tol * std::max(1.0, std::abs(rep.sensitivity))));
  return rep;
}

}  // namespace

BoundReport check_all_bounds(const Network& net, const KineticParams& params, std::size_t i, std::size_t o) {
  const LinearOperator op = linearize_db(net, params);
  BoundReport rep = common_report(net, op, i, o);
  const double tol = 1e-9;
  rep.flags.push_back(make_flag("S <= sqrt(cbar_i/cbar_o)", true, rep.sensitivity, rep.sqrt_bound,
                                tol * std::max(1.0, rep.sqrt_bound)));
  rep.flags.push_back(make_flag("invP <= maxInvP", true, rep.inv_precision, rep.max_inv_p.get_d(), 1e-8));
  const bool homog = rep.homogeneous_order.has_value();
  rep.flags.push_back(make_flag("homogeneous: S <= 1", homog, rep.sensitivity, 1.0, tol));
  if (homog) {
    const double closed = 1.0 / homogeneous_precision(net, params.cbar, i);
    rep.flags.push_back(make_flag("homogeneous: invP = cbar_i/sum(cbar)", true,
                                  std::abs(rep.inv_precision - closed), 0.0, 1e-9));
  } else {
    rep.flags.push_back(make_flag("homogeneous: invP = cbar_i/sum(cbar)", false, 0.0, 0.0, 0.0));
  }
  return rep;
}

BoundReport check_all_bounds(const Network& net, std::span<const double> cbar, const GeneralKineticParams& params,
                             std::size_t i, std::size_t o) {
  const LinearOperator op = linearize_general(net, cbar, params);
  BoundReport rep = common_report(net, op, i, o);
  rep.reversible_unimolecular = is_unimolecular(net) && params.reversible();
  rep.flags.push_back(make_flag("reversible unimolecular: S <= 1", rep.reversible_unimolecular, rep.sensitivity, 1.0,
                                1e-9));
  return rep;
}

nlohmann::ordered_json to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["input"] = r.input;
  j["output"] = r.output;
  j["kind"] = r.kind == OperatorKind::DetailedBalance ? "detailed_balance" : "general";
  j["S"] = r.sensitivity;
  j["t_at_S"] = std::isfinite(r.t_at_sensitivity) ? nlohmann::ordered_json(r.t_at_sensitivity)
                                                   : nlohmann::ordered_json("inf");
  j["S_at_horizon"] = r.sensitivity_at_horizon;
  if (r.divergent)
    j["invP"] = nullptr;
  else
    j["invP"] = r.inv_precision;
  j["invP_converged"] = r.inv_precision_converged;
  j["divergent"] = r.divergent;
  j["sqrt_bound"] = r.sqrt_bound;
  j["maxInvP"] = to_string(r.max_inv_p);
  j["homogeneous_order"] = r.homogeneous_order ? nlohmann::ordered_json(to_string(*r.homogeneous_order))
                                               : nlohmann::ordered_json(nullptr);
  j["reversible_unimolecular"] = r.reversible_unimolecular;
  j["flags"] = nlohmann::ordered_json::array();
  for (const auto& f : r.flags)
    j["flags"].push_back({{"name", f.name},
                          {"applicable", f.applicable},
                          {"holds", f.holds},
                          {"lhs", f.lhs},
                          {"rhs", f.rhs},
                          {"tolerance", f.tolerance},
                          {"margin", f.margin()}});
  return j;
}

void print_table(std::ostream& out, const BoundReport& r) {
  std::ostringstream head;
  head << std::setprecision(6);
  head << "input " << r.input << ", output " << r.output << " ("
       << (r.kind == OperatorKind::DetailedBalance ? "detailed balance" : "general mass action") << ")\n";
  head << "  S        = " << r.sensitivity << (r.sensitivity_at_horizon ? "  (maximum at horizon)" : "") << '\n';
  if (r.divergent)
    head << "  invP     = diverges\n";
  else
    head << "  invP     = " << r.inv_precision << (r.inv_precision_converged ? "" : "  (not converged)") << '\n';
  head << "  maxInvP  = " << to_string(r.max_inv_p) << '\n';
  head << "  sqrt(ci/co) = " << r.sqrt_bound << '\n';
  out << head.str();
  out << "  " << std::left << std::setw(40) << "bound" << std::setw(8) << "status" << "margin\n";
  for (const auto& f : r.flags) {
    std::ostringstream margin;
    margin << std::setprecision(4) << f.margin();
    out << "  " << std::left << std::setw(40) << f.name << std::setw(8)
        << (!f.applicable ? "n/a" : (f.holds ? "ok" : "FAIL")) << (f.applicable ? margin.str() : "") << '\n';
  }
}

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(std::log10(lo), std::log10(hi));
  return std::pow(10.0, d(rng));
}

}  // namespace

KineticParams random_db_params(const Network& net, std::mt19937_64& rng) {
  KineticParams p;
  for (std::size_t s = 0; s < net.num_species(); ++s) p.cbar.push_back(log_uniform(rng, 1e-3, 1e3));
  for (std::size_t r = 0; r < net.num_reactions(); ++r) p.k.push_back(log_uniform(rng, 1e-3, 1e3));
  return p;
}

GeneralKineticParams random_general_params(const Network& net, std::mt19937_64& rng) {
  GeneralKineticParams p;
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    p.kplus.push_back(log_uniform(rng, 1e-3, 1e3));
    p.kminus.push_back(log_uniform(rng, 1e-3, 1e3));
  }
  return p;
}

std::vector<double> unimolecular_steady_state(const Network& net, const GeneralKineticParams& params) {
  if (!is_unimolecular(net)) throw std::invalid_argument("network is not unimolecular");
  params.validate(net);
  const auto ns = static_cast<Eigen::Index>(net.num_species());
  // dc/dt = L c with L = -N G, K_r(c) = (G c)_r
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(net.num_reactions()), ns);
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    const auto& rx = net.reactions()[r];
    const auto a = static_cast<Eigen::Index>(support_of(rx.alpha)[0]);
    const auto b = static_cast<Eigen::Index>(support_of(rx.beta)[0]);
    g(static_cast<Eigen::Index>(r), a) += params.kplus[r];
    g(static_cast<Eigen::Index>(r), b) -= params.kminus[r];
  }
  const Eigen::MatrixXd l = -net.stoichiometry().to_eigen() * g;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(l, Eigen::ComputeFullV);
  Eigen::VectorXd v = svd.matrixV().col(ns - 1);
  if (v.sum() < 0) v = -v;
  if ((v.array() <= 0).any()) throw std::runtime_error("no positive stationary state (network not strongly connected?)");
  v *= static_cast<double>(ns) / v.sum();
  return std::vector<double>(v.data(), v.data() + ns);
}

nlohmann::ordered_json VerifySummary::to_json() const {
  nlohmann::ordered_json j;
  j["trials"] = trials;
  j["failures"] = failures;
  j["messages"] = messages;
  return j;
}

VerifySummary verify_bounds(const Network& net, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                            std::size_t trials, std::uint64_t seed, bool general) {
  if (general && !is_unimolecular(net)) throw std::invalid_argument("general-rate verification needs a unimolecular network");
  std::mt19937_64 rng(seed);
  VerifySummary out;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<BoundReport> reports;
    if (general) {
      const auto gp = random_general_params(net, rng);
      const auto cbar = unimolecular_steady_state(net, gp);
      for (auto [i, o] : pairs) reports.push_back(check_all_bounds(net, cbar, gp, i, o));
    } else {
      const auto p = random_db_params(net, rng);
      for (auto [i, o] : pairs) reports.push_back(check_all_bounds(net, p, i, o));
    }
    ++out.trials;
    bool failed = false;
    for (const auto& r : reports)
      for (const auto& f : r.flags)
        if (f.applicable && !f.holds) {
          failed = true;
          if (out.messages.size() < 20) {
            std::ostringstream msg;
            msg << std::setprecision(10) << "trial " << t << " " << r.input << "->" << r.output << ": " << f.name
                << " (" << f.lhs << " vs " << f.rhs << ")";
            out.messages.push_back(msg.str());
          }
        }
    if (failed) ++out.failures;
  }
  return out;
}

}  // namespace crn

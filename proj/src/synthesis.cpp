#include "crn/synthesis.hpp"

#include <algorithm>
#include <cmath>

namespace crn {

namespace {

template <class T>
int sgn_of(const T& x) {
  return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

template <class Vec>
SignCheck sign_check(const Vec& u, const Vec& w, std::size_t i) {
  if (u.size() != w.size()) throw std::invalid_argument("u and w differ in length");
  if (i >= u.size()) throw std::out_of_range("species index out of range");
  SignCheck out;
  for (std::size_t s = 0; s < u.size(); ++s) {
    const int su = s == i ? sgn_of(u[s] - 1) : sgn_of(u[s]);
    if (su != sgn_of(w[s])) {
      out.ok = false;
      out.violations.push_back(s);
    }
  }
  return out;
}

// Adds delta * dir to v only if no nonzero entry other than `s` changes sign.
bool try_add(RationalVector& v, const RationalVector& dir, const Rational& delta, std::size_t s) {
  RationalVector trial = v;
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (dir[t] == 0) continue;
    trial[t] += delta * dir[t];
    if (t != s && v[t] != 0 && sgn(trial[t]) != sgn(v[t])) return false;
  }
  v = std::move(trial);
  return true;
}

struct Cascade {
  RationalVector u, w;
  std::vector<std::pair<std::size_t, Rational>> deltas;
};

Cascade run_cascade(const BasisDecomposition& dec, const RationalVector& ustar, const Rational& value, std::size_t i,
                    std::size_t o, const Rational& first) {
  const std::size_t dim = ustar.size();
  Cascade c;
  c.u = ustar;
  for (auto& q : c.u) q *= 1 - first;
  c.w = dec.w_family.at(o).coords;
  for (auto& q : c.w) q *= value;
  c.deltas.emplace_back(i, first);
  Rational prev = first;

  for (std::size_t step = 0; step < 4 * dim + 4; ++step) {
    std::size_t target = dim;
    bool repair_u = false;
    for (std::size_t s = 0; s < dim; ++s)
      if (c.w[s] != 0 && c.u[s] == 0) {
        target = s;
        repair_u = true;
        break;
      }
    if (target == dim)
      for (std::size_t s = 0; s < dim; ++s)
        if (c.u[s] != 0 && c.w[s] == 0) {
          target = s;
          break;
        }
    if (target == dim) return c;

    const auto& family = repair_u ? dec.u_family : dec.w_family;
    auto it = family.find(target);
    if (it == family.end()) throw SynthesisError("no family vector for species " + std::to_string(target));
    const int direction = repair_u ? sgn(c.w[target]) : sgn(c.u[target]);
    Rational delta = prev / 100;
    bool applied = false;
    for (int round = 0; round <= 60 && !applied; ++round) {
      const Rational signed_delta = direction * delta;
      applied = try_add(repair_u ? c.u : c.w, it->second.coords, signed_delta, target);
      if (!applied) delta /= 2;
    }
    if (!applied) throw SynthesisError("delta cascade exhausted its shrink budget");
    c.deltas.emplace_back(target, direction * delta);
    prev = delta;
  }
  throw SynthesisError("sign repair did not terminate");
}

}  // namespace

SignCheck verify_sign_conditions(const RationalVector& u, const RationalVector& w, std::size_t i) {
  return sign_check(u, w, i);
}

SignCheck verify_sign_conditions(const std::vector<double>& u, const std::vector<double>& w, std::size_t i) {
  return sign_check(u, w, i);
}

SynthesisResult synthesize_cbar(const RationalMatrix& n, std::size_t i, std::size_t o, double epsilon) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
  const std::size_t dim = n.rows();
  const auto cert = max_inv_precision(n, i, o);
  SynthesisResult res;
  res.max_inv_p = cert.value;

  if (cert.value <= 0) {
    // u = e_i, w = 0 is feasible for every cbar and attains 0
    res.degenerate = true;
    res.cbar.assign(dim, 1.0);
    res.u_exact.assign(dim, Rational(0));
    res.u_exact[i] = 1;
    res.w_exact.assign(dim, Rational(0));
    res.u = to_double(res.u_exact);
    res.w = to_double(res.w_exact);
    return res;
  }
  if (epsilon >= cert.value.get_d()) throw std::invalid_argument("epsilon must be smaller than maxInvP");

  const RationalVector& ustar = cert.witness_u.coords;
  const BasisDecomposition dec = basis_decomposition(n, ustar, i);
  Rational norm = 0;
  for (const auto& q : ustar) norm = std::max(norm, Rational(abs(q)));
  const Rational target = cert.value - from_double(epsilon);
  Rational first = from_double(epsilon) / (2 * norm);

  Cascade c;
  bool reached = false;
  for (int attempt = 0; attempt < 30 && !reached; ++attempt, first /= 2) {
    c = run_cascade(dec, ustar, cert.value, i, o, first);
    reached = c.u[o] >= target;
  }
  if (!reached) throw SynthesisError("could not reach maxInvP - epsilon");
  if (!verify_sign_conditions(c.u, c.w, i).ok) throw SynthesisError("sign conditions violated after repair");

  RationalVector cbar(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    const Rational denom = s == i ? c.u[s] - 1 : c.u[s];
    cbar[s] = denom == 0 ? Rational(1) : c.w[s] / denom;  // untouched species: any positive value works
    if (cbar[s] <= 0) throw SynthesisError("non-positive cbar entry");
  }

  res.u_exact = c.u;
  res.w_exact = c.w;
  res.achieved_exact = c.u[o];
  res.achieved = res.achieved_exact.get_d();
  res.u = to_double(c.u);
  res.w = to_double(c.w);
  res.cbar = to_double(cbar);
  for (const auto& [s, d] : c.deltas) res.deltas.emplace_back(s, d.get_d());

  // gauge: min * max = 1; w scales with cbar
  const auto [lo, hi] = std::minmax_element(res.cbar.begin(), res.cbar.end());
  const double gauge = 1.0 / std::sqrt(*lo * *hi);
  for (auto& x : res.cbar) x *= gauge;
  for (auto& x : res.w) x *= gauge;
  return res;
}

nlohmann::ordered_json to_json(const SynthesisResult& res, const std::vector<std::string>& species) {
  nlohmann::ordered_json j;
  j["species"] = species;
  j["cbar"] = res.cbar;
  j["achieved"] = res.achieved;
  j["maxInvP"] = res.max_inv_p.get_d();
  j["maxInvP_exact"] = to_string(res.max_inv_p);
  j["degenerate"] = res.degenerate;
  j["u"] = res.u;
  j["w"] = res.w;
  nlohmann::ordered_json deltas = nlohmann::ordered_json::object();
  for (const auto& [s, d] : res.deltas) deltas[species.at(s)] = d;
  j["deltas"] = deltas;
  return j;
}

}  // namespace crn

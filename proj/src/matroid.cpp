#include "crn/matroid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>

namespace crn {

std::string to_string(Space space) { return space == Space::W ? "W" : "W_PERP"; }

std::vector<std::size_t> support_of(const RationalVector& v) {
  std::vector<std::size_t> s;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] != 0) s.push_back(k);
  return s;
}

std::vector<RationalVector> range_space_basis(const RationalMatrix& n) {
  std::vector<RationalVector> basis;
  for (auto c : column_basis(n)) basis.push_back(n.column(c));
  return basis;
}

std::vector<RationalVector> perp_space_basis(const RationalMatrix& n) { return kernel_basis(n.transpose()); }

namespace {

using Mask = std::uint64_t;

std::vector<std::size_t> mask_to_indices(Mask m, std::size_t dim) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < dim; ++k)
    if (m & (Mask{1} << k)) idx.push_back(k);
  return idx;
}

// Rows spanning the orthogonal complement of span(basis).
RationalMatrix complement_rows(const std::vector<RationalVector>& basis, std::size_t dim) {
  if (basis.empty()) return RationalMatrix::identity(dim);
  RationalMatrix b = RationalMatrix::from_columns(basis, dim);
  auto rows = kernel_basis(b.transpose());
  return RationalMatrix::from_rows(rows, dim);
}

// Kernel vector of M restricted to the columns in `mask` when those columns form a circuit.
std::optional<RationalVector> circuit_vector(const RationalMatrix& m, Mask mask, std::size_t dim) {
  const auto idx = mask_to_indices(mask, dim);
  RationalMatrix sub = m.select_columns(idx);
  auto ker = kernel_basis(sub);
  if (ker.size() != 1) return std::nullopt;
  RationalVector v(dim);
  for (std::size_t j = 0; j < idx.size(); ++j) v[idx[j]] = ker[0][j];
  if (support_of(v).size() != idx.size()) return std::nullopt;
  return canonical_scaling(std::move(v));
}

// All k-subsets of {0..dim-1} in increasing mask order (Gosper's hack).
std::vector<Mask> combinations(std::size_t dim, std::size_t k) {
  std::vector<Mask> out;
  if (k == 0 || k > dim) return out;
  Mask m = (Mask{1} << k) - 1;
  const Mask limit = Mask{1} << dim;
  while (m < limit) {
    out.push_back(m);
    const Mask c = m & (~m + 1);
    const Mask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

}  // namespace

std::vector<ElementaryVector> elementary_vectors(const std::vector<RationalVector>& basis, std::size_t dim,
                                                 Space space, Execution exec) {
  if (dim == 0) return {};
  if (dim >= 63) throw std::invalid_argument("elementary_vectors supports at most 62 species");
  for (const auto& b : basis)
    if (b.size() != dim) throw std::invalid_argument("basis vector has wrong length");
  if (basis.empty() || rank(RationalMatrix::from_columns(basis, dim)) == 0) return {};

  const RationalMatrix m = complement_rows(basis, dim);
  const std::size_t max_k = std::min(dim, rank(m) + 1);
  std::vector<Mask> found;
  std::vector<ElementaryVector> out;

  for (std::size_t k = 1; k <= max_k; ++k) {
    std::vector<Mask> candidates;
    for (Mask c : combinations(dim, k)) {
      bool contains = false;
      for (Mask f : found)
        if ((c & f) == f) {
          contains = true;
          break;
        }
      if (!contains) candidates.push_back(c);
    }
    std::vector<std::optional<RationalVector>> hits(candidates.size());
    const auto count = static_cast<std::ptrdiff_t>(candidates.size());
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
      for (std::ptrdiff_t j = 0; j < count; ++j)
        hits[static_cast<std::size_t>(j)] = circuit_vector(m, candidates[static_cast<std::size_t>(j)], dim);
    } else {
      for (std::ptrdiff_t j = 0; j < count; ++j)
        hits[static_cast<std::size_t>(j)] = circuit_vector(m, candidates[static_cast<std::size_t>(j)], dim);
    }
    // same-size circuits never contain each other, so the layer's snapshot of `found` suffices
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (!hits[j]) continue;
      found.push_back(candidates[j]);
      ElementaryVector ev;
      ev.coords = std::move(*hits[j]);
      ev.space = space;
      ev.support = mask_to_indices(candidates[j], dim);
      out.push_back(std::move(ev));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ElementaryVector& a, const ElementaryVector& b) {
    if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
    return a.support < b.support;
  });
  return out;
}

std::vector<ElementaryVector> elementary_vectors(const RationalMatrix& n, Space space, Execution exec) {
  return elementary_vectors(space == Space::W ? range_space_basis(n) : perp_space_basis(n), n.rows(), space, exec);
}

bool is_elementary(const RationalMatrix& n, const RationalVector& v, Space space) {
  if (v.size() != n.rows() || is_zero(v)) return false;
  // rows of `m` span the orthogonal complement of the space
  RationalMatrix m = space == Space::W ? complement_rows(range_space_basis(n), n.rows()) : n.transpose();
  if (!is_zero(m * v)) return false;
  const auto supp = support_of(v);
  return rank(m.select_columns(supp)) + 1 == supp.size();
}

namespace {

ElementaryVector zero_vector(std::size_t dim, Space space) {
  ElementaryVector ev;
  ev.coords.assign(dim, Rational(0));
  ev.space = space;
  return ev;
}

struct Best {
  std::optional<Rational> value;
  ElementaryVector vec;
};

void consider(Best& best, const Rational& value, ElementaryVector candidate) {
  if (!best.value || value > *best.value || (value == *best.value && candidate.support < best.vec.support)) {
    best.value = value;
    best.vec = std::move(candidate);
  }
}

}  // namespace

InvPrecisionCertificate max_inv_precision(const std::vector<ElementaryVector>& elem_w,
                                          const std::vector<ElementaryVector>& elem_u, std::size_t dim,
                                          std::size_t i, std::size_t o) {
  if (i >= dim || o >= dim) throw std::out_of_range("species index out of range");
  if (i == o) throw std::invalid_argument("input and output species must differ");

  Best bu;
  for (const auto& u : elem_u) {
    if (u.coords[i] == 0) continue;
    ElementaryVector scaled = u;
    const Rational f = 1 / u.coords[i];
    for (auto& q : scaled.coords) q *= f;
    const Rational val = scaled.coords[o];
    consider(bu, val, std::move(scaled));
  }
  Best bw;
  for (const auto& w : elem_w) {
    if (w.coords[o] == 0) continue;
    ElementaryVector scaled = w;
    const Rational f = -1 / w.coords[o];
    for (auto& q : scaled.coords) q *= f;
    const Rational val = scaled.coords[i];
    consider(bw, val, std::move(scaled));
  }

  InvPrecisionCertificate cert;
  if (bu.value && *bu.value >= 0) {
    cert.value_u = *bu.value;
    cert.witness_u = bu.vec;
  } else {
    cert.value_u = 0;
    cert.witness_u = zero_vector(dim, Space::WPerp);
  }
  if (bw.value && *bw.value >= 0) {
    cert.value_w = *bw.value;
    cert.witness_w = bw.vec;
  } else {
    cert.value_w = 0;
    cert.witness_w = zero_vector(dim, Space::W);
  }
  if (cert.value_u != cert.value_w)
    throw DualityError("elementary-vector maxima disagree: " + to_string(cert.value_u) + " vs " +
                       to_string(cert.value_w));
  cert.value = cert.value_u;
  return cert;
}

InvPrecisionCertificate max_inv_precision(const RationalMatrix& n, std::size_t i, std::size_t o, Execution exec) {
  return max_inv_precision(elementary_vectors(n, Space::W, exec), elementary_vectors(n, Space::WPerp, exec), n.rows(),
                           i, o);
}

ExactAlgebraicPrecision inverse_precision_algebraic(const RationalMatrix& n, const RationalVector& cbar,
                                                    std::size_t i, std::size_t o) {
  const std::size_t dim = n.rows();
  if (cbar.size() != dim) throw std::invalid_argument("cbar has wrong length");
  if (i >= dim || o >= dim) throw std::out_of_range("species index out of range");
  for (const auto& c : cbar)
    if (c <= 0) throw std::invalid_argument("cbar must be positive");
  const RationalMatrix b = n.select_columns(column_basis(n));
  const std::size_t r = b.cols();
  // (B^T D^{-1} B) xi = -B^T e_i
  RationalMatrix g(r, r);
  RationalVector rhs(r);
  for (std::size_t a = 0; a < r; ++a) {
    rhs[a] = -b(i, a);
    for (std::size_t c = 0; c < r; ++c) {
      Rational acc;
      for (std::size_t s = 0; s < dim; ++s)
        if (b(s, a) != 0 && b(s, c) != 0) acc += b(s, a) * b(s, c) / cbar[s];
      g(a, c) = acc;
    }
  }
  auto xi = solve(g, rhs);
  if (!xi) throw std::runtime_error("singular system in inverse_precision_algebraic");
  ExactAlgebraicPrecision out;
  out.w = b * *xi;
  out.u.resize(dim);
  for (std::size_t s = 0; s < dim; ++s) out.u[s] = out.w[s] / cbar[s];
  out.u[i] += 1;
  out.value = out.u[o];
  return out;
}

AlgebraicPrecision inverse_precision_algebraic(const RationalMatrix& n, std::span<const double> cbar, std::size_t i,
                                               std::size_t o) {
  const std::size_t dim = n.rows();
  if (cbar.size() != dim) throw std::invalid_argument("cbar has wrong length");
  if (i >= dim || o >= dim) throw std::out_of_range("species index out of range");
  for (double c : cbar)
    if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("cbar must be positive and finite");
  const Eigen::MatrixXd b = n.select_columns(column_basis(n)).to_eigen();
  const auto d = static_cast<Eigen::Index>(dim);
  const Eigen::VectorXd cinv = Eigen::Map<const Eigen::VectorXd>(cbar.data(), d).cwiseInverse();
  const Eigen::MatrixXd g = b.transpose() * cinv.asDiagonal() * b;
  const Eigen::VectorXd rhs = -b.row(static_cast<Eigen::Index>(i)).transpose();
  const Eigen::VectorXd xi = g.ldlt().solve(rhs);
  Eigen::VectorXd w = b * xi;
  Eigen::VectorXd u = cinv.asDiagonal() * w;
  u[static_cast<Eigen::Index>(i)] += 1.0;

  const double scale = b.cwiseAbs().maxCoeff() * std::max(1.0, u.lpNorm<Eigen::Infinity>());
  const double residual = (b.transpose() * u).lpNorm<Eigen::Infinity>() / scale;
  AlgebraicPrecision out;
  if (u.allFinite() && w.allFinite() && residual <= 1e-12) {
    out.u.assign(u.data(), u.data() + d);
    out.w.assign(w.data(), w.data() + d);
    out.value = u[static_cast<Eigen::Index>(o)];
    return out;
  }
  RationalVector exact_cbar;
  for (double c : cbar) exact_cbar.push_back(from_double(c));
  const auto exact = inverse_precision_algebraic(n, exact_cbar, i, o);
  out.u = to_double(exact.u);
  out.w = to_double(exact.w);
  out.value = exact.value.get_d();
  return out;
}

BasisDecomposition basis_decomposition(const RationalMatrix& n, const RationalVector& ustar_in, std::size_t i) {
  const std::size_t dim = n.rows();
  if (ustar_in.size() != dim) throw DecompositionError("u* has wrong length");
  if (i >= dim) throw std::out_of_range("species index out of range");
  if (ustar_in[i] == 0) throw DecompositionError("u* must be nonzero at the input species");
  if (!is_elementary(n, ustar_in, Space::WPerp)) throw DecompositionError("u* is not elementary in W-perp");
  RationalVector ustar = ustar_in;
  const Rational f = 1 / ustar_in[i];
  for (auto& q : ustar) q *= f;

  std::vector<std::size_t> sprime;
  for (auto s : support_of(ustar))
    if (s != i) sprime.push_back(s);
  std::size_t current = rank(n.select_rows(sprime));
  if (current != sprime.size()) throw DecompositionError("rows of supp(u*) \\ {i} are dependent");
  const std::size_t full = rank(n);
  for (std::size_t s = 0; s < dim && current < full; ++s) {
    if (s == i || std::find(sprime.begin(), sprime.end(), s) != sprime.end()) continue;
    auto trial = sprime;
    trial.push_back(s);
    std::sort(trial.begin(), trial.end());
    const std::size_t rk = rank(n.select_rows(trial));
    if (rk > current) {
      sprime = std::move(trial);
      current = rk;
    }
  }

  // N' = N[:, R'] N[S', R']^{-1} has the identity on the S' rows.
  const RationalMatrix rows = n.select_rows(sprime);
  const auto rprime = column_basis(rows);
  const RationalMatrix square = rows.select_columns(rprime);
  const RationalMatrix cols = n.select_columns(rprime);
  const std::size_t m = sprime.size();
  RationalMatrix inv(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    RationalVector e(m);
    e[j] = 1;
    auto x = solve(square, e);
    if (!x) throw DecompositionError("N[S', R'] is singular");
    for (std::size_t a = 0; a < m; ++a) inv(a, j) = (*x)[a];
  }
  const RationalMatrix nprime = cols * inv;

  BasisDecomposition dec;
  dec.sprime = sprime;
  for (std::size_t j = 0; j < m; ++j) {
    ElementaryVector ev;
    ev.space = Space::W;
    ev.coords = nprime.column(j);
    ev.support = support_of(ev.coords);
    dec.w_family[sprime[j]] = std::move(ev);
  }
  for (std::size_t s = 0; s < dim; ++s) {
    if (std::find(sprime.begin(), sprime.end(), s) != sprime.end()) continue;
    ElementaryVector ev;
    ev.space = Space::WPerp;
    ev.coords.assign(dim, Rational(0));
    ev.coords[s] = 1;
    for (std::size_t j = 0; j < m; ++j) ev.coords[sprime[j]] = -nprime(s, j);
    ev.support = support_of(ev.coords);
    dec.u_family[s] = std::move(ev);
  }
  auto problems = check_basis_decomposition(n, dec, ustar, i);
  if (!problems.empty()) throw std::logic_error("basis decomposition failed its own check: " + problems.front());
  return dec;
}

std::vector<std::string> check_basis_decomposition(const RationalMatrix& n, const BasisDecomposition& dec,
                                                   const RationalVector& ustar, std::size_t i) {
  std::vector<std::string> bad;
  const std::size_t dim = n.rows();
  auto in_sprime = [&](std::size_t s) { return std::find(dec.sprime.begin(), dec.sprime.end(), s) != dec.sprime.end(); };
  if (in_sprime(i)) bad.push_back("input species lies in S'");
  for (auto s : support_of(ustar))
    if (s != i && !in_sprime(s)) bad.push_back("supp(u*) not inside S' + {i}");
  for (auto s : dec.sprime) {
    auto it = dec.w_family.find(s);
    if (it == dec.w_family.end()) {
      bad.push_back("missing w^" + std::to_string(s));
      continue;
    }
    const auto& w = it->second.coords;
    if (w[s] != 1) bad.push_back("w^" + std::to_string(s) + " not 1 at s");
    for (auto t : support_of(w))
      if (t != s && in_sprime(t)) bad.push_back("w^" + std::to_string(s) + " has support in S'");
    if (!is_elementary(n, w, Space::W)) bad.push_back("w^" + std::to_string(s) + " not elementary in W");
  }
  for (std::size_t s = 0; s < dim; ++s) {
    if (in_sprime(s)) continue;
    auto it = dec.u_family.find(s);
    if (it == dec.u_family.end()) {
      bad.push_back("missing u^" + std::to_string(s));
      continue;
    }
    const auto& u = it->second.coords;
    if (u[s] != 1) bad.push_back("u^" + std::to_string(s) + " not 1 at s");
    for (auto t : support_of(u))
      if (t != s && !in_sprime(t)) bad.push_back("u^" + std::to_string(s) + " has support outside S'");
    if (!is_elementary(n, u, Space::WPerp)) bad.push_back("u^" + std::to_string(s) + " not elementary in W-perp");
  }
  return bad;
}

void write_elementary_tsv(std::ostream& out, const std::vector<std::string>& species,
                          const std::vector<ElementaryVector>& elem_w, const std::vector<ElementaryVector>& elem_u) {
  out << "space\tlabel";
  for (const auto& s : species) out << '\t' << s;
  out << '\n';
  auto emit = [&](const std::vector<ElementaryVector>& list, const char* prefix) {
    for (std::size_t k = 0; k < list.size(); ++k) {
      out << to_string(list[k].space) << '\t' << prefix << k + 1;
      for (const auto& q : list[k].coords) out << '\t' << to_string(q);
      out << '\n';
    }
  };
  emit(elem_w, "w");
  emit(elem_u, "u");
}

}  // namespace crn

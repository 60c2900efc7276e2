#include "crn/exact_linalg.hpp"

#include <stdexcept>
#include <utility>

namespace crn {

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows, std::size_t cols) {
  RationalMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

RationalMatrix RationalMatrix::from_columns(const std::vector<RationalVector>& columns, std::size_t rows) {
  RationalMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw std::invalid_argument("ragged columns");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalVector RationalMatrix::row(std::size_t r) const {
  return RationalVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                        data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

RationalVector RationalMatrix::column(std::size_t c) const {
  RationalVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RationalMatrix RationalMatrix::select_columns(std::span<const std::size_t> columns) const {
  RationalMatrix m(rows_, columns.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < columns.size(); ++j) m(r, j) = (*this)(r, columns[j]);
  return m;
}

RationalMatrix RationalMatrix::select_rows(std::span<const std::size_t> rows) const {
  RationalMatrix m(rows.size(), cols_);
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t c = 0; c < cols_; ++c) m(j, c) = (*this)(rows[j], c);
  return m;
}

Eigen::MatrixXd RationalMatrix::to_eigen() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (*this)(r, c).get_d();
  return m;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch in product");
  RationalMatrix p(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) p(i, j) += a(i, k) * b(k, j);
    }
  return p;
}

RationalVector operator*(const RationalMatrix& a, const RationalVector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("dimension mismatch in product");
  RationalVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) y[i] += a(i, k) * x[k];
  return y;
}

RowEchelon rref(RationalMatrix m) {
  RowEchelon out;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
    std::size_t pivot = lead_row;
    while (pivot < m.rows() && m(pivot, c) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != lead_row)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(pivot, k), m(lead_row, k));
    Rational inv = 1 / m(lead_row, c);
    for (std::size_t k = c; k < m.cols(); ++k) m(lead_row, k) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row || m(r, c) == 0) continue;
      Rational f = m(r, c);
      for (std::size_t k = c; k < m.cols(); ++k) m(r, k) -= f * m(lead_row, k);
    }
    out.pivots.push_back(c);
    ++lead_row;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const RationalMatrix& m) { return rref(m).pivots.size(); }

std::vector<RationalVector> kernel_basis(const RationalMatrix& m) {
  RowEchelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::size_t> column_basis(const RationalMatrix& m) { return rref(m).pivots; }

std::optional<RationalVector> solve(const RationalMatrix& a, const RationalVector& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve: dimension mismatch");
  RationalMatrix aug(n, n + 1);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n) = b[r];
  }
  RowEchelon e = rref(std::move(aug));
  if (e.pivots.size() != n || e.pivots.back() != n - 1) return std::nullopt;
  RationalVector x(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = e.reduced(r, n);
  return x;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rational s;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

bool is_zero(const RationalVector& v) {
  for (const auto& q : v)
    if (q != 0) return false;
  return true;
}

RationalVector canonical_scaling(RationalVector v) {
  if (is_zero(v)) return v;
  mpz_class lcm_den = 1;
  for (const auto& q : v) lcm_den = lcm(lcm_den, mpz_class(q.get_den()));
  mpz_class g = 0;
  for (auto& q : v) {
    q *= lcm_den;
    q.canonicalize();
    g = gcd(g, mpz_class(q.get_num()));
  }
  int lead = 0;
  for (const auto& q : v)
    if (q != 0) {
      lead = sgn(q);
      break;
    }
  Rational factor(lead < 0 ? mpz_class(-1) : mpz_class(1), g);
  factor.canonicalize();
  for (auto& q : v) q *= factor;
  return v;
}

}  // namespace crn

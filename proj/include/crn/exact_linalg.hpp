#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "crn/rational.hpp"

namespace crn {

/// Dense row-major matrix over the rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix from_rows(const std::vector<RationalVector>& rows, std::size_t cols);
  static RationalMatrix from_columns(const std::vector<RationalVector>& columns, std::size_t rows);
  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalVector row(std::size_t r) const;
  RationalVector column(std::size_t c) const;

  RationalMatrix transpose() const;
  RationalMatrix select_columns(std::span<const std::size_t> columns) const;
  RationalMatrix select_rows(std::span<const std::size_t> rows) const;

  Eigen::MatrixXd to_eigen() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
RationalVector operator*(const RationalMatrix& a, const RationalVector& x);

struct RowEchelon {
  RationalMatrix reduced;           // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

RowEchelon rref(RationalMatrix m);

std::size_t rank(const RationalMatrix& m);

/// Basis of ker(m); one vector per free column, with a 1 in that column.
std::vector<RationalVector> kernel_basis(const RationalMatrix& m);

/// Indices of a maximal set of linearly independent columns (leftmost first).
std::vector<std::size_t> column_basis(const RationalMatrix& m);

/// Unique solution of a square nonsingular system, or nullopt when singular.
std::optional<RationalVector> solve(const RationalMatrix& a, const RationalVector& b);

Rational dot(const RationalVector& a, const RationalVector& b);

bool is_zero(const RationalVector& v);

/// Scales v to coprime integers with first nonzero entry positive.
RationalVector canonical_scaling(RationalVector v);

}  // namespace crn

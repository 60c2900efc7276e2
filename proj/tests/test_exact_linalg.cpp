#include <doctest.h>

#include <random>

#include "crn/exact_linalg.hpp"
#include "support.hpp"

using namespace crn;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/2") == Rational(3, 2));
  CHECK(parse_rational("-4") == -4);
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5E2") == 250);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK(to_string(parse_rational("-6/4")) == "-3/2");
  CHECK(from_double(0.1).get_d() == 0.1);
}

TEST_CASE("kernel of example A transpose") {
  const auto n = testing_support::load("example_a.crn").stoichiometry();
  const auto ker = kernel_basis(n.transpose());
  REQUIRE(ker.size() == 1);
  CHECK(canonical_scaling(ker[0]) == RationalVector{1, 1, 1});
}

TEST_CASE("trivial kernels") {
  CHECK(kernel_basis(RationalMatrix::identity(4)).empty());
  CHECK(kernel_basis(RationalMatrix(1, 3)).size() == 3);
}

TEST_CASE("canonical scaling") {
  CHECK(canonical_scaling({Rational(-1, 2), Rational(3, 4), 0}) == RationalVector{2, -3, 0});
  CHECK(canonical_scaling({0, 6, -9}) == RationalVector{0, 2, -3});
}

TEST_CASE("random matrices against the reference elimination") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + trial % 5, cols = 1 + (trial / 5) % 6;
    RationalMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = (trial % 3 == 0 && c == 1) ? 0 : d(rng);
    const auto om = testing_support::to_oracle(m);
    CHECK(rank(m) == oracle::rank(om));
    const auto ker = kernel_basis(m);
    CHECK(ker.size() == cols - oracle::rank(om));
    for (const auto& v : ker) CHECK(is_zero(m * v));
    CHECK(column_basis(m).size() == rank(m));
    CHECK(rank(m.select_columns(column_basis(m))) == rank(m));
  }
}

TEST_CASE("square solve") {
  RationalMatrix a = RationalMatrix::from_rows({{2, 1}, {1, 3}}, 2);
  auto x = solve(a, {3, 5});
  REQUIRE(x);
  CHECK(*x == RationalVector{Rational(4, 5), Rational(7, 5)});
  CHECK_FALSE(solve(RationalMatrix::from_rows({{1, 2}, {2, 4}}, 2), {1, 1}));
}

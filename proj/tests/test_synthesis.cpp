#include <doctest.h>

#include <algorithm>

#include "crn/matroid.hpp"
#include "crn/synthesis.hpp"
#include "support.hpp"

using namespace crn;
using testing_support::idx;
using testing_support::load;

namespace {

void check_feasible(const Network& net, const SynthesisResult& res, std::size_t i) {
  const auto& n = net.stoichiometry();
  for (std::size_t r = 0; r < n.cols(); ++r) CHECK(dot(n.column(r), res.u_exact) == 0);
  for (const auto& u : perp_space_basis(n)) CHECK(dot(u, res.w_exact) == 0);
  CHECK(verify_sign_conditions(res.u_exact, res.w_exact, i).ok);
  CHECK(verify_sign_conditions(res.u, res.w, i).ok);
  for (std::size_t s = 0; s < res.cbar.size(); ++s) {
    CHECK(res.cbar[s] > 0);
    const double lhs = res.u[s] - (s == i ? 1.0 : 0.0);
    CHECK(lhs == doctest::Approx(res.w[s] / res.cbar[s]).epsilon(1e-9));
  }
  CHECK(res.u[i] >= 0.0);
  CHECK(res.u[i] <= 1.0);
  const double lo = *std::min_element(res.cbar.begin(), res.cbar.end());
  const double hi = *std::max_element(res.cbar.begin(), res.cbar.end());
  CHECK(lo * hi == doctest::Approx(1.0));
}

}  // namespace

TEST_CASE("example A synthesis") {
  const Network net = load("example_a.crn");
  const auto res = synthesize_cbar(net.stoichiometry(), 0, 1, 0.05);
  CHECK(res.achieved >= 0.95);
  CHECK(res.achieved <= 1.0);
  CHECK(res.max_inv_p == 1);
  CHECK_FALSE(res.degenerate);
  CHECK(inverse_precision_algebraic(net.stoichiometry(), res.cbar, 0, 1).value ==
        doctest::Approx(res.achieved).epsilon(1e-9));
  check_feasible(net, res, 0);
}

TEST_CASE("example E synthesis") {
  const Network net = load("example_e.crn");
  const auto i = idx(net, "X1"), o = idx(net, "X5");
  const auto res = synthesize_cbar(net.stoichiometry(), i, o, 0.1);
  CHECK(res.achieved >= 2.9);
  CHECK(res.achieved_exact.get_d() == doctest::Approx(res.achieved));
  CHECK(inverse_precision_algebraic(net.stoichiometry(), res.cbar, i, o).value ==
        doctest::Approx(res.achieved).epsilon(1e-9));
  check_feasible(net, res, i);
  const double c5 = res.cbar[o];
  for (const char* big : {"X1", "X4", "X6"}) CHECK(res.cbar[idx(net, big)] > 10 * c5);
  for (const char* small : {"X2", "X3"}) CHECK(res.cbar[idx(net, small)] < c5 / 10);
  CHECK_FALSE(res.deltas.empty());
}

TEST_CASE("optimality gap shrinks with epsilon") {
  for (const char* f : {"example_a.crn", "example_e.crn", "example_d.crn", "example_f.crn"}) {
    CAPTURE(f);
    const Network net = load(f);
    const auto n = net.stoichiometry();
    const std::size_t i = 0, o = net.num_species() - 1;
    const auto best = max_inv_precision(n, i, o).value.get_d();
    if (best <= 0) continue;
    double prev = -1;
    for (double eps : {0.5 * best, 0.1 * best, 0.01 * best}) {
      const auto res = synthesize_cbar(n, i, o, eps);
      CHECK(res.achieved >= best - eps);
      CHECK(res.achieved <= best + 1e-12);
      CHECK(res.achieved >= prev);
      prev = res.achieved;
      check_feasible(net, res, i);
    }
  }
}

TEST_CASE("degenerate and invalid requests") {
  const Network c = load("example_c.crn");
  const auto res = synthesize_cbar(c.stoichiometry(), 0, 1, 0.1);
  CHECK(res.degenerate);
  CHECK(res.achieved == 0.0);
  CHECK(res.u_exact == RationalVector{1, 0, 0});
  CHECK(is_zero(res.w_exact));
  const Network a = load("example_a.crn");
  CHECK_THROWS_AS(synthesize_cbar(a.stoichiometry(), 0, 1, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(synthesize_cbar(a.stoichiometry(), 0, 1, -0.1), std::invalid_argument);
}

TEST_CASE("sign conditions") {
  CHECK(verify_sign_conditions(RationalVector{1, 0, 0}, RationalVector{0, 0, 0}, 0).ok);
  const auto bad = verify_sign_conditions(RationalVector{1, 1, 0}, RationalVector{0, -1, 0}, 0);
  CHECK_FALSE(bad.ok);
  CHECK(bad.violations == std::vector<std::size_t>{1});

  // the final pair of the worked example, coordinates X1..X6 and i = X1
  const RationalVector u1{1, -2, 2, 0, 3, 0}, u4{1, -2, -1, -3, 0, 0}, u5{1, 1, -1, 0, 0, 3};
  const RationalVector w4{3, 0, 0, 1, -1, -1}, w5{0, 3, 0, -2, 2, -1}, w6{0, 0, 3, -1, -2, 1};
  const Rational d5(1, 100), d2(1, 10000), d4(1, 1000000), d3(1, 100000000);
  const Rational d6 = d3 / 100;
  RationalVector u(6), w(6);
  for (int s = 0; s < 6; ++s) {
    u[s] = (1 - d5) * u1[s] + d4 * u4[s] + d6 * u5[s];
    w[s] = -3 * w4[s] - d2 * w5[s] + d3 * w6[s];
  }
  CHECK(verify_sign_conditions(u, w, 0).ok);
}

TEST_CASE("json output") {
  const Network net = load("example_a.crn");
  const auto res = synthesize_cbar(net.stoichiometry(), 0, 1, 0.05);
  const auto j = to_json(res, net.species_names());
  for (const char* key : {"cbar", "achieved", "maxInvP", "u", "w", "deltas"}) CHECK(j.contains(key));
  CHECK(j["cbar"].size() == 3);
}

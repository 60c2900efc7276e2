#include <doctest.h>

#include <cmath>
#include <random>

#include "crn/dynamics.hpp"
#include "crn/matroid.hpp"
#include "support.hpp"

using namespace crn;
using testing_support::load;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST_CASE("detailed-balance rates") {
  const Network net = load("example_a.crn");
  const KineticParams p{{15, 10, 1}, {10, 0.1}};
  for (double r : db_rates(net, p, p.cbar)) CHECK(r == 0.0);
  const auto r = db_rates(net, p, std::vector<double>{30, 10, 1});
  CHECK(r[0] == doctest::Approx(3 * 10.0));
  CHECK(r[1] == doctest::Approx(0.0));
  CHECK_THROWS_AS(db_rates(net, p, std::vector<double>{1, 0, 1}), DomainError);

  // empty reactant side contributes the empty product 1
  const Network inflow = parse_network(" <-> A");
  const KineticParams q{{2}, {3}};
  CHECK(db_rates(inflow, q, std::vector<double>{4})[0] == doctest::Approx(3 * (1 - 2.0)));
}

TEST_CASE("general rates") {
  const Network net = load("example_a.crn");
  const GeneralKineticParams g{{0.044, 0.1}, {1, 0.01}};
  const auto r = mass_action_rates(net, g, std::vector<double>{2, 3, 4});
  CHECK(r[0] == doctest::Approx(0.044 * 4 - 12));
  CHECK(r[1] == doctest::Approx(0.3 - 0.04));
  CHECK(g.reversible());
  CHECK_FALSE((GeneralKineticParams{{1, 0}, {1, 1}}).reversible());
  CHECK_THROWS((GeneralKineticParams{{0, 1}, {0, 1}}).validate(net));
}

TEST_CASE("fig1 trajectory settles at the mass-action equilibrium") {
  const Network net = load("example_a.crn");
  const auto ps = testing_support::params(net, "example_a_fig1.json");
  REQUIRE(ps.general);
  const auto grid = log_time_grid(1e-4, 1e4, 200);
  const auto traj = simulate(net, *ps.general, ps.c0, grid);
  // oracle: c3 = 10 c2 from reaction 2, 0.044 c1^2 = c2 c3 from reaction 1, c1 + c2 + c3 = 26.
  // Then c1 + 11 c2 = 26 and 10 c2^2 = 0.044 (26 - 11 c2)^2, solved by bisection.
  double lo = 0, hi = 26.0 / 11;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double f = 10 * mid * mid - 0.044 * (26 - 11 * mid) * (26 - 11 * mid);
    (f > 0 ? hi : lo) = mid;
  }
  const double c2 = lo, c1 = 26 - 11 * c2, c3 = 10 * c2;
  const auto& end = traj.states.back();
  CHECK(end[0] == doctest::Approx(c1).epsilon(1e-6));
  CHECK(end[1] == doctest::Approx(c2).epsilon(1e-6));
  CHECK(end[2] == doctest::Approx(c3).epsilon(1e-6));
  for (const auto& s : traj.states) CHECK(std::abs(s[0] + s[1] + s[2] - 26) < 1e-8);

  const auto ss = integrate_to_steady_state(net, *ps.general, ps.c0);
  CHECK(ss[0] == doctest::Approx(c1).epsilon(1e-6));
}

TEST_CASE("starting at cbar stays put") {
  const Network net = load("example_d.crn");
  const auto ps = testing_support::params(net, "example_d.json");
  const auto traj = simulate(net, *ps.db, ps.db->cbar, log_time_grid(1e-3, 1e3, 30));
  for (const auto& s : traj.states)
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(rel_diff(s[k], ps.db->cbar[k]) < 1e-12);
}

TEST_CASE("conservation and free energy along random trajectories") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logu(-1, 1);
  for (const char* f : {"example_a.crn", "example_e.crn", "example_f.crn", "uni.crn"}) {
    CAPTURE(f);
    const Network net = load(f);
    const auto perp = perp_space_basis(net.stoichiometry());
    for (int trial = 0; trial < 3; ++trial) {
      KineticParams p;
      for (std::size_t s = 0; s < net.num_species(); ++s) p.cbar.push_back(std::pow(10.0, logu(rng)));
      for (std::size_t r = 0; r < net.num_reactions(); ++r) p.k.push_back(std::pow(10.0, logu(rng)));
      std::vector<double> c0;
      for (double c : p.cbar) c0.push_back(c * std::pow(10.0, logu(rng)));
      const auto traj = simulate(net, p, c0, log_time_grid(1e-4, 1e4, 120));
      for (const auto& u : perp) {
        const auto ud = to_double(u);
        auto conserved = [&](const std::vector<double>& c) {
          double x = 0;
          for (std::size_t s = 0; s < c.size(); ++s) x += ud[s] * c[s];
          return x;
        };
        const double q0 = conserved(c0);
        for (const auto& st : traj.states) CHECK(rel_diff(conserved(st), q0) < 1e-8);
      }
      double prev = free_energy(c0, p.cbar);
      for (const auto& st : traj.states) {
        const double fe = free_energy(st, p.cbar);
        CHECK(fe <= prev + 1e-9 * std::max(1.0, std::abs(prev)));
        prev = fe;
      }
    }
  }
}

TEST_CASE("stationary state") {
  const Network net = load("example_a.crn");
  const KineticParams p{{15, 10, 1}, {10, 0.1}};
  SUBCASE("gamma = cbar") {
    const auto c = stationary_state(net, p, p.cbar);
    for (int s = 0; s < 3; ++s) CHECK(c[s] == doctest::Approx(p.cbar[s]).epsilon(1e-12));
  }
  SUBCASE("same simplex as cbar") {
    const auto c = stationary_state(net, p, std::vector<double>{5, 5, 16});
    CHECK(c[0] == doctest::Approx(15).epsilon(1e-10));
    CHECK(c[1] == doctest::Approx(10).epsilon(1e-10));
    CHECK(c[2] == doctest::Approx(1).epsilon(1e-10));
  }
  SUBCASE("uniqueness on the simplex and independence of k") {
    const std::vector<double> g1{1, 2, 3}, g2{2, 1.5, 2.5};
    const auto a = stationary_state(net, p, g1);
    const auto b = stationary_state(net, p, g2);
    const auto c = stationary_state(net, KineticParams{p.cbar, {1e3, 7}}, g1);
    for (int s = 0; s < 3; ++s) {
      CHECK(rel_diff(a[s], b[s]) < 1e-9);
      CHECK(rel_diff(a[s], c[s]) < 1e-9);
    }
    // c - gamma in range N, N^T log(c/cbar) = 0
    CHECK(std::abs(a[0] + a[1] + a[2] - 6) < 1e-10);
    CHECK(std::abs(2 * std::log(a[0] / 15) - std::log(a[1] / 10) - std::log(a[2] / 1)) < 1e-10);
    CHECK(std::abs(std::log(a[1] / 10) - std::log(a[2] / 1)) < 1e-10);
  }
}

TEST_CASE("example B finite-difference Precision") {
  for (const char* f : {"example_b2.crn", "example_b3.crn", "example_b5.crn"}) {
    CAPTURE(f);
    const Network net = load(f);
    const double n = net.stoichiometry()(0, 0).get_d();
    for (const std::vector<double>& cbar : {std::vector<double>{1, 1, 1}, std::vector<double>{3, 0.5, 2}}) {
      const KineticParams p{cbar, {10, 0.1}};
      const double eps = 1e-6 * cbar[0];
      std::vector<double> g = cbar;
      g[0] += eps;
      const auto c = stationary_state(net, p, g);
      const double slope = (c[2] - cbar[2]) / eps * cbar[0] / cbar[2];
      CHECK(slope == doctest::Approx(oracle::example_b_inv_precision(n, cbar[0], cbar[1], cbar[2])).epsilon(1e-5));
    }
  }
}

TEST_CASE("rebasing the reference state") {
  const Network net = load("example_a.crn");
  const KineticParams p{{15, 1, 10}, {10, 0.1}};
  SUBCASE("gamma = cbar leaves the parameters alone") {
    const auto q = rebase_params(net, p, p.cbar);
    for (int s = 0; s < 3; ++s) CHECK(q.cbar[s] == doctest::Approx(p.cbar[s]));
    for (int r = 0; r < 2; ++r) CHECK(q.k[r] == doctest::Approx(p.k[r]));
  }
  SUBCASE("same right-hand side") {
    const auto q = rebase_params(net, p, std::vector<double>{16, 1, 10});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 30);
    for (int k = 0; k < 10; ++k) {
      const std::vector<double> c{u(rng), u(rng), u(rng)};
      const auto a = db_rates(net, p, c), b = db_rates(net, q, c);
      for (int r = 0; r < 2; ++r) CHECK(rel_diff(a[r], b[r]) < 1e-9);
    }
    // k~ via the reactant side equals k~ via the product side
    for (std::size_t r = 0; r < 2; ++r) {
      double via_beta = p.k[r];
      for (std::size_t s = 0; s < 3; ++s)
        via_beta *= std::pow(q.cbar[s] / p.cbar[s], net.reactions()[r].beta[s].get_d());
      CHECK(q.k[r] == doctest::Approx(via_beta).epsilon(1e-10));
    }
  }
}

TEST_CASE("free energy") {
  const std::vector<double> cbar{15, 10, 1};
  CHECK(free_energy(cbar, cbar) == doctest::Approx(0.0));
  CHECK(free_energy(std::vector<double>{14, 11, 1}, cbar) > 0);
  CHECK_THROWS_AS(free_energy(std::vector<double>{0, 1, 1}, cbar), DomainError);
}

TEST_CASE("time grid and integrator failure") {
  const auto g = log_time_grid(1e-2, 1e2, 5);
  REQUIRE(g.size() == 6);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == doctest::Approx(1e-2));
  CHECK(g[3] == doctest::Approx(1.0));
  CHECK(g[5] == doctest::Approx(1e2));

  Eigen::MatrixXd a(2, 2);
  a << -1e4, 1, 1, -1e-4;
  IntegratorOptions opt;
  opt.max_steps = 3;
  try {
    simulate_linear(a, std::vector<double>{1, 1}, log_time_grid(1e-3, 1e6, 50), opt);
    FAIL("expected an integration failure");
  } catch (const IntegrationError& e) {
    CHECK(e.time() >= 0.0);
  }
}

TEST_CASE("trajectory csv") {
  const Network net = load("example_a.crn");
  Trajectory t{{0, 1}, {{1, 2, 3}, {4, 5, 6}}};
  std::ostringstream out;
  write_trajectory_csv(out, net, t);
  CHECK(out.str() == "t,X1,X2,X3\n0,1,2,3\n1,4,5,6\n");
}

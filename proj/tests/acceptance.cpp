// Acceptance suite: one PASS/FAIL line per criterion.
// Exit status is nonzero when a criterion fails that is not listed in --expect-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "crn/bounds.hpp"
#include "crn/dynamics.hpp"
#include "crn/linearized.hpp"
#include "crn/matroid.hpp"
#include "crn/synthesis.hpp"
#include "support.hpp"

using namespace crn;
using testing_support::idx;
using testing_support::load;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const char* const kFixtures[] = {"example_a.crn", "example_b2.crn", "example_b3.crn", "example_b5.crn",
                                 "example_c.crn", "example_d.crn",  "example_e.crn",  "example_f.crn",
                                 "example_g.crn", "uni.crn",        "homog2.crn",     "uni_cycle.crn"};

std::vector<std::pair<std::size_t, std::size_t>> all_pairs(const Network& net) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < net.num_species(); ++i)
    for (std::size_t o = 0; o < net.num_species(); ++o)
      if (i != o) out.emplace_back(i, o);
  return out;
}

RationalVector numbered_order(const Network& net, const RationalVector& v) {
  RationalVector out;
  for (std::size_t s = 0; s < net.num_species(); ++s) out.push_back(v[idx(net, "X" + std::to_string(s + 1))]);
  return out;
}

void criterion_1(Outcome& r) {
  const auto t0 = Clock::now();
  const Network net = load("example_a.crn");
  const auto ps = testing_support::params(net, "example_a.json");
  const auto op = linearize_db(net, *ps.db);
  const double s = sensitivity(op, 0, 1).value;
  const double p = inverse_precision_limit(op, 0, 1).value;
  const double dt = seconds_since(t0);
  r.detail << "S=" << s << " invP=" << p << " in " << dt << " s";
  r.require(std::abs(s - 1.44) <= 0.01, "S = 1.44 +- 0.01");
  r.require(std::abs(p - 0.58) <= 0.01, "invP = 0.58 +- 0.01");
  r.require(dt < 1.0, "runtime < 1 s");
}

void criterion_2(Outcome& r) {
  const Network net = load("example_a.crn");
  const auto ps = testing_support::params(net, "example_a_fig1.json");
  const auto c = integrate_to_steady_state(net, *ps.general, ps.c0);
  const std::vector<std::pair<const char*, double>> expect{{"X1", 15}, {"X2", 10}, {"X3", 1}};
  double err = 0;
  r.detail << "steady state";
  for (const auto& [name, value] : expect) {
    r.detail << ' ' << name << '=' << c[idx(net, name)];
    err = std::max(err, std::abs(c[idx(net, name)] - value));
  }
  // the reference state of the linearized analysis, X2 and X3 swapped
  const double swapped = std::max({std::abs(c[idx(net, "X1")] - 15), std::abs(c[idx(net, "X2")] - 1),
                                   std::abs(c[idx(net, "X3")] - 10)});
  r.detail << ", max deviation from (15,10,1) = " << err << " (from (15,1,10): " << swapped << ")";
  r.require(err <= 1e-3, "within 1e-3 of (15,10,1)");
}

void criterion_3(Outcome& r) {
  static const int table_w[9][6] = {{0, 1, 1, -1, 0, 0}, {0, 1, -2, 0, 2, -1}, {2, 1, 0, 0, 0, -1},
                                    {3, 0, 0, 1, -1, -1}, {0, 3, 0, -2, 2, -1}, {0, 0, 3, -1, -2, 1},
                                    {1, 0, 1, 0, -1, 0},  {2, 0, -1, 1, 0, -1}, {1, -1, 0, 1, -1, 0}};
  static const int table_u[9][6] = {{1, -2, 2, 0, 3, 0},  {1, 0, 0, 0, 1, 2},  {1, -2, 0, -2, 1, 0},
                                    {1, -2, -1, -3, 0, 0}, {1, 1, -1, 0, 0, 3}, {0, 1, 0, 1, 0, 1},
                                    {0, 1, -1, 0, -1, 1},  {1, 0, -1, -1, 0, 2}, {0, 0, 1, 1, 1, 0}};
  auto as_set = [](const int (&rows)[9][6]) {
    std::set<RationalVector> out;
    for (const auto& row : rows) out.insert(canonical_scaling(RationalVector(row, row + 6)));
    return out;
  };
  const auto t0 = Clock::now();
  const Network net = load("example_e.crn");
  const auto ew = elementary_vectors(net.stoichiometry(), Space::W);
  const auto eu = elementary_vectors(net.stoichiometry(), Space::WPerp);
  const auto cert = max_inv_precision(ew, eu, 6, idx(net, "X1"), idx(net, "X5"));
  const double dt = seconds_since(t0);
  std::set<RationalVector> got_w, got_u;
  for (const auto& e : ew) got_w.insert(canonical_scaling(numbered_order(net, e.coords)));
  for (const auto& e : eu) got_u.insert(canonical_scaling(numbered_order(net, e.coords)));
  r.detail << ew.size() << " in W, " << eu.size() << " in W-perp, maxInvP=" << cert.value << " (u-side "
           << cert.value_u << ", w-side " << cert.value_w << ") in " << dt << " s";
  r.require(ew.size() == 9 && eu.size() == 9, "9 + 9 elementary vectors");
  r.require(got_w == as_set(table_w), "W table matches");
  r.require(got_u == as_set(table_u), "W-perp table matches");
  r.require(cert.value == 3 && cert.value_u == 3 && cert.value_w == 3, "maxInvP = 3 both ways");
  r.require(numbered_order(net, cert.witness_u.coords) == RationalVector{1, -2, 2, 0, 3, 0}, "witness u1");
  r.require(numbered_order(net, cert.witness_w.coords) == RationalVector{3, 0, 0, 1, -1, -1}, "witness w4");
  r.require(dt < 1.0, "runtime < 1 s");
}

void criterion_4(Outcome& r) {
  const Network net = load("example_c.crn");
  const auto cert = max_inv_precision(net.stoichiometry(), idx(net, "X1"), idx(net, "X2"));
  r.detail << "maxInvP=" << cert.value;
  r.require(cert.value == 0, "maxInvP = 0");
}

void criterion_5(Outcome& r) {
  const Network net = load("uni.crn");
  const auto ps = testing_support::params(net, "uni.json");
  const RationalVector exact_cbar = from_double(ps.cbar);
  const Rational target(20, 91);
  const Rational closed = 1 / homogeneous_precision(net, exact_cbar, 0);
  r.require(closed == target, "closed form 20/91");
  for (const char* o : {"X2", "X3", "X4"}) {
    const auto ex = inverse_precision_algebraic(net.stoichiometry(), exact_cbar, 0, idx(net, o)).value;
    const auto fl = inverse_precision_algebraic(net.stoichiometry(), ps.cbar, 0, idx(net, o)).value;
    r.detail << o << ": " << ex << " / " << fl << "  ";
    r.require(ex == target, std::string("exact value for ") + o);
    r.require(std::abs(fl - target.get_d()) <= 1e-9, std::string("double value for ") + o);
  }
}

void criterion_6(Outcome& r) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-3, 3);
  double worst = 0;
  for (const char* f : {"example_b2.crn", "example_b3.crn", "example_b5.crn"}) {
    const Network net = load(f);
    const double n = net.stoichiometry()(0, 0).get_d();
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> c{std::pow(10.0, u(rng)), std::pow(10.0, u(rng)), std::pow(10.0, u(rng))};
      const double got = inverse_precision_algebraic(net.stoichiometry(), c, 0, 2).value;
      const double want = oracle::example_b_inv_precision(n, c[0], c[1], c[2]);
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
  }
  r.detail << "60 points, worst relative error " << worst;
  r.require(worst <= 1e-9, "relative error <= 1e-9");
}

void criterion_7(Outcome& r) {
  const Network net = load("example_e.crn");
  const auto i = idx(net, "X1"), o = idx(net, "X5");
  const auto res = synthesize_cbar(net.stoichiometry(), i, o, 0.1);
  const double check = inverse_precision_algebraic(net.stoichiometry(), res.cbar, i, o).value;
  r.detail << "achieved " << res.achieved << ", independent solve " << check << ", cbar/cbar_X5:";
  const double c5 = res.cbar[o];
  for (int s = 1; s <= 6; ++s) r.detail << ' ' << std::setprecision(3) << res.cbar[idx(net, "X" + std::to_string(s))] / c5;
  r.require(res.achieved >= 2.9, "achieved >= 2.9");
  r.require(check >= 2.9 && std::abs(check - res.achieved) <= 1e-9 * std::max(1.0, check), "independent solve agrees");
  for (const char* s : {"X1", "X4", "X6"}) r.require(res.cbar[idx(net, s)] > c5, std::string(s) + " large");
  for (const char* s : {"X2", "X3"}) r.require(res.cbar[idx(net, s)] < c5, std::string(s) + " small");
}

void criterion_8(Outcome& r) {
  const Network net = load("example_f.crn");
  const auto ps = testing_support::params(net, "example_f.json");
  const auto i = idx(net, "X1"), o = idx(net, "X6");
  const double s = sensitivity(linearize_db(net, *ps.db), i, o).value;
  const auto best = max_inv_precision(net.stoichiometry(), i, o).value;
  const double bound = sensitivity_sqrt_bound(ps.cbar, i, o);
  r.detail << "S=" << s << " maxInvP=" << best << " sqrt bound=" << bound;
  r.require(std::abs(s - 1.13) <= 0.01, "S = 1.13 +- 0.01");
  r.require(best == 1, "maxInvP = 1");
  r.require(s > best.get_d(), "S exceeds maxInvP");
  r.require(s <= bound, "S <= sqrt(cbar_1/cbar_6)");
}

void criterion_9(Outcome& r) {
  const Network net = load("example_d.crn");
  const auto ps = testing_support::params(net, "example_d.json");
  const auto op = linearize_db(net, *ps.db);
  const auto spec = spectrum(op);
  const auto i = idx(net, "X1");
  const double s = sensitivity(op, i, idx(net, "X5")).value;
  const double horizon = default_window(spec).t_max;
  const auto e = matrix_exponential(op, spec, horizon);
  double late = 0;
  for (std::size_t k = 0; k < op.size(); ++k) late = std::max(late, std::abs(e(k, i)));
  r.detail << "S(X1->X5)=" << s << ", largest response at t=" << horizon << " is " << late;
  r.require(s >= 7, "S >= 7");
  r.require(late < 0.1, "long-time response below 0.1");
}

void criterion_10(Outcome& r) {
  const Network net = load("example_g.crn");
  const auto ps = testing_support::params(net, "example_g.json");
  const double s = sensitivity(linearize_general(net, ps.cbar, *ps.general), idx(net, "L"), idx(net, "RLp")).value;
  r.detail << "S(L->RLp)=" << s;
  r.require(s >= 60 && s <= 80, "S in [60, 80]");
}

void criterion_11(Outcome& r) {
  std::size_t trials = 0;
  auto run = [&](const char* f, bool general, std::uint64_t seed, const std::string& label) {
    const Network net = load(f);
    const auto summary = verify_bounds(net, all_pairs(net), 100, seed, general);
    trials += summary.trials;
    r.require(summary.failures == 0,
              label + " on " + f + (summary.messages.empty() ? std::string() : ": " + summary.messages.front()));
  };
  // (a) square-root bound and (c) S >= invP ride along in every DB report
  run("example_a.crn", false, 101, "(a)");
  run("example_e.crn", false, 102, "(a)");
  // (b)
  run("homog2.crn", false, 103, "(b)");
  run("uni.crn", false, 104, "(b)");
  run("uni_cycle.crn", true, 105, "(b)");
  // (c) beyond the networks above
  run("example_d.crn", false, 106, "(c)");
  run("example_f.crn", false, 107, "(c)");

  // (d), (e)
  std::size_t pairs = 0, spaces = 0;
  for (const char* f : kFixtures) {
    const Network net = load(f);
    for (auto [i, o] : all_pairs(net)) {
      try {
        const auto cert = max_inv_precision(net.stoichiometry(), i, o);
        r.require(cert.value_u == cert.value_w, std::string("(d) duality on ") + f);
      } catch (const DualityError& e) {
        r.require(false, std::string("(d) ") + e.what());
      }
      ++pairs;
    }
    if (net.num_species() > 10) continue;
    const auto n = testing_support::to_oracle(net.stoichiometry());
    for (Space sp : {Space::W, Space::WPerp}) {
      std::set<oracle::Vec> got;
      for (const auto& e : elementary_vectors(net.stoichiometry(), sp)) got.insert(oracle::normalized(e.coords));
      const auto want = sp == Space::W ? oracle::elementary_of_w(n, net.num_species())
                                       : oracle::elementary_of_wperp(n, net.num_species());
      r.require(got == want, std::string("(e) oracle on ") + f);
      ++spaces;
    }
  }

  // (f)
  const char* const dyn[] = {"example_a.crn", "example_b2.crn", "example_d.crn", "example_e.crn", "example_f.crn",
                             "uni.crn",       "homog2.crn"};
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst_drift = 0, worst_rise = 0;
  for (int t = 0; t < 20; ++t) {
    const Network net = load(dyn[t % 7]);
    const auto p = random_db_params(net, rng);
    std::vector<double> c0;
    for (double c : p.cbar) c0.push_back(c * std::pow(10.0, u(rng)));
    const double horizon = default_window(spectrum(linearize_db(net, p))).t_max;
    const auto traj = simulate(net, p, c0, log_time_grid(horizon * 1e-8, horizon, 150));
    for (const auto& v : perp_space_basis(net.stoichiometry())) {
      const auto vd = to_double(v);
      double q0 = 0, scale = 0;
      for (std::size_t s = 0; s < c0.size(); ++s) {
        q0 += vd[s] * c0[s];
        scale += std::abs(vd[s] * c0[s]);
      }
      for (const auto& st : traj.states) {
        double q = 0;
        for (std::size_t s = 0; s < st.size(); ++s) q += vd[s] * st[s];
        worst_drift = std::max(worst_drift, std::abs(q - q0) / scale);
      }
    }
    double prev = free_energy(c0, p.cbar);
    for (const auto& st : traj.states) {
      const double fe = free_energy(st, p.cbar);
      worst_rise = std::max(worst_rise, (fe - prev) / std::max(1.0, std::abs(prev)));
      prev = fe;
    }
  }
  r.require(worst_drift <= 1e-8, "(f) conservation");
  r.require(worst_rise <= 1e-9, "(f) free energy non-increasing");
  r.detail << trials << " bound trials, " << pairs << " duality pairs, " << spaces
           << " oracle enumerations, 20 trajectories (drift " << worst_drift << ", free-energy rise " << worst_rise
           << ")";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<int> expected;
  std::vector<int> only;
  app.add_option("--expect-fail", expected, "criteria known to fail; they do not affect the exit status");
  app.add_option("--only", only, "run just these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"Example A regression (S, invP)", criterion_1},
      {"Example A nonlinear steady state", criterion_2},
      {"Example E golden tables and maxInvP", criterion_3},
      {"Example C maxInvP = 0", criterion_4},
      {"uni inverse Precision 20/91", criterion_5},
      {"Example B closed form", criterion_6},
      {"synthesis on Example E", criterion_7},
      {"Example F Sensitivity above maxInvP", criterion_8},
      {"Example D daisy chain", criterion_9},
      {"Example G non-detailed-balance Sensitivity", criterion_10},
      {"property suites", criterion_11},
  };

  int unexpected = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome r;
    r.detail << std::setprecision(6);
    const auto t0 = Clock::now();
    try {
      criteria[k].second(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail << " [exception: " << e.what() << "]";
    }
    const bool known = std::find(expected.begin(), expected.end(), id) != expected.end();
    if (!r.pass && !known) ++unexpected;
    std::cout << "criterion " << std::setw(2) << id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << criteria[k].first
              << " | " << r.detail.str() << std::fixed << std::setprecision(2) << " (" << seconds_since(t0) << " s)"
              << std::defaultfloat << (!r.pass && known ? " (known failure)" : "") << '\n';
  }
  return unexpected == 0 ? 0 : 1;
}

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "crn/bounds.hpp"
#include "crn/dynamics.hpp"
#include "crn/linearized.hpp"
#include "crn/matroid.hpp"
#include "crn/network.hpp"
#include "crn/params_io.hpp"
#include "crn/plot.hpp"
#include "crn/synthesis.hpp"

namespace crn::cli {

namespace {

namespace fs = std::filesystem;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string network;
  std::string input, output;
  std::string params;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  bool plot = false;
  double t_min = 0, t_max = 0;
  std::size_t samples = 400;
  double epsilon = 0.1;
  double perturbation = 1e-3;
  std::size_t trials = 100;
  bool general = false;
};

std::size_t species_or_throw(const Network& net, const std::string& name, const char* role) {
  if (name.empty()) throw InputError(std::string("--") + role + " is required");
  auto idx = net.species_index(name);
  if (!idx) throw InputError(std::string("unknown ") + role + " species '" + name + "'");
  return *idx;
}

fs::path prepare_out(const Config& cfg) {
  fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
  return dir;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path.string() + "'");
  f << j.dump(2) << '\n';
}

ParamSet params_or_throw(const Config& cfg, const Network& net) {
  if (cfg.params.empty()) throw InputError("--params is required");
  return load_params(cfg.params, net);
}

// Reference state for general kinetics: given cbar, or the long-time limit from c0.
std::vector<double> general_reference(const Network& net, const ParamSet& ps) {
  if (!ps.cbar.empty()) return ps.cbar;
  if (ps.c0.empty()) throw InputError("general kinetics need 'cbar' or 'c0' in the parameters");
  return integrate_to_steady_state(net, *ps.general, ps.c0);
}

int cmd_simulate(const Config& cfg, std::ostream& out) {
  const Network net = load_network(cfg.network);
  const ParamSet ps = params_or_throw(cfg, net);
  if (cfg.samples < 2) throw InputError("time grid needs at least two samples");
  const std::vector<double> reference = ps.is_general() ? ps.cbar : ps.db->cbar;

  std::optional<std::size_t> input;
  if (!cfg.input.empty()) input = species_or_throw(net, cfg.input, "input");
  std::vector<double> c0 = ps.c0;
  if (c0.empty()) {
    if (reference.empty() || !input) throw InputError("need 'c0' in the parameters, or cbar together with --input");
    c0 = reference;
    c0[*input] *= 1.0 + cfg.perturbation;
  }

  double t_max = cfg.t_max > 0 ? cfg.t_max : ps.t_max.value_or(0.0);
  if (!(t_max > 0)) {
    if (ps.db) {
      t_max = default_window(spectrum(linearize_db(net, *ps.db))).t_max;
    } else if (!reference.empty()) {
      t_max = default_window(spectrum(linearize_general(net, reference, *ps.general))).t_max;
    } else {
      t_max = 1e3;
    }
  }
  const double t_min = cfg.t_min > 0 ? cfg.t_min : t_max * 1e-8;
  if (!(t_min < t_max)) throw InputError("--t-min must be below --t-max");
  const auto grid = log_time_grid(t_min, t_max, cfg.samples, true);

  const Trajectory traj = ps.db ? simulate(net, *ps.db, c0, grid) : simulate(net, *ps.general, c0, grid);
  const fs::path dir = prepare_out(cfg);
  {
    std::ofstream f(dir / "trajectory.csv");
    write_trajectory_csv(f, net, traj);
  }

  nlohmann::ordered_json summary;
  summary["network"] = cfg.network;
  summary["species"] = net.species_names();
  summary["c0"] = c0;
  summary["t_final"] = traj.times.back();
  summary["final_state"] = traj.states.back();
  if (ps.general) summary["steady_state"] = integrate_to_steady_state(net, *ps.general, c0);
  else summary["steady_state"] = stationary_state(net, *ps.db, c0);

  // relative response (c_s/cbar_s - 1)/eps when a reference state and an input are known
  if (!reference.empty() && input && ps.c0.empty()) {
    std::ofstream f(dir / "response.csv");
    f << std::setprecision(17) << "t";
    for (const auto& s : net.species()) f << ',' << s.name;
    f << '\n';
    std::vector<double> peak(net.num_species(), -INFINITY);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      f << traj.times[k];
      for (std::size_t s = 0; s < net.num_species(); ++s) {
        const double u = (traj.states[k][s] / reference[s] - 1.0) / cfg.perturbation;
        peak[s] = std::max(peak[s], u);
        f << ',' << u;
      }
      f << '\n';
    }
    nlohmann::ordered_json pk = nlohmann::ordered_json::object();
    for (std::size_t s = 0; s < net.num_species(); ++s) pk[net.species()[s].name] = peak[s];
    summary["response_peak"] = pk;
  }
  if (cfg.plot) {
    std::vector<PlotSeries> series;
    for (std::size_t s = 0; s < net.num_species(); ++s) {
      PlotSeries p{net.species()[s].name, traj.times, {}};
      for (const auto& st : traj.states) p.y.push_back(st[s]);
      series.push_back(std::move(p));
    }
    std::ofstream f(dir / "trajectory.svg");
    write_svg_plot(f, "concentrations", series, true);
  }
  write_json(dir / "simulate.json", summary);
  out << summary.dump(2) << '\n';
  return kOk;
}

int cmd_analyze(const Config& cfg, std::ostream& out) {
  const Network net = load_network(cfg.network);
  const ParamSet ps = params_or_throw(cfg, net);
  const std::size_t i = species_or_throw(net, cfg.input, "input");
  const std::size_t o = species_or_throw(net, cfg.output, "output");
  if (i == o) throw InputError("input and output must differ");

  LinearOperator op;
  BoundReport report;
  if (ps.db) {
    op = linearize_db(net, *ps.db);
    report = check_all_bounds(net, *ps.db, i, o);
  } else {
    const auto cbar = general_reference(net, ps);
    op = linearize_general(net, cbar, *ps.general);
    report = check_all_bounds(net, cbar, *ps.general, i, o);
  }
  const Spectrum spec = spectrum(op);
  TimeWindow window = default_window(spec, cfg.samples);
  if (cfg.t_min > 0) window.t_min = cfg.t_min;
  if (cfg.t_max > 0) window.t_max = cfg.t_max;
  if (!(window.t_min < window.t_max) || window.samples < 2) throw InputError("invalid time window");
  const ResponseCurve curve = response_curve(op, spec, i, o, window);

  nlohmann::ordered_json j;
  j["network"] = cfg.network;
  j["report"] = to_json(report);
  if (ps.db) j["invP_algebraic"] = inverse_precision_algebraic(net.stoichiometry(), ps.db->cbar, i, o).value;
  if (net.num_reactions() <= 20) {
    const auto lb = max_sensitivity_lower_bound(net, i, o);
    nlohmann::ordered_json sub;
    sub["value"] = to_string(lb.value);
    std::vector<std::string> labels;
    for (auto r : lb.reactions) labels.push_back(net.reactions()[r].label);
    sub["reactions"] = labels;
    j["maxS_lower_bound"] = sub;
  }
  j["window"] = {{"t_min", window.t_min}, {"t_max", window.t_max}, {"samples", window.samples}};

  const fs::path dir = prepare_out(cfg);
  {
    std::ofstream f(dir / "response.csv");
    write_response_csv(f, curve);
  }
  if (cfg.plot) {
    std::ofstream f(dir / "response.svg");
    write_svg_plot(f, "(e^{tA})_{" + cfg.output + "," + cfg.input + "}",
                   {PlotSeries{cfg.output, curve.times, curve.values}}, true);
  }
  write_json(dir / "report.json", j);
  print_table(out, report);
  return kOk;
}

int cmd_maxinvp(const Config& cfg, std::ostream& out) {
  const Network net = load_network(cfg.network);
  const std::size_t i = species_or_throw(net, cfg.input, "input");
  const std::size_t o = species_or_throw(net, cfg.output, "output");
  if (i == o) throw InputError("input and output must differ");
  const auto& n = net.stoichiometry();
  const auto ew = elementary_vectors(n, Space::W);
  const auto eu = elementary_vectors(n, Space::WPerp);
  const auto cert = max_inv_precision(ew, eu, net.num_species(), i, o);

  auto vec = [](const RationalVector& v) {
    std::vector<std::string> s;
    for (const auto& q : v) s.push_back(to_string(q));
    return s;
  };
  nlohmann::ordered_json j;
  j["network"] = cfg.network;
  j["species"] = net.species_names();
  j["input"] = cfg.input;
  j["output"] = cfg.output;
  j["maxInvP"] = to_string(cert.value);
  j["maxInvP_value"] = cert.value.get_d();
  j["witness_u"] = vec(cert.witness_u.coords);
  j["witness_w"] = vec(cert.witness_w.coords);
  j["num_elementary_W"] = ew.size();
  j["num_elementary_Wperp"] = eu.size();

  const fs::path dir = prepare_out(cfg);
  write_json(dir / "maxinvp.json", j);
  {
    std::ofstream f(dir / "elementary_vectors.tsv");
    write_elementary_tsv(f, net.species_names(), ew, eu);
  }
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_synthesize(const Config& cfg, std::ostream& out) {
  const Network net = load_network(cfg.network);
  const std::size_t i = species_or_throw(net, cfg.input, "input");
  const std::size_t o = species_or_throw(net, cfg.output, "output");
  if (i == o) throw InputError("input and output must differ");
  const SynthesisResult res = synthesize_cbar(net.stoichiometry(), i, o, cfg.epsilon);
  auto j = to_json(res, net.species_names());
  j["epsilon"] = cfg.epsilon;
  j["check_invP"] = inverse_precision_algebraic(net.stoichiometry(), res.cbar, i, o).value;
  j["signs_ok"] = verify_sign_conditions(res.u, res.w, i).ok;
  const fs::path dir = prepare_out(cfg);
  write_json(dir / "synthesis.json", j);
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  const Network net = load_network(cfg.network);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (!cfg.input.empty() || !cfg.output.empty()) {
    const std::size_t i = species_or_throw(net, cfg.input, "input");
    const std::size_t o = species_or_throw(net, cfg.output, "output");
    if (i == o) throw InputError("input and output must differ");
    pairs.emplace_back(i, o);
  } else {
    for (std::size_t i = 0; i < net.num_species(); ++i)
      for (std::size_t o = 0; o < net.num_species(); ++o)
        if (i != o) pairs.emplace_back(i, o);
  }
  if (cfg.general && !is_unimolecular(net)) throw InputError("--general needs a unimolecular network");
  const VerifySummary summary = verify_bounds(net, pairs, cfg.trials, cfg.seed, cfg.general);
  nlohmann::ordered_json j;
  j["network"] = cfg.network;
  j["seed"] = cfg.seed;
  j["kinetics"] = cfg.general ? "general" : "detailed_balance";
  j["pairs"] = pairs.size();
  j["summary"] = summary.to_json();
  const fs::path dir = prepare_out(cfg);
  write_json(dir / "verify.json", j);
  out << j.dump(2) << '\n';
  return summary.failures == 0 ? kOk : kPropertyFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Input-output analysis of chemical reaction networks"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub, bool needs_params) {
    sub->add_option("--network", cfg.network, "reaction network file")->required()->check(CLI::ExistingFile);
    sub->add_option("--input", cfg.input, "input species");
    sub->add_option("--output", cfg.output, "output species");
    auto* p = sub->add_option("--params", cfg.params, "parameter JSON file or inline JSON object");
    if (needs_params) p->required();
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_flag("--plot", cfg.plot, "also write an SVG plot");
  };
  auto* simulate_cmd = app.add_subcommand("simulate", "integrate the mass-action ODE");
  common(simulate_cmd, true);
  simulate_cmd->add_option("--t-max", cfg.t_max, "final time");
  simulate_cmd->add_option("--t-min", cfg.t_min, "first positive sample time");
  simulate_cmd->add_option("--samples", cfg.samples, "number of log-spaced samples");
  simulate_cmd->add_option("--perturbation", cfg.perturbation, "relative input perturbation when c0 is absent");

  auto* analyze_cmd = app.add_subcommand("analyze", "Sensitivity, Precision and bound checks");
  common(analyze_cmd, true);
  analyze_cmd->add_option("--t-max", cfg.t_max, "response window end");
  analyze_cmd->add_option("--t-min", cfg.t_min, "response window start");
  analyze_cmd->add_option("--samples", cfg.samples, "number of log-spaced samples");

  auto* maxinvp_cmd = app.add_subcommand("maxinvp", "maximal inverse Precision with certificates");
  common(maxinvp_cmd, false);

  auto* synth_cmd = app.add_subcommand("synthesize", "construct cbar approaching maxInvP");
  common(synth_cmd, false);
  synth_cmd->add_option("--epsilon", cfg.epsilon, "allowed gap to maxInvP");

  auto* verify_cmd = app.add_subcommand("verify", "randomized bound checks");
  common(verify_cmd, false);
  verify_cmd->add_option("--trials", cfg.trials, "number of random parameter points");
  verify_cmd->add_flag("--general", cfg.general, "non-detailed-balance rates (unimolecular networks)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(cfg, out);
    if (*analyze_cmd) return cmd_analyze(cfg, out);
    if (*maxinvp_cmd) return cmd_maxinvp(cfg, out);
    if (*synth_cmd) return cmd_synthesize(cfg, out);
    if (*verify_cmd) return cmd_verify(cfg, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const NetworkError& e) {
    err << "network error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParamError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kInputError;
  } catch (const IntegrationError& e) {
    err << "integration failed: " << e.what() << '\n';
    return kNumericalError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::out_of_range& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
  return kInputError;
}

}  // namespace crn::cli

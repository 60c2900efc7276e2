// Serial reference paths against the OpenMP kernels.
// Each benchmark takes the execution mode as its argument: 0 serial, 1 parallel.

#include <string>

#include <benchmark/benchmark.h>

#include "crn/bounds.hpp"
#include "crn/linearized.hpp"
#include "crn/matroid.hpp"
#include "crn/params_io.hpp"

namespace {

using namespace crn;

std::string fixture(const std::string& name) { return std::string(CRN_FIXTURE_DIR) + "/" + name; }

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_ElementaryVectors(benchmark::State& state, const char* file) {
  const Network net = load_network(fixture(file));
  const auto n = net.stoichiometry();
  for (auto _ : state) {
    benchmark::DoNotOptimize(elementary_vectors(n, Space::W, mode(state)));
    benchmark::DoNotOptimize(elementary_vectors(n, Space::WPerp, mode(state)));
  }
  label(state);
}

void BM_SubsystemLowerBound(benchmark::State& state) {
  const Network net = load_network(fixture("example_g.crn"));
  const auto i = net.species_index("L").value(), o = net.species_index("RLp").value();
  for (auto _ : state) benchmark::DoNotOptimize(max_sensitivity_lower_bound(net, i, o, 20, mode(state)));
  label(state);
}

void BM_ResponseCurve(benchmark::State& state, const char* file, const char* params, const char* in,
                      const char* out) {
  const Network net = load_network(fixture(file));
  const ParamSet ps = load_params(fixture(params), net);
  const LinearOperator op = ps.is_general() ? linearize_general(net, ps.cbar, *ps.general) : linearize_db(net, *ps.db);
  const Spectrum spec = spectrum(op);
  const TimeWindow window = default_window(spec, 4000);
  const auto i = net.species_index(in).value(), o = net.species_index(out).value();
  for (auto _ : state) benchmark::DoNotOptimize(response_curve(op, spec, i, o, window, mode(state)));
  label(state);
}

}  // namespace

BENCHMARK_CAPTURE(BM_ElementaryVectors, example_e, "example_e.crn")->Arg(0)->Arg(1);
BENCHMARK_CAPTURE(BM_ElementaryVectors, example_g, "example_g.crn")->Arg(0)->Arg(1);
BENCHMARK(BM_SubsystemLowerBound)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ResponseCurve, example_d, "example_d.crn", "example_d.json", "X1", "X5")->Arg(0)->Arg(1);
BENCHMARK_CAPTURE(BM_ResponseCurve, example_g, "example_g.crn", "example_g.json", "L", "RLp")
    ->Arg(0)
    ->Arg(1)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

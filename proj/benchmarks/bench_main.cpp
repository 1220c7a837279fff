#include <benchmark/benchmark.h>

#include "ctpi/engine.hpp"
#include "ctpi/imatrix.hpp"
#include "ctpi/influence.hpp"
#include "ctpi/system.hpp"

using namespace ctpi;

namespace {

CorrelationRequest ohmic_request(int n_steps) {
  CorrelationRequest req;
  req.system.h0 = -ops::sigma_x();
  req.a_op = ops::sigma_z();
  req.b_op = ops::sigma_z();
  req.beta = 0.5;
  req.n_steps = n_steps;
  bath::BathSpec b;
  b.density = bath::OhmicFamily{1.0, 0.2, 5.0};
  b.coupling = {1.0, -1.0};
  req.baths = {b};
  req.truncation.cutoff = 1e-10;
  return req;
}

void BM_BuildIMatrix(benchmark::State& state) {
  const int n_steps = static_cast<int>(state.range(0));
  bath::BathSpec b;
  b.density = bath::OhmicFamily{1.0, 0.2, 5.0};
  b.coupling = {1.0, -1.0};
  ContourGrid grid = build_contour(n_steps, 1.5, 0.5);
  for (auto _ : state) {
    bath::IMatrix im = bath::build_imatrix(b.density, grid, {});
    benchmark::DoNotOptimize(im.entries.data());
  }
}
BENCHMARK(BM_BuildIMatrix)->Arg(10)->Arg(20)->Arg(40);

void BM_InfluenceApply(benchmark::State& state) {
  const int n_steps = static_cast<int>(state.range(0));
  CorrelationRequest req = ohmic_request(n_steps);
  TimepointWorkspace ws = prepare_timepoint(req, 1.5);
  for (auto _ : state) {
    ObtResult res = run_pipeline(req, ws, req.b_op);
    benchmark::DoNotOptimize(res.o.data());
  }
}
BENCHMARK(BM_InfluenceApply)->Arg(10)->Arg(20)->Arg(40);

void BM_CorrelationPoint(benchmark::State& state) {
  CorrelationRequest req = ohmic_request(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ObtResult res = compute_obt(req, 1.5);
    benchmark::DoNotOptimize(res.o.data());
  }
}
BENCHMARK(BM_CorrelationPoint)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();

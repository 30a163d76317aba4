// Serial reference vs OpenMP kernels on pricing-step problems of growing size.

#include "hjb/bs_model.hpp"
#include "hjb/kernels.hpp"
#include "hjb/timestepper.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace hjb;

namespace {

struct Setup {
    ControlProblem problem;
    Vector x;

    explicit Setup(std::size_t n)
        : problem(step_problem(MarketParams{}, Grid(600.0, 1.0, 400, n))
                      .with_uniform_rhs(sample_payoff(butterfly_payoff(), Grid(600.0, 1.0, 400, n)))),
          x(n) {
        for (std::size_t i = 0; i < n; ++i) x[i] = 20.0 * std::sin(0.01 * static_cast<double>(i));
    }
};

template <auto Kernel>
void bm_envelope(benchmark::State& state) {
    const Setup s(static_cast<std::size_t>(state.range(0)));
    Vector out(s.x.size());
    std::vector<std::size_t> arg(s.x.size());
    for (auto _ : state) {
        Kernel(s.problem, s.x, out, arg);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void bm_residual(benchmark::State& state) {
    const Setup s(static_cast<std::size_t>(state.range(0)));
    Vector out(s.x.size());
    for (auto _ : state) {
        Kernel(s.problem, 0, 1e6, s.x, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Masks, auto Assemble>
void bm_assemble(benchmark::State& state) {
    const Setup s(static_cast<std::size_t>(state.range(0)));
    std::vector<kernels::RowMask> masks;
    Masks(s.problem, 0, true, s.x, masks);
    BandedMatrix jac(s.x.size());
    Vector rhs(s.x.size());
    for (auto _ : state) {
        Assemble(s.problem, 0, 1e6, masks, jac, rhs);
        benchmark::DoNotOptimize(rhs.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

#define SIZES RangeMultiplier(4)->Range(256, 1 << 18)

BENCHMARK(bm_envelope<kernels::serial::envelope>)->Name("envelope/serial")->SIZES;
BENCHMARK(bm_envelope<kernels::parallel::envelope>)->Name("envelope/parallel")->SIZES;
BENCHMARK(bm_residual<kernels::serial::penalty_residual>)->Name("penalty_residual/serial")->SIZES;
BENCHMARK(bm_residual<kernels::parallel::penalty_residual>)->Name("penalty_residual/parallel")->SIZES;
BENCHMARK(bm_assemble<kernels::serial::penalty_masks, kernels::serial::assemble_penalty_system>)
    ->Name("assemble/serial")
    ->SIZES;
BENCHMARK(bm_assemble<kernels::parallel::penalty_masks, kernels::parallel::assemble_penalty_system>)
    ->Name("assemble/parallel")
    ->SIZES;

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "quantdyn/analysis.hpp"
#include "quantdyn/dynamics.hpp"
#include "quantdyn/quantize.hpp"
#include "quantdyn/random.hpp"

using namespace quantdyn;

namespace {

RealVector random_vector(std::size_t n, std::uint64_t seed) {
    GaussianSampler sampler(seed, 0);
    RealVector y(n);
    do {
        sampler.fill(y);
    } while (is_zero(y));
    return y;
}

void ProjectTernary(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const RealVector y = random_vector(n, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(project_ternary(y));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(ProjectTernary)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BruteForceTernary(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const RealVector y = random_vector(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(brute_force_project(y, QuantizationMode::Ternary));
    }
}
BENCHMARK(BruteForceTernary)->DenseRange(4, 12, 2);

void VertexDecomposition(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const RealVector x = random_vector(n, 3);
    const VertexSet basis = vertex_set(x);
    for (auto _ : state) {
        benchmark::DoNotOptimize(decompose_in_cone(x, basis));
    }
}
BENCHMARK(VertexDecomposition)->RangeMultiplier(2)->Range(4, 64);

void QuantStepPopulation(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RealVector w_star = random_vector(n, 4);
    const double w_norm = norm(w_star);
    for (double& v : w_star) v /= w_norm;
    ExperimentConfig config;
    config.mode = QuantizationMode::Ternary;
    config.teacher = Teacher::population_only(w_star, 1.0);
    config.schedule = LearningRateSchedule::constant(0.1);
    config.iterations = 1;
    const RealVector y = random_vector(n, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(quant_step(y, 0, config));
    }
}
BENCHMARK(QuantStepPopulation)->RangeMultiplier(4)->Range(4, 256);

void McGradientEstimate(benchmark::State& state) {
    GaussianSampler setup(6, 0);
    RealVector w_star(8), v(4), w(8);
    setup.fill(w_star);
    const double w_norm = norm(w_star);
    for (double& x : w_star) x /= w_norm;
    setup.fill(v);
    setup.fill(w);
    const Teacher teacher = Teacher::from_v(w_star, v);
    const auto samples = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        GaussianSampler stream(7, 1);
        benchmark::DoNotOptimize(mc_estimate_grad(w, teacher, stream, samples));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(samples) * state.iterations());
}
BENCHMARK(McGradientEstimate)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();

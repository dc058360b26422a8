#include <benchmark/benchmark.h>

#include "rcm/generator.hpp"
#include "rcm/semigroup.hpp"
#include "rcm/variance.hpp"
#include "rcm/walker.hpp"

using namespace rcm;

static void BM_SampleEnvironment(benchmark::State& state) {
    LatticeSpec spec(3, int(state.range(0)));
    auto law = ConductanceLaw::two_point(2.0, 0.5);
    std::uint64_t replica = 0;
    for (auto _ : state) {
        Environment env = sample_environment(law, spec, 1, replica++);
        benchmark::DoNotOptimize(env.conductances().data());
    }
    state.SetItemsProcessed(state.iterations() * spec.n_edges());
}
BENCHMARK(BM_SampleEnvironment)->Arg(16)->Arg(32)->Arg(48);

static void BM_ApplyGenerator(benchmark::State& state) {
    LatticeSpec spec(3, int(state.range(0)));
    auto law = ConductanceLaw::two_point(2.0, 0.5);
    Environment env = sample_environment(law, spec, 1);
    std::vector<double> v(spec.n_sites(), 0.0), out(spec.n_sites());
    v[0] = 1.0;
    for (auto _ : state) {
        apply_generator(env, v, out);
        benchmark::DoNotOptimize(out.data());
        std::swap(v, out);
    }
    state.SetItemsProcessed(state.iterations() * spec.n_sites() * 2 * spec.dim());
}
BENCHMARK(BM_ApplyGenerator)->Arg(16)->Arg(32)->Arg(48);

static void BM_Semigroup(benchmark::State& state) {
    LatticeSpec spec(2, 64);
    auto law = ConductanceLaw::two_point(2.0, 0.5);
    Environment env = sample_environment(law, spec, 1);
    double t = double(state.range(0));
    for (auto _ : state) {
        ProbVector p = semigroup(env, t, delta_at(spec, 0));
        benchmark::DoNotOptimize(p.p.data());
    }
}
BENCHMARK(BM_Semigroup)->Arg(4)->Arg(16)->Arg(64);

static void BM_WalkerEndpoint(benchmark::State& state) {
    LatticeSpec spec(2, 64);
    auto law = ConductanceLaw::two_point(3.0, 0.5);
    Environment env = sample_environment(law, spec, 1);
    std::uint64_t k = 0;
    for (auto _ : state) {
        Site s = simulate_endpoint(env, 8.0, RngStream(9, k++, 0));
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_WalkerEndpoint);

static void BM_ExactFtProfile(benchmark::State& state) {
    LatticeSpec spec(3, int(state.range(0)));
    auto law = ConductanceLaw::two_point(2.0, 0.5);
    Environment env = sample_environment(law, spec, 1);
    LocalFunction f1 = make_observable("F1", 3, law);
    std::vector<double> times{4.0, 8.0, 16.0, 32.0, 48.0};
    for (auto _ : state) {
        FtProfile profile = exact_ft_profile(env, f1, times);
        benchmark::DoNotOptimize(profile.ft0.data());
    }
}
BENCHMARK(BM_ExactFtProfile)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

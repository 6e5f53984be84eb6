// Serial reference vs OpenMP kernels. Run with --benchmark_filter to pick one.

#include <benchmark/benchmark.h>

#include "grouprand/finite_groups.hpp"
#include "grouprand/kernels.hpp"
#include "grouprand/sl2z.hpp"
#include "grouprand/stats.hpp"

namespace gr = grouprand;
namespace serial = grouprand::kernels::serial;
namespace parallel = grouprand::kernels::parallel;

namespace {

template <bool Parallel>
void count_sl2z(benchmark::State& state)
{
    const std::int64_t bound = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? parallel::count_sl2z(bound) : serial::count_sl2z(bound));
}

template <bool Parallel>
void visible_points(benchmark::State& state)
{
    const std::int64_t radius = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? parallel::visible_points(radius) : serial::visible_points(radius));
}

template <bool Parallel>
void fancy_batch(benchmark::State& state)
{
    const gr::FancySampler sampler(static_cast<double>(state.range(0)), 0.01);
    const auto draw = [&](gr::RandomStream& s) { return sampler(s); };
    const std::size_t count = 20'000;
    for (auto _ : state) {
        auto out = Parallel ? parallel::sample_batch<gr::Mat2Z>(1, count, draw)
                            : serial::sample_batch<gr::Mat2Z>(1, count, draw);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * count));
}

template <bool Parallel>
void walk_tally(benchmark::State& state)
{
    const gr::PrimeField F(3);
    const auto support = gr::enumerate_sl(2, F);
    const gr::Tally<gr::FpMatrix, gr::FpMatrixHash> index(support);
    const auto draw = [&](gr::RandomStream& s) { return gr::expander_walk_sample(2, F, 50, s); };
    const auto idx = [&](const gr::FpMatrix& m) { return index.index_of(m); };
    const std::size_t count = 50'000;
    for (auto _ : state) {
        auto c = Parallel ? parallel::tally(1, count, support.size(), draw, idx)
                          : serial::tally(1, count, support.size(), draw, idx);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * count));
}

} // namespace

BENCHMARK(count_sl2z<false>)->Arg(40'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(count_sl2z<true>)->Arg(40'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(visible_points<false>)->Arg(1000)->Arg(10'000)->Unit(benchmark::kMillisecond);
BENCHMARK(visible_points<true>)->Arg(1000)->Arg(10'000)->Unit(benchmark::kMillisecond);
BENCHMARK(fancy_batch<false>)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(fancy_batch<true>)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(walk_tally<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(walk_tally<true>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

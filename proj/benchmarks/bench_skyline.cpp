#include <benchmark/benchmark.h>

#include <random>
#include <unordered_set>
#include <vector>

#include "iocpqa/skyline.hpp"

using namespace iocpqa::skyline;

namespace {

constexpr std::int64_t kSpan = 1'000'000'000;

std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n) {
    std::unordered_set<std::int64_t> xs;
    std::vector<Point> pts;
    while (pts.size() < n) {
        const auto x = static_cast<std::int64_t>(rng() % kSpan);
        if (xs.insert(x).second) pts.push_back({x, static_cast<std::int64_t>(rng() % kSpan)});
    }
    return pts;
}

}  // namespace

static void BM_Build(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto pts = random_points(rng, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Index::build(IndexConfig{}, pts));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Build)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_Query3(benchmark::State& state) {
    std::mt19937_64 rng(2);
    auto idx = Index::build(IndexConfig{}, random_points(rng, static_cast<std::size_t>(state.range(0))));
    idx.io()->reset();
    std::size_t reported = 0;
    for (auto _ : state) {
        auto lo = static_cast<std::int64_t>(rng() % kSpan), hi = static_cast<std::int64_t>(rng() % kSpan);
        if (lo > hi) std::swap(lo, hi);
        reported += idx.query3({lo, hi, static_cast<std::int64_t>(rng() % kSpan)}).size();
    }
    state.counters["blocks_per_query"] =
        benchmark::Counter(static_cast<double>(idx.io()->snapshot().total()), benchmark::Counter::kAvgIterations);
    state.counters["reported"] = benchmark::Counter(static_cast<double>(reported), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_Query3)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_InsertRemove(benchmark::State& state) {
    std::mt19937_64 rng(3);
    auto idx = Index::build(IndexConfig{}, random_points(rng, static_cast<std::size_t>(state.range(0))));
    idx.io()->reset();
    for (auto _ : state) {
        // x values above kSpan never collide with stored points.
        const Point p{kSpan + static_cast<std::int64_t>(rng() % kSpan), static_cast<std::int64_t>(rng() % kSpan)};
        idx.insert(p);
        idx.remove(p);
    }
    state.counters["blocks_per_update"] =
        benchmark::Counter(static_cast<double>(idx.io()->snapshot().total()) / 2, benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_InsertRemove)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_ReportAll(benchmark::State& state) {
    std::mt19937_64 rng(4);
    auto idx = Index::build(IndexConfig{}, random_points(rng, static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(idx.report_all());
}
BENCHMARK(BM_ReportAll)->Arg(10000);

BENCHMARK_MAIN();

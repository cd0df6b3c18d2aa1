#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "iocpqa/cpqa.hpp"

using namespace iocpqa;
using Key = std::int64_t;
using Q = Queue<Key>;

namespace {

ContextPtr make_ctx(std::size_t b) { return Context::make({128, std::size_t{1} << 24, b}); }

void report_blocks(benchmark::State& state, const ContextPtr& ctx) {
    const auto c = ctx->io()->snapshot();
    state.counters["blocks_per_op"] =
        benchmark::Counter(static_cast<double>(c.total()), benchmark::Counter::kAvgIterations);
}

Q ascending(const ContextPtr& ctx, std::size_t n, Key start = 0) {
    Q q = Q::empty(ctx);
    for (std::size_t i = 0; i < n; ++i) q = insert_and_attrite(q, start + static_cast<Key>(i));
    return q;
}

}  // namespace

static void BM_InsertAndAttrite(benchmark::State& state) {
    auto ctx = make_ctx(static_cast<std::size_t>(state.range(0)));
    std::mt19937_64 rng(1);
    Q q = Q::empty(ctx);
    Key next = 0;
    for (auto _ : state) {
        Key e = next += 1 + static_cast<Key>(rng() % 3);
        if (rng() % 50 == 0) e -= static_cast<Key>(rng() % 100);
        q = insert_and_attrite(q, e);
        benchmark::DoNotOptimize(q);
    }
    report_blocks(state, ctx);
}
BENCHMARK(BM_InsertAndAttrite)->Arg(8)->Arg(32)->Arg(128);

static void BM_DeleteMin(benchmark::State& state) {
    const auto b = static_cast<std::size_t>(state.range(0));
    auto ctx = make_ctx(b);
    const Q full = ascending(ctx, 1 << 16);
    ctx->io()->reset();
    Q q = full;
    for (auto _ : state) {
        if (q.is_empty()) q = full;
        q = delete_min(q).second;
        benchmark::DoNotOptimize(q);
    }
    report_blocks(state, ctx);
}
BENCHMARK(BM_DeleteMin)->Arg(8)->Arg(32)->Arg(128);

static void BM_CatenateAndAttrite(benchmark::State& state) {
    const auto b = static_cast<std::size_t>(state.range(0));
    auto ctx = make_ctx(b);
    constexpr std::size_t kPool = 64;
    std::vector<Q> pool;
    std::vector<Key> band;
    for (std::size_t i = 0; i < kPool; ++i) {
        band.push_back(static_cast<Key>(i) << 32);
        pool.push_back(ascending(ctx, 4 * b, band.back()));
    }
    ctx->io()->reset();
    std::mt19937_64 rng(2);
    Key top = static_cast<Key>(kPool) << 32;
    std::uint64_t blocks = 0;
    for (auto _ : state) {
        std::size_t a = rng() % kPool, c = rng() % kPool;
        if (a == c) c = (c + 1) % kPool;
        if (band[c] < band[a]) std::swap(a, c);
        const auto before = ctx->io()->snapshot().total();
        pool[a] = catenate_and_attrite(pool[a], pool[c]);
        blocks += ctx->io()->snapshot().total() - before;
        // Refill the emptied slot outside the measurement.
        state.PauseTiming();
        band[c] = top += Key{1} << 32;
        pool[c] = ascending(ctx, 1 + rng() % (4 * b), band[c]);
        state.ResumeTiming();
    }
    state.counters["blocks_per_op"] = benchmark::Counter(static_cast<double>(blocks), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_CatenateAndAttrite)->Arg(8)->Arg(32)->Arg(128);

static void BM_ConcatSequence(benchmark::State& state) {
    auto ctx = make_ctx(16);
    std::vector<Q> qs;
    for (int i = 0; i < 8; ++i) {
        Q q = ascending(ctx, 500, static_cast<Key>(i) * 400);
        while (delta(q) < 2 && top_level_records(q) > 1) q = bias(q);
        qs.push_back(q);
    }
    blockio::PinGuard pins(ctx->io(), {});
    for (const auto& q : qs)
        for (auto h : critical_handles(q)) pins.add(h);
    ctx->io()->reset();
    for (auto _ : state) benchmark::DoNotOptimize(concat_sequence(qs));
    report_blocks(state, ctx);
}
BENCHMARK(BM_ConcatSequence);

BENCHMARK_MAIN();

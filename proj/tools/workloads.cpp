#include "workloads.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>
#include <utility>
#include <vector>

#include "iocpqa/cpqa.hpp"

namespace iocpqa::tools {

namespace {

constexpr std::int64_t kBand = 1'000'000'000;

double fit_slope(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(pts.size());
    const double den = m * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (m * sxy - sx * sy) / den;
}

}  // namespace

AmortizedResult amortized_workload(std::size_t n, std::size_t b, std::size_t B, std::uint64_t seed,
                                   std::size_t pool) {
    using Q = Queue<std::int64_t>;
    auto ctx = Context::make({B, std::max<std::size_t>(B, std::size_t{1} << 24), b});
    auto* io = ctx->io();
    std::mt19937_64 rng(seed);
    std::vector<Q> qs(pool, Q::empty(ctx));
    std::vector<std::int64_t> next(pool);
    std::int64_t band = 0;
    for (auto& v : next) v = band += kBand;

    AmortizedResult res;
    res.ops = n;
    const std::size_t every = std::max<std::size_t>(1, n / 20);
    std::vector<std::pair<double, double>> curve;
    for (std::size_t i = 1; i <= n; ++i) {
        const auto before = io->snapshot().total();
        const std::size_t a = rng() % pool;
        if (rng() % 4 != 0) {
            std::int64_t e = next[a] += 1 + static_cast<std::int64_t>(rng() % 3);
            if (rng() % 50 == 0) e -= static_cast<std::int64_t>(rng() % 100);
            qs[a] = insert_and_attrite(qs[a], e);
        } else {
            std::size_t c = rng() % pool;
            if (c == a) c = (c + 1) % pool;
            Q x = qs[a], y = qs[c];
            if (next[c] < next[a]) std::swap(x, y);
            qs[a] = catenate_and_attrite(x, y);
            next[a] = std::max(next[a], next[c]);
            qs[c] = Q::empty(ctx);
            next[c] = band += kBand;
        }
        res.max_op = std::max<std::uint64_t>(res.max_op, io->snapshot().total() - before);
        if (i % every == 0) curve.emplace_back(static_cast<double>(i), static_cast<double>(io->snapshot().total()));
    }
    const auto snap = io->snapshot();
    res.reads = snap.reads;
    res.writes = snap.writes;
    res.slope = fit_slope(curve);
    return res;
}

SkylineResult skyline_workload(std::size_t n, const skyline::IndexConfig& cfg, std::uint64_t seed,
                               std::size_t queries, std::size_t updates) {
    using skyline::Point;
    std::mt19937_64 rng(seed);
    const std::int64_t span = static_cast<std::int64_t>(std::max<std::size_t>(n, 1)) * 1000;
    std::unordered_set<std::int64_t> xs;
    std::vector<Point> pts;
    while (pts.size() < n) {
        const std::int64_t x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span));
        if (xs.insert(x).second) pts.push_back({x, static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span))});
    }
    auto idx = skyline::Index::build(cfg, pts);
    auto* io = idx.io();

    SkylineResult res;
    double qsum = 0, usum = 0, tsum = 0;
    const std::size_t steps = queries + updates;
    std::size_t q_left = queries, u_left = updates;
    for (std::size_t s = 0; s < steps; ++s) {
        const bool query = u_left == 0 || (q_left > 0 && rng() % steps < queries);
        const auto before = io->snapshot().total();
        if (query) {
            std::int64_t lo = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span));
            std::int64_t hi = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span));
            if (lo > hi) std::swap(lo, hi);
            const std::int64_t y = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span));
            tsum += static_cast<double>(idx.query3({lo, hi, y}).size());
            qsum += static_cast<double>(io->snapshot().total() - before);
            --q_left;
            ++res.queries;
        } else {
            if (!pts.empty() && rng() % 2 == 0) {
                const std::size_t j = rng() % pts.size();
                idx.remove(pts[j]);
                xs.erase(pts[j].x);
                pts[j] = pts.back();
                pts.pop_back();
            } else {
                std::int64_t x;
                do {
                    x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span));
                } while (xs.count(x));
                xs.insert(x);
                const Point p{x, static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span))};
                idx.insert(p);
                pts.push_back(p);
            }
            usum += static_cast<double>(io->snapshot().total() - before);
            --u_left;
            ++res.updates;
        }
    }
    if (res.queries) {
        res.mean_query_blocks = qsum / static_cast<double>(res.queries);
        res.mean_reported = tsum / static_cast<double>(res.queries);
    }
    if (res.updates) res.mean_update_blocks = usum / static_cast<double>(res.updates);
    return res;
}

}  // namespace iocpqa::tools

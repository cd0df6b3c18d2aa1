#include "iocpqa/oracle.hpp"

#include <algorithm>
#include <random>

namespace iocpqa::oracle {

std::vector<Key> naive_catenate_and_attrite(const std::vector<Key>& l1, const std::vector<Key>& l2) {
    if (l2.empty()) return l1;
    std::vector<Key> out;
    for (Key x : l1)
        if (x < l2.front()) out.push_back(x);
    out.insert(out.end(), l2.begin(), l2.end());
    return out;
}

namespace {

bool dominates(const Pt& p, const Pt& q) { return p.x > q.x && p.y > q.y; }

}  // namespace

std::vector<Pt> naive_maxima(const std::vector<Pt>& points) {
    std::vector<Pt> out;
    for (const Pt& q : points) {
        bool dominated = false;
        for (const Pt& p : points)
            if (dominates(p, q)) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(q);
    }
    std::sort(out.begin(), out.end(), [](const Pt& a, const Pt& b) { return a.x < b.x; });
    return out;
}

std::vector<Pt> naive_query3(const std::vector<Pt>& points, std::int64_t x_lo, std::int64_t x_hi, std::int64_t y_lo) {
    std::vector<Pt> in;
    for (const Pt& p : points)
        if (p.x >= x_lo && p.x <= x_hi && p.y >= y_lo) in.push_back(p);
    return naive_maxima(in);
}

std::vector<Op> gen_ops(std::uint64_t seed, std::size_t n, std::size_t pool_size) {
    std::mt19937_64 rng(seed);
    std::vector<Op> out;
    out.reserve(n);
    if (pool_size == 0) return out;
    Key next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Op op;
        op.a = rng() % pool_size;
        op.c = rng() % pool_size;
        const auto roll = rng() % 100;
        if (roll < 45) {
            op.kind = OpKind::Insert;
            next += 1 + static_cast<Key>(rng() % 4);
            op.key = rng() % 16 == 0 ? next - static_cast<Key>(rng() % 64) : next;
        } else if (roll < 70) {
            op.kind = OpKind::Catenate;
        } else if (roll < 90) {
            op.kind = OpKind::DeleteMin;
        } else if (roll < 98) {
            op.kind = OpKind::FindMin;
        } else {
            op.kind = OpKind::Drain;
        }
        out.push_back(op);
    }
    return out;
}

}  // namespace iocpqa::oracle

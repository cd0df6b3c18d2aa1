#pragma once

// Brute-force references for equivalence tests. Deliberately independent of
// the queue and index code: nothing here includes or calls into them.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace iocpqa::oracle {

using Key = std::int64_t;

/// {x in l1 | x < min(l2)} followed by l2; l1 unchanged when l2 is empty.
std::vector<Key> naive_catenate_and_attrite(const std::vector<Key>& l1, const std::vector<Key>& l2);

struct Pt {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const Pt&, const Pt&) = default;
};

/// Points not strictly dominated in both coordinates, by increasing x. O(n^2).
std::vector<Pt> naive_maxima(const std::vector<Pt>& points);

/// naive_maxima of the points in [x_lo, x_hi] x [y_lo, +inf).
std::vector<Pt> naive_query3(const std::vector<Pt>& points, std::int64_t x_lo, std::int64_t x_hi, std::int64_t y_lo);

enum class OpKind { Insert, Catenate, DeleteMin, FindMin, Drain };

/// One step over a pool of queues. Insert: pool[a] <- insert(pool[a], key).
/// Catenate: pool[a] <- catenate(pool[a], pool[c]). DeleteMin, FindMin and
/// Drain act on pool[a]; on an empty queue they are expected to fail.
struct Op {
    OpKind kind = OpKind::Insert;
    std::size_t a = 0;
    std::size_t c = 0;
    Key key = 0;

    friend bool operator==(const Op&, const Op&) = default;
};

/// Deterministic trace of n steps over pool_size queues. Keys mostly grow,
/// with occasional smaller keys so insertions attrite.
std::vector<Op> gen_ops(std::uint64_t seed, std::size_t n, std::size_t pool_size);

}  // namespace iocpqa::oracle

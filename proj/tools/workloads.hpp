#pragma once

#include <cstddef>
#include <cstdint>

#include "iocpqa/skyline.hpp"

namespace iocpqa::tools {

struct AmortizedResult {
    std::size_t ops = 0;
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t max_op = 0;  // most blocks charged by a single operation
    double slope = 0.0;        // least-squares blocks per operation
};

/**
 * n insert_and_attrite / catenate_and_attrite steps over a pool of queues
 * with buffer parameter b and block size B. Each slot draws keys from its
 * own increasing band and catenations put the lower band first, so queues
 * grow through insertions; one insertion in 50 dips below the slot's last
 * key and attrites. The catenated-from slot is emptied afterwards.
 */
AmortizedResult amortized_workload(std::size_t n, std::size_t b, std::size_t B, std::uint64_t seed,
                                   std::size_t pool = 64);

struct SkylineResult {
    std::size_t queries = 0;
    std::size_t updates = 0;
    double mean_query_blocks = 0.0;
    double mean_update_blocks = 0.0;
    double mean_reported = 0.0;
};

/// Builds an index over n random points with distinct x, then interleaves
/// `queries` random 3-sided queries with `updates` random inserts/deletes.
SkylineResult skyline_workload(std::size_t n, const skyline::IndexConfig& cfg, std::uint64_t seed,
                               std::size_t queries, std::size_t updates);

}  // namespace iocpqa::tools

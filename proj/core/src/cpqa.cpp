#include "iocpqa/cpqa.hpp"

namespace iocpqa {

namespace {
std::atomic<std::uint64_t> g_bias_calls{0};
std::atomic<int> g_bias_depth{0};
}  // namespace

BiasStats bias_stats() noexcept {
    return {g_bias_calls.load(std::memory_order_relaxed), g_bias_depth.load(std::memory_order_relaxed)};
}

void reset_bias_stats() noexcept {
    g_bias_calls.store(0);
    g_bias_depth.store(0);
}

namespace detail {
void note_bias(int depth) noexcept {
    g_bias_calls.fetch_add(1, std::memory_order_relaxed);
    int cur = g_bias_depth.load(std::memory_order_relaxed);
    while (depth > cur && !g_bias_depth.compare_exchange_weak(cur, depth, std::memory_order_relaxed)) {
    }
}
}  // namespace detail

}  // namespace iocpqa

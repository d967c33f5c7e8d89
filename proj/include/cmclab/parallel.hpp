#pragma once
// Minimal chunked parallel_for.  Thread count comes from CMC_LAB_THREADS
// (default: hardware concurrency, capped).  Work is split into fixed
// contiguous chunks so results never depend on scheduling order.

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace cmclab {

inline unsigned thread_count() {
    if (const char* env = std::getenv("CMC_LAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return unsigned(std::min<long>(v, 64));
    }
    unsigned hc = std::thread::hardware_concurrency();
    return std::clamp(hc, 1u, 16u);
}

// Calls fn(i) for i in [0, n).  fn must be safe to run concurrently for
// distinct i (writes to disjoint slots).
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned nt = std::min<std::size_t>(thread_count(), n ? n : 1);
    if (nt <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::size_t chunk = (n + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace cmclab

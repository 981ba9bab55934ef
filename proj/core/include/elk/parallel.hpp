#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace elk {

// Internal parallelism is capped by the ELK_THREADS environment variable.
// Default is sequential execution so identical scenarios produce bit-identical
// outputs without any scheduling dependence; parallel workers write disjoint
// index ranges, which keeps results deterministic when threads are enabled.

inline int thread_cap_from_env() {
    const char* env = std::getenv("ELK_THREADS");
    if (!env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    const long hw = std::max(1u, std::thread::hardware_concurrency());
    if (v <= 1) return 1;
    return static_cast<int>(std::min(v, hw));
}

// Apply fn(begin, end) over [0, n) split into contiguous chunks.
inline void parallel_for(size_t n, int threads, const std::function<void(size_t, size_t)>& fn) {
    if (threads <= 1 || n < 64) {
        fn(0, n);
        return;
    }
    const size_t workers = std::min<size_t>(static_cast<size_t>(threads), n);
    const size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
        const size_t lo = w * chunk;
        const size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(fn, lo, hi);
    }
    for (auto& t : pool) t.join();
}

} // namespace elk

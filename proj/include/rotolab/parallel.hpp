#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rotolab {

inline int& worker_threads() {
    static int n = 1;
    return n;
}

inline void set_worker_threads(int n) { worker_threads() = n < 1 ? 1 : n; }

// Static chunking; fn(thread_index, begin, end). Deterministic as long as the
// caller merges per-thread results in thread-index order.
inline void parallel_chunks(size_t count, const std::function<void(int, size_t, size_t)>& fn) {
    int nt = worker_threads();
    if (nt <= 1 || count < 2048) {
        fn(0, 0, count);
        return;
    }
    std::vector<std::thread> pool;
    size_t chunk = (count + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        size_t b = t * chunk;
        size_t e = b + chunk < count ? b + chunk : count;
        if (b >= e) break;
        pool.emplace_back(fn, t, b, e);
    }
    for (auto& th : pool) th.join();
}

} // namespace rotolab

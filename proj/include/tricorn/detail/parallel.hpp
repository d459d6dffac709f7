#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tricorn::detail {

inline int default_thread_count() {
    if (const char* env = std::getenv("TRICORN_LAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Chunked parallel loop over [0, n).  Workers pull chunk indices from an
// atomic counter; fn(i) must write only to disjoint state per i, so the
// result is identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, int threads = 0, std::size_t chunk = 64) {
    if (threads <= 0) threads = default_thread_count();
    if (threads == 1 || n <= chunk) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t begin = next.fetch_add(chunk);
            if (begin >= n) return;
            std::size_t end = begin + chunk < n ? begin + chunk : n;
            for (std::size_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads) - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace tricorn::detail

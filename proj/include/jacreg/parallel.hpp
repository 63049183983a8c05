#pragma once

// Minimal deterministic work partitioning.
//
// Work is split into fixed-size chunks whose boundaries depend only on the
// problem size, never on the thread count.  Threads pull chunks from an
// atomic counter and write results into caller-owned per-chunk or per-item
// slots, so outputs are bit-identical for any --threads value.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace jacreg {

inline int& thread_count_ref() {
    static int count = [] {
        if (const char* env = std::getenv("JR_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) return v;
        }
        unsigned hc = std::thread::hardware_concurrency();
        return hc >= 1 ? static_cast<int>(hc) : 1;
    }();
    return count;
}

inline int thread_count() { return thread_count_ref(); }

inline void set_thread_count(int n) {
    thread_count_ref() = n >= 1 ? n : 1;
}

// Runs body(begin, end) over [0, n) in fixed chunks of `chunk` items.
// The chunk grid is a pure function of n and chunk, so any per-chunk
// output the body writes is independent of the executing thread count.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t chunk, Body body) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    const int workers =
        static_cast<int>(std::min<std::size_t>(thread_count(), n_chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            body(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            body(c * chunk, std::min(n, (c + 1) * chunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

}  // namespace jacreg

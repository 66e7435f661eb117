#ifndef ISUMAP_THREADS_HPP
#define ISUMAP_THREADS_HPP

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace isumap {

// Worker count: explicit request > ISUMAP_THREADS env cap > hardware.
// The env var is re-read on every call so tests can flip it at runtime.
inline unsigned worker_count(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ISUMAP_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [0, count) across workers. Items must be independent;
// output determinism is the caller's contract (disjoint writes per item).
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    unsigned t = worker_count(threads);
    if (t <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(t - 1);
    for (unsigned w = 1; w < t; ++w) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

}  // namespace isumap

#endif

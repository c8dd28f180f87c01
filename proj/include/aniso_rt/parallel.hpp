#ifndef ANISO_RT_PARALLEL_HPP
#define ANISO_RT_PARALLEL_HPP

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace aniso_rt {

// Thread cap: ANISO_RT_THREADS if set, hardware concurrency otherwise.
inline int thread_cap() {
    if (const char* env = std::getenv("ANISO_RT_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, n); results must go to pre-sized slots so the
// outcome is deterministic regardless of the thread count.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    int threads = std::min(thread_cap(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([=, &fn]() {
            for (int i = t; i < n; i += threads) fn(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace aniso_rt

#endif

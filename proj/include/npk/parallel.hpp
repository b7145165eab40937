#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace npk {

/// Worker count: hardware concurrency capped by the NPK_THREADS environment
/// variable (NPK_THREADS=1 forces serial execution).
inline int max_threads() {
    int n = int(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (n > 8) n = 8;
    if (const char* env = std::getenv("NPK_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

/// Runs body(i) for i in [0, n). Work is chunked across threads; callers
/// must write results into per-index slots so the outcome is independent of
/// the chunking.
template <typename F>
void parallel_for(int n, F&& body) {
    const int workers = std::min(max_threads(), n > 0 ? n : 1);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &body] {
            for (int i = begin; i < end; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace npk

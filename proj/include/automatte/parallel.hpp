#ifndef AUTOMATTE_PARALLEL_HPP
#define AUTOMATTE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

// Deterministic data parallelism. Work is split into fixed-size chunks whose
// boundaries depend only on the problem size, never on the worker count, so a
// kernel that keeps its floating point order fixed inside each chunk produces
// bit-identical results at every thread count.

namespace automatte {

namespace detail {
inline std::atomic<int>& thread_count_override() {
    static std::atomic<int> n{0};
    return n;
}
} // namespace detail

inline int thread_count() {
    int n = detail::thread_count_override().load();
    if (n >= 1) return n;
    if (const char* env = std::getenv("AUTOMATTE_THREADS")) {
        int e = std::atoi(env);
        if (e >= 1) return e;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Overrides AUTOMATTE_THREADS; n < 1 restores the default.
inline void set_thread_count(int n) { detail::thread_count_override().store(n); }

// f(lo, hi) over [0, n) in chunks of `chunk` elements.
template <class F>
void parallel_chunks(std::int64_t n, std::int64_t chunk, F&& f) {
    if (n <= 0) return;
    if (chunk < 1) chunk = 1;
    const int chunk_count = static_cast<int>((n + chunk - 1) / chunk);
    const int workers = std::min(thread_count(), chunk_count);
    if (workers <= 1) {
        for (int i = 0; i < chunk_count; ++i) {
            std::int64_t lo = static_cast<std::int64_t>(i) * chunk;
            f(lo, std::min<std::int64_t>(n, lo + chunk));
        }
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto drain = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= chunk_count) break;
            std::int64_t lo = static_cast<std::int64_t>(i) * chunk;
            try {
                f(lo, std::min<std::int64_t>(n, lo + chunk));
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> helpers;
    helpers.reserve(workers - 1);
    for (int t = 0; t < workers - 1; ++t) helpers.emplace_back(drain);
    drain();
    for (auto& h : helpers) h.join();
    if (error) std::rethrow_exception(error);
}

// Row parallelism for image kernels; 16-row chunks.
template <class F>
void parallel_rows(int height, F&& f) {
    parallel_chunks(height, 16, [&](std::int64_t lo, std::int64_t hi) {
        f(static_cast<int>(lo), static_cast<int>(hi));
    });
}

} // namespace automatte

#endif

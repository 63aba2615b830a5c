#pragma once

#include <cstdlib>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

namespace bose2d {

// Parallelism cap: BOSE2D_THREADS env var, else hardware concurrency.
inline std::size_t thread_cap() {
    if (const char* env = std::getenv("BOSE2D_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<std::size_t>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Chunked parallel map-reduce over [0, n). The chunk layout depends only on
// n and grain, and partial sums are reduced in chunk order, so the result is
// bit-identical for any thread count. `body(i)` must be pure.
// `grain` is the number of items one chunk should carry; use 1 for bodies
// that are themselves expensive.
template <class Body>
inline double parallel_sum(std::size_t n, const Body& body, std::size_t grain = 1024) {
    if (n == 0) return 0.0;
    if (grain < 1) grain = 1;
    const std::size_t nchunks = (n + grain - 1) / grain;
    std::size_t nt = std::min(thread_cap(), nchunks);
    if (nt <= 1) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += body(i);
        return s;
    }
    std::vector<double> partial(nchunks, 0.0);
    std::vector<std::thread> threads;
    threads.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        threads.emplace_back([&, t] {
            for (std::size_t c = t; c < nchunks; c += nt) {
                double s = 0.0;
                std::size_t lo = c * grain;
                std::size_t hi = std::min(n, lo + grain);
                for (std::size_t i = lo; i < hi; ++i) s += body(i);
                partial[c] = s;
            }
        });
    }
    for (auto& th : threads) th.join();
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace bose2d

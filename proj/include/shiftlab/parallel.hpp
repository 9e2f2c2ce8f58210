#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace shiftlab {

// Index-parallel loop over [0, n); jobs <= 1 runs inline. Work items must
// not share mutable state (all shiftlab values are immutable once built).
template <typename F>
void parallel_for(std::size_t n, std::size_t jobs, F&& body) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::size_t workers = std::min(jobs, n);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace shiftlab

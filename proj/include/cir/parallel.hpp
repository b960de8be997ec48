#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

#include "cir/errors.hpp"

namespace cir {

// Run body(i) for i in [0, count) across the given number of worker threads.
//
// Indices are split into contiguous blocks, one per worker, so each path index
// always maps to the same RNG stream and the same output slot regardless of
// worker count. Callers write results into preallocated slots and reduce
// sequentially afterwards; that is what makes runs with 1, 2, or 8 workers
// byte-identical.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
    if (workers == 0) throw ConfigInvalid("worker count must be at least 1");
    if (count == 0) return;
    if (workers == 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    const std::size_t n_workers = std::min<std::size_t>(workers, count);
    const std::size_t chunk = (count + n_workers - 1) / n_workers;

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_workers);
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace cir

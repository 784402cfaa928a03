#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ousv {

/// Run body(i) for i in [0, n) on `workers` threads, each owning a contiguous block.
/// The body must only write to per-index storage; callers reduce afterwards in index
/// order, which keeps results independent of the worker count.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t count = std::min<std::size_t>(workers, n);
    std::vector<std::exception_ptr> errors(count);
    {
        std::vector<std::jthread> threads;
        threads.reserve(count);
        for (std::size_t w = 0; w < count; ++w) {
            threads.emplace_back([&, w] {
                const std::size_t begin = n * w / count;
                const std::size_t end = n * (w + 1) / count;
                try {
                    for (std::size_t i = begin; i < end; ++i) body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace ousv

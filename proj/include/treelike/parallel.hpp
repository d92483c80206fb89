#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace treelike {

/// Runs body(i) for every i in [begin, end) on up to `workers` threads.
///
/// Each thread owns one contiguous index range. Callers must only write to
/// locations owned by i, which keeps the output independent of `workers`.
/// The first exception thrown by any worker is rethrown on the caller.
template <class Body>
void parallel_for(std::size_t begin, std::size_t end, std::size_t workers, Body&& body)
{
    if (end <= begin) return;
    const std::size_t count = end - begin;
    workers = std::clamp<std::size_t>(workers, 1, count);
    if (workers == 1) {
        for (std::size_t i = begin; i < end; ++i) body(i);
        return;
    }

    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = count / workers;
    const std::size_t extra = count % workers;
    std::size_t lo = begin;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t hi = lo + chunk + (w < extra ? 1 : 0);
        threads.emplace_back([&, w, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
        lo = hi;
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline std::size_t default_workers() noexcept
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace treelike

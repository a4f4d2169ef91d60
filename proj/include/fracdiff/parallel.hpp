#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fracdiff {

/// Evaluates f(i) for i in [0, n) on `threads` workers and returns the
/// results indexed by i. Work is split into contiguous blocks; the output
/// does not depend on the worker count as long as f(i) is a pure function
/// of i. The first exception thrown by any worker is rethrown.
template <class F>
std::vector<double> map_indexed(std::size_t n, unsigned threads, F&& f) {
    std::vector<double> out(n);
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) out[i] = f(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace fracdiff

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace coinknn {

/// Number of workers to use when the caller asks for 0 (machine parallelism, at least 1).
inline std::size_t default_thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

/**
 * Calls fn(i) for every i in [0, count) on up to `threads` workers.
 *
 * Tasks are claimed from a shared counter, so scheduling is arbitrary; callers must
 * write results into slots keyed by i and reduce them afterwards in index order.
 * The first exception thrown by any task is rethrown on the calling thread.
 */
template <class Fn>
void parallel_for_index(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads == 0) {
        threads = default_thread_count();
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed.store(true);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace coinknn

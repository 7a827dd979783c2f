#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace boxgas {

inline int default_workers()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Calls fn(i) for i in [0, count) on up to `workers` threads (0 = all cores).
// fn must only write to slot i of its outputs. The first exception thrown by
// any call is rethrown after every worker has joined.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn)
{
    if (workers <= 0)
        workers = default_workers();
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::scoped_lock lock(failure_lock);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace boxgas

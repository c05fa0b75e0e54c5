#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nemsizer::detail
{
    /// Calls fn(i) for i in [0, n) on up to `jobs` threads. Work is handed out
    /// by index, so results written to slot i do not depend on scheduling.
    /// The first exception thrown by any task is rethrown after all threads
    /// have joined.
    template <typename Fn>
    void
    parallel_for(std::size_t n, unsigned jobs, Fn&& fn)
    {
        unsigned const workers = static_cast<unsigned>(
            std::min<std::size_t>(n, std::max(1U, jobs)));
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
            {
                fn(i);
            }
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto work = [&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock{error_mutex};
                    if (!error)
                    {
                        error = std::current_exception();
                    }
                    next = n;
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w)
            {
                pool.emplace_back(work);
            }
        }
        if (error)
        {
            std::rethrow_exception(error);
        }
    }
}

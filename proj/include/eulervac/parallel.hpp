#pragma once

/**
 * @file parallel.hpp
 * @brief Index-ordered parallel map over independent sweep points. The
 * worker count is hardware concurrency capped by TOOLKIT_THREADS.
 */

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "eulervac/numerics.hpp"

namespace eulervac {

inline int worker_count()
{
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("TOOLKIT_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || cap < 1) throw Error(std::string("TOOLKIT_THREADS must be a positive integer, got '") + env + "'");
        n = std::min<long>(n, cap);
    }
    return n;
}

/// out[i] = fn(i) for i < n. The first exception thrown by any worker is
/// rethrown after all workers finish.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn, int workers = 0)
{
    std::vector<T> out(n);
    const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(workers > 0 ? workers : worker_count()));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex m;
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < w; ++j)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    out[i] = fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(m);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

} // namespace eulervac

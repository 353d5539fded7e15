#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hypojac {

/// Worker count: hardware concurrency, capped by HYPOJAC_THREADS when set.
inline unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HYPOJAC_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) {
                hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
            }
        } catch (...) {
        }
    }
    return hw;
}

/// Runs body(i) for i in [begin, end) over contiguous blocks. The first
/// exception thrown by any worker is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t begin, std::size_t end, Body&& body, std::size_t min_block = 1024) {
    if (end <= begin) {
        return;
    }
    const std::size_t count = end - begin;
    const std::size_t workers =
        std::min<std::size_t>(thread_budget(), std::max<std::size_t>(1, count / std::max<std::size_t>(1, min_block)));
    if (workers <= 1) {
        for (std::size_t i = begin; i < end; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = begin + w * block;
        const std::size_t hi = std::min(end, lo + block);
        if (lo >= hi) {
            break;
        }
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace hypojac

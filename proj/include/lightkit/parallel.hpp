// Copyright (C) 2026 lightkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lightkit {

inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, count) across `jobs` threads (0 = hardware default).
/// Work is split by contiguous index blocks; results must be position-keyed so
/// the outcome does not depend on the thread count.
inline void parallel_for(int64_t count, int jobs, const std::function<void(int64_t)>& fn) {
    const int workers = std::min<int64_t>(resolve_jobs(jobs), count > 0 ? count : 1);
    if (workers <= 1) {
        for (int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const int64_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int64_t begin = w * chunk;
        const int64_t end = std::min<int64_t>(begin + chunk, count);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (int64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lightkit

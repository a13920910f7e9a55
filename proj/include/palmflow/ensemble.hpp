#pragma once

#include "palmflow/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <string_view>
#include <thread>
#include <vector>

namespace palmflow {

// Fan n replicas out over `jobs` workers. Replica i always draws from
// Rng::stream(seed, experiment, i) and results land at index i, so output is
// identical for any worker count. Aggregate downstream in index order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int jobs, std::uint64_t seed,
                            std::string_view experiment, Fn&& fn, const T& init) {
    std::vector<T> out(n, init);
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = Rng::stream(seed, experiment, i);
            out[i] = fn(i, rng);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load(std::memory_order_relaxed)) return;
            try {
                Rng rng = Rng::stream(seed, experiment, i);
                out[i] = fn(i, rng);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (!err) err = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    std::size_t nw = std::min(static_cast<std::size_t>(jobs), n);
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int jobs, std::uint64_t seed,
                            std::string_view experiment, Fn&& fn) {
    return parallel_map<T>(n, jobs, seed, experiment, std::forward<Fn>(fn), T{});
}

} // namespace palmflow

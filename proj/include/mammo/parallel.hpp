#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mammo {

inline int resolve_threads(int requested)
{
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, n) on `threads` workers, dynamic chunking.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn)
{
    threads = resolve_threads(threads);
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next { 0 };
    std::exception_ptr err;
    std::mutex err_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mutex);
                if (!err)
                    err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

// Work items are produced by any worker but committed strictly in index
// order, so floating-point reductions come out bit-identical no matter how
// many workers ran. produce(i) builds a private partial result; commit(i)
// folds it into the shared accumulator.
template <typename Produce, typename Commit>
void ordered_reduce(std::size_t n, int threads, Produce&& produce, Commit&& commit)
{
    threads = resolve_threads(threads);
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            auto partial = produce(i);
            commit(i, partial);
        }
        return;
    }
    std::atomic<std::size_t> next { 0 };
    std::size_t commit_next = 0;
    std::mutex m;
    std::condition_variable cv;
    std::exception_ptr err;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                auto partial = produce(i);
                std::unique_lock<std::mutex> lk(m);
                cv.wait(lk, [&] { return commit_next == i || err; });
                if (err)
                    return;
                commit(i, partial);
                ++commit_next;
                cv.notify_all();
            } catch (...) {
                std::lock_guard<std::mutex> lk(m);
                if (!err)
                    err = std::current_exception();
                cv.notify_all();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

} // namespace mammo

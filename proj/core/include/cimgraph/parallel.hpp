#pragma once

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cimgraph {

inline unsigned resolve_parallelism(unsigned hint) {
    if (hint > 0) return hint;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs fn(begin, end) over contiguous chunks of [0, count) on `threads`
// workers. Work assignment depends only on (count, threads), so callers
// that write to disjoint, preallocated slots stay deterministic. The
// first worker exception is rethrown after all threads join.
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
    threads = resolve_parallelism(threads);
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        fn(std::size_t{0}, count);
        return;
    }
    if (threads > count) threads = static_cast<unsigned>(count);

    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&](std::size_t begin, std::size_t end) {
        try {
            fn(begin, end);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    const std::size_t base = count / threads;
    const std::size_t extra = count % threads;
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    std::size_t begin = 0;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t len = base + (t < extra ? 1 : 0);
        std::size_t end = begin + len;
        if (t + 1 == threads) {
            worker(begin, end);
        } else {
            pool.emplace_back(worker, begin, end);
        }
        begin = end;
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cimgraph

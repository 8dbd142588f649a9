#pragma once

#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace splatbake {

inline int hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

/// Run fn(begin, end, worker) over contiguous chunks of [0, count).
/// Chunk boundaries depend only on (count, threads), never on scheduling,
/// so workers writing disjoint slices produce identical output for any
/// thread count. The first worker exception is rethrown after join.
template <class F>
void parallel_chunks(size_t count, int threads, F&& fn) {
    if (threads < 1) threads = 1;
    size_t workers = std::min<size_t>(static_cast<size_t>(threads), count == 0 ? 1 : count);
    if (workers <= 1) {
        fn(size_t{0}, count, 0);
        return;
    }
    size_t base = count / workers;
    size_t rem = count % workers;
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    std::vector<std::exception_ptr> errors(workers);

    auto run = [&](size_t w) {
        size_t begin = w * base + std::min(w, rem);
        size_t end = begin + base + (w < rem ? 1 : 0);
        try {
            fn(begin, end, static_cast<int>(w));
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };

    for (size_t w = 1; w < workers; ++w)
        pool.emplace_back(run, w);
    run(0);
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace splatbake

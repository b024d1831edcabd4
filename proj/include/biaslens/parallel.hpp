#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace biaslens {

// Runs fn over [0, n) split into contiguous chunks, one per worker. Callers
// must write results keyed by item index (or reduce per chunk in chunk
// order) so the outcome is identical for every worker count.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t begin, std::size_t end)>& fn) {
    if (n == 0) return;
    const std::size_t nw = workers < 1 ? 1 : static_cast<std::size_t>(workers);
    if (nw <= 1 || n == 1) {
        fn(0, n);
        return;
    }
    const std::size_t chunks = nw < n ? nw : n;
    const std::size_t base = n / chunks;
    const std::size_t extra = n % chunks;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(chunks);
    std::size_t begin = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t len = base + (c < extra ? 1 : 0);
        const std::size_t end = begin + len;
        pool.emplace_back([&fn, &errors, c, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace biaslens

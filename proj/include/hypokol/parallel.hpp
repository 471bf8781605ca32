#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace hypokol {

// Strided loop over [0, n); each index must write only its own slot so results do not
// depend on the thread count.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    unsigned nth = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
    if (nth == 0) nth = 1;
    if (nth > n) nth = static_cast<unsigned>(n);
    if (nth <= 1) {
        for (std::size_t k = 0; k < n; ++k) body(k);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nth);
    for (unsigned w = 0; w < nth; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < n; k += nth) body(k);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace hypokol

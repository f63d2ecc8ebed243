// parallel.hpp — Order-preserving parallel map over an index range

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace qtt {

template <class T>
struct Outcome {
    std::optional<T> value;
    std::string error;  // non-empty when the evaluation threw

    bool ok() const noexcept { return value.has_value(); }
};

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Evaluates f(0..n-1) on up to `threads` workers (0 = hardware concurrency). Results keep
// index order; exceptions are captured per index so one failure does not lose the rest.
template <class F>
auto parallel_map(std::size_t n, F&& f, unsigned threads = 0) -> std::vector<Outcome<std::invoke_result_t<F&, std::size_t>>> {
    using T = std::invoke_result_t<F&, std::size_t>;
    std::vector<Outcome<T>> out(n);
    auto run = [&](std::size_t i) {
        try {
            out[i].value.emplace(f(i));
        } catch (const std::exception& e) {
            out[i].error = e.what();
        } catch (...) {
            out[i].error = "unknown error";
        }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) run(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) run(i);
        });
    for (auto& t : pool) t.join();
    return out;
}

} // namespace qtt

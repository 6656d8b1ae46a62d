#pragma once

// Grid fan-out used by sweeps, exclusion curves and heat maps.
//
// parallel_map evaluates f(0..n-1) and returns results in index order. The
// serial path is the reference implementation; the OpenMP path must produce
// bit-identical output because each task is a pure function of its index.

#include <cstddef>
#include <exception>
#include <optional>
#include <type_traits>
#include <vector>

#include <omp.h>

namespace cslprobe {

enum class Execution { Serial, OpenMP };

/// Worker count used when jobs <= 0.
inline int default_jobs() { return omp_get_max_threads(); }

template <class F>
auto serial_map(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    std::vector<std::invoke_result_t<F&, std::size_t>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
    return out;
}

template <class F>
auto parallel_map(std::size_t n, F&& f, Execution exec = Execution::OpenMP, int jobs = 0)
    -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    using T = std::invoke_result_t<F&, std::size_t>;
    if (exec == Execution::Serial || n < 2) return serial_map(n, f);

    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    const int threads = jobs > 0 ? jobs : default_jobs();
    const auto count = static_cast<long long>(n);

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long long i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            slots[idx].emplace(f(idx));
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }

    // Lowest failing index wins so the reported error does not depend on scheduling.
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace cslprobe

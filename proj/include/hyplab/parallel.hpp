#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// Data-parallel kernels with a serial reference path. Results are written to
// per-index slots and reduced in fixed order, so parallel output is bitwise
// identical to serial output regardless of thread count.
namespace hyplab {

enum class ExecMode { serial, parallel };

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         ExecMode mode = ExecMode::parallel) {
    if (mode == ExecMode::serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
#else
    for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn,
                            ExecMode mode = ExecMode::parallel) {
    std::vector<T> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = fn(i); }, mode);
    return out;
}

// Deterministic sum: slots computed in parallel, accumulated serially in
// index order (never an OpenMP reduction, whose order is schedule-dependent).
inline double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& fn,
                           ExecMode mode = ExecMode::parallel) {
    std::vector<double> slots = parallel_map<double>(n, fn, mode);
    double s = 0.0;
    for (double v : slots) s += v;
    return s;
}

}  // namespace hyplab

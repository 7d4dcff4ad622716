#pragma once

// Data-parallel kernels. Every sampled check in the library reduces to
// "evaluate f(i) for i in [0, n) and then reduce in index order". The
// OpenMP kernel and the serial reference produce bit-identical results
// because the per-index work is independent and the reduction is serial.

#include <cstddef>
#include <exception>
#include <vector>

namespace finsler {

enum class Exec { Serial, Parallel };

namespace parallel {

// Worker cap: FINSLER_ISO_THREADS if set and positive, else the OpenMP default.
int max_threads();

// Overrides the cap for the current process (0 restores the env/default).
void set_max_threads(int n);

}  // namespace parallel

namespace kernels {

namespace serial {

template <class T, class F>
std::vector<T> map_indices(std::size_t n, F&& f) {
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
    return out;
}

}  // namespace serial

namespace omp {

// Exceptions thrown by f are captured per index; the one with the smallest
// index is rethrown after the parallel region so errors are deterministic.
template <class T, class F>
std::vector<T> map_indices(std::size_t n, F&& f) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errors(n);
    const long long count = static_cast<long long>(n);
    const int threads = parallel::max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace omp

template <class T, class F>
std::vector<T> map_indices(Exec exec, std::size_t n, F&& f) {
    if (exec == Exec::Serial || n < 2) return serial::map_indices<T>(n, f);
    return omp::map_indices<T>(n, f);
}

}  // namespace kernels
}  // namespace finsler

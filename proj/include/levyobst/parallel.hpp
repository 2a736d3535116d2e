#pragma once

#include <cstdint>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace levyobst {

/// Run fn(i) for i in [0, n). workers == 1 runs the plain serial loop
/// (the reference path used in tests); workers == 0 uses the OpenMP
/// default team, workers > 1 forces that team size.
///
/// Every iteration must write only to its own slots; with that contract
/// the result is bit-identical for any worker count. Exceptions thrown by
/// iterations are captured and rethrown after the region.
template <class Fn>
void parallel_for(std::int64_t n, int workers, Fn&& fn) {
#ifdef _OPENMP
    if (workers != 1) {
        std::exception_ptr error = nullptr;
        auto guarded = [&](std::int64_t i) {
            try {
                fn(i);
            } catch (...) {
#pragma omp critical(levyobst_parallel_for_error)
                if (!error) error = std::current_exception();
            }
        };
        if (workers > 1) {
#pragma omp parallel for schedule(static) num_threads(workers)
            for (std::int64_t i = 0; i < n; ++i) guarded(i);
        } else {
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < n; ++i) guarded(i);
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#endif
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace levyobst

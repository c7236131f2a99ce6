#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bussgang {

/// Execution policy for the data-parallel kernels (sampling, Monte Carlo
/// batches, histogram fills). `serial` is the reference path; results are
/// required to be bit-identical between the two, so tests compare them and
/// the bench target times them.
enum class Exec { serial, parallel };

/// Runs fn(i) for i in [0, n). Work items must write only to their own slots;
/// the caller merges in index order afterwards.
template <class Fn>
void for_each_index(std::int64_t n, Exec exec, Fn&& fn) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i) {
            fn(i);
        }
    } else {
        for (std::int64_t i = 0; i < n; ++i) {
            fn(i);
        }
    }
}

}  // namespace bussgang

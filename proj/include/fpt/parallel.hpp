#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fpt {

/// Execution policy for the embarrassingly parallel scan kernels.  Every
/// kernel writes per-index results into preassigned slots (or reduces with
/// max, which is exact), so Serial and Parallel produce bit-identical output;
/// Serial is the reference the tests compare against.
enum class ExecPolicy { Serial, Parallel };

inline int worker_count(ExecPolicy policy) {
#ifdef _OPENMP
    return policy == ExecPolicy::Parallel ? omp_get_max_threads() : 1;
#else
    (void)policy;
    return 1;
#endif
}

template <class Fn>
void for_each_index(std::size_t n, ExecPolicy policy, Fn&& fn) {
#ifdef _OPENMP
    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            fn(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace fpt

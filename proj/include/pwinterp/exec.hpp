#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pwinterp {

// Hot loops over independent grid points come in two flavors: a serial
// reference used for testing, and an OpenMP-parallel version. Both fill
// disjoint output slots, so results are identical regardless of policy.
enum class ExecPolicy { serial, parallel };

template <class Body>
void parallel_for(std::size_t n, ExecPolicy policy, Body&& body) {
    if (policy == ExecPolicy::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            body(static_cast<std::size_t>(i));
        }
        return;
#endif
    }
    for (std::size_t i = 0; i < n; ++i) {
        body(i);
    }
}

}  // namespace pwinterp

#ifndef ADVSTREAM_PARALLEL_HPP
#define ADVSTREAM_PARALLEL_HPP

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace advstream {

/// Execution policy for the data-parallel kernels. Every parallel kernel has
/// a serial twin selected by this flag; the serial path is the reference the
/// tests compare against.
enum class Exec { Serial, Parallel };

inline int hardware_workers() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Index-space loop, optionally OpenMP-parallel. The body must be safe to run
/// for distinct indices concurrently.
template <class Fn>
void parallel_for(std::int64_t count, Exec exec, Fn&& body) {
    if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
#endif
    }
    for (std::int64_t i = 0; i < count; ++i) body(i);
}

/// Runs `count` independent trials and collects results by trial index, so
/// the output ordering (and any downstream file) is identical no matter how
/// many workers execute the pool.
template <class Result, class Fn>
std::vector<Result> run_trials(std::int64_t count, int workers, Fn&& trial) {
    std::vector<Result> results(static_cast<std::size_t>(count));
    if (workers > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (std::int64_t i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = trial(i);
        return results;
#endif
    }
    for (std::int64_t i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = trial(i);
    return results;
}

}  // namespace advstream

#endif

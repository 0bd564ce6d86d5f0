#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace bwflow {

/// Upper bound on worker threads; reads BWFLOW_THREADS, defaults to the OpenMP setting.
int max_threads();

/// Runs body(i) for i in [0, count) on OpenMP threads. The first exception
/// thrown by any iteration is rethrown on the calling thread once the loop
/// has finished.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    std::exception_ptr failure;
    std::mutex guard;
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (long long i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace bwflow

#include "bwflow/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace bwflow {

int max_threads() {
    int limit = omp_get_max_threads();
    if (const char* env = std::getenv("BWFLOW_THREADS")) {
        try {
            const int requested = std::stoi(env);
            if (requested > 0) limit = std::min(limit, requested);
        } catch (...) {
            // Unparsable values fall back to the OpenMP default.
        }
    }
    return std::max(1, limit);
}

}  // namespace bwflow

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string_view>

namespace bwflow {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Every random draw in the toolkit goes through this engine so that a seed
// fully determines the output on a given platform.
using Rng = std::mt19937_64;

/// Derives an independent stream from a root seed, a stream name and an index
/// (e.g. `substream(seed, "chain", 17)`). Partial re-runs that touch only one
/// named stream stay consistent with full runs.
Rng substream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

}  // namespace bwflow

#pragma once

// Graph-statistic MMD, the A.Ratio aggregate, and Valid/Unique/Novel counts.

#include "bwflow/graph.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bwflow {

enum class StatKind { degree, clustering, spectral };

std::string to_string(StatKind kind);
StatKind parse_stat(std::string_view name);

struct StatDescriptor {
    StatKind kind = StatKind::degree;
    std::size_t bins = 64;
    double lo = 0.0;
    double hi = 64.0;

    /// degree: 64 bins on [0, 64]; clustering: 100 bins on [0, 1];
    /// spectral: 100 bins on [0, 1] (eigenvalues divided by the largest).
    static StatDescriptor standard(StatKind kind);
};

/// The three statistics used for A.Ratio, in report order.
std::vector<StatDescriptor> standard_stats();

/// Normalized histogram of one statistic. Degrees are weighted row sums;
/// clustering uses the edges with weight above 0.5; spectral uses the
/// eigenvalues of the weighted Laplacian, all in bin 0 for an edgeless graph.
/// Values outside [lo, hi] land in the first or last bin.
Vector stat_histogram(const Graph& g, const StatDescriptor& d);

/// Histograms of a graph set, computed in parallel.
std::vector<Vector> stat_histograms(const std::vector<Graph>& graphs, const StatDescriptor& d);

/// Biased squared MMD with the kernel exp(−||a − b||² / (2σ²)), clamped at 0.
double mmd_sq(const std::vector<Vector>& a, const std::vector<Vector>& b, double sigma);

/// Median Euclidean distance over distinct pairs; 1 when that median is 0.
double median_bandwidth(const std::vector<Vector>& vectors);

namespace serial {
std::vector<Vector> stat_histograms(const std::vector<Graph>& graphs, const StatDescriptor& d);
double mmd_sq(const std::vector<Vector>& a, const std::vector<Vector>& b, double sigma);
}  // namespace serial

/// Floor shared by the numerator and denominator of every ratio.
inline constexpr double kMmdFloor = 1e-12;

struct StatRatio {
    std::string stat;
    double sigma = 1.0;
    double mmd_gen_test = 0.0;
    double mmd_train_test = 0.0;
    double ratio = 0.0;
};

struct RatioReport {
    std::vector<StatRatio> per_stat;
    double a_ratio = 0.0;  // mean of per_stat ratios
};

/// Per statistic: ratio = max(MMD²(gen, test), floor) / max(MMD²(train, test), floor)
/// with σ = median_bandwidth(train ∪ test).
RatioReport a_ratio(const std::vector<Graph>& gen, const std::vector<Graph>& test,
                    const std::vector<Graph>& train, const std::vector<StatDescriptor>& stats);

enum class Validity { is_connected, is_tree, always_true };

std::string to_string(Validity v);
Validity parse_validity(std::string_view name);

/// Connectivity on edges with weight above 0.5; the empty graph is not connected.
bool is_connected(const Graph& g);
/// Connected with exactly n − 1 edges.
bool is_tree(const Graph& g);
bool is_valid(const Graph& g, Validity v);

/// Weisfeiler–Lehman digest (3 refinement rounds) of the thresholded graph
/// with initial labels (degree, feature argmax). Invariant under node
/// relabeling; distinct graphs may collide.
std::uint64_t wl_hash(const Graph& g, int rounds = 3);

struct VunResult {
    double valid = 0.0;   // percentages in [0, 100]
    double unique = 0.0;
    double novel = 0.0;
    double vun = 0.0;     // valid, first of its hash in gen, and absent from train
};

VunResult vun(const std::vector<Graph>& gen, const std::vector<Graph>& train, Validity validity);

struct EvalReport {
    RatioReport ratios;
    VunResult vun;
    std::string validity;
    std::size_t generated = 0;
};

}  // namespace bwflow

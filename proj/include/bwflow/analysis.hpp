#pragma once

// Statistics of graph sets drawn along a probability path.

#include "bwflow/flow.hpp"
#include "bwflow/stats.hpp"

#include <vector>

namespace bwflow {

struct CurvePoint {
    double t = 0.0;
    RatioReport report;
    double mean_edge_weight = 0.0;  // over slots u < v, averaged over pairs
    double min_edge_weight = 0.0;   // smallest off-diagonal entry over all pairs
};

/// Graphs G_t ~ p(G_t | g0s[i], g1s[i]) for every pair, drawn with
/// make_training_sample under cfg (regime, scheme, nu, clamp_eps). Pair i at
/// time index k uses substream(cfg.seed, "path", k·pairs + i). A single g0 is
/// broadcast against every g1.
std::vector<Graph> path_graphs(const std::vector<Graph>& g0s, const std::vector<Graph>& g1s, double t,
                               std::size_t time_index, const FlowConfig& cfg);

/// A.Ratio of the path graphs against `test`, with `train` as the ratio's
/// reference set, at each requested time.
std::vector<CurvePoint> path_ratio_curve(const std::vector<Graph>& g0s, const std::vector<Graph>& g1s,
                                         const std::vector<Graph>& test, const std::vector<Graph>& train,
                                         const FlowConfig& cfg, const std::vector<double>& times);

/// Edge-weight summaries only (no test set needed).
std::vector<CurvePoint> path_weight_curve(const std::vector<Graph>& g0s, const std::vector<Graph>& g1s,
                                          const FlowConfig& cfg, const std::vector<double>& times);

/// i/(steps − 1) for i = 0..steps−1, the last one exactly 1.
std::vector<double> uniform_times(std::size_t steps);

}  // namespace bwflow

#include "bwflow/analysis.hpp"

#include "bwflow/errors.hpp"
#include "bwflow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bwflow {

std::vector<double> uniform_times(std::size_t steps) {
    if (steps < 2) throw InputError("at least two time points are required");
    std::vector<double> times(steps);
    for (std::size_t i = 0; i < steps; ++i) times[i] = static_cast<double>(i) / static_cast<double>(steps - 1);
    times.back() = 1.0;
    return times;
}

std::vector<Graph> path_graphs(const std::vector<Graph>& g0s, const std::vector<Graph>& g1s, double t,
                               std::size_t time_index, const FlowConfig& cfg) {
    if (g1s.empty()) throw InputError("no target graphs");
    if (g0s.size() != 1 && g0s.size() != g1s.size()) {
        throw InputError("source and target sets must have equal size, or a single source");
    }
    std::vector<Graph> out(g1s.size());
    const std::size_t pairs = g1s.size();
    parallel_for(pairs, [&](std::size_t i) {
        Rng rng = substream(cfg.seed, "path", time_index * pairs + i);
        const Graph& g0 = g0s.size() == 1 ? g0s.front() : g0s[i];
        out[i] = make_training_sample(g0, g1s[i], t, cfg, rng).g_t;
    });
    return out;
}

namespace {

void summarize_weights(const std::vector<Graph>& graphs, CurvePoint& point) {
    double mean = 0.0;
    double lowest = std::numeric_limits<double>::infinity();
    for (const Graph& g : graphs) {
        const Index n = g.n();
        double sum = 0.0;
        std::size_t slots = 0;
        for (Index j = 1; j < n; ++j) {
            for (Index i = 0; i < j; ++i) {
                sum += g.w(i, j);
                lowest = std::min(lowest, g.w(i, j));
                ++slots;
            }
        }
        mean += slots > 0 ? sum / static_cast<double>(slots) : 0.0;
    }
    point.mean_edge_weight = mean / static_cast<double>(graphs.size());
    point.min_edge_weight = std::isfinite(lowest) ? lowest : 0.0;
}

}  // namespace

std::vector<CurvePoint> path_weight_curve(const std::vector<Graph>& g0s, const std::vector<Graph>& g1s,
                                          const FlowConfig& cfg, const std::vector<double>& times) {
    std::vector<CurvePoint> curve;
    for (std::size_t k = 0; k < times.size(); ++k) {
        CurvePoint point;
        point.t = times[k];
        summarize_weights(path_graphs(g0s, g1s, times[k], k, cfg), point);
        curve.push_back(point);
    }
    return curve;
}

std::vector<CurvePoint> path_ratio_curve(const std::vector<Graph>& g0s, const std::vector<Graph>& g1s,
                                         const std::vector<Graph>& test, const std::vector<Graph>& train,
                                         const FlowConfig& cfg, const std::vector<double>& times) {
    const std::vector<StatDescriptor> stats = standard_stats();
    std::vector<CurvePoint> curve;
    for (std::size_t k = 0; k < times.size(); ++k) {
        CurvePoint point;
        point.t = times[k];
        const std::vector<Graph> graphs = path_graphs(g0s, g1s, times[k], k, cfg);
        summarize_weights(graphs, point);
        point.report = a_ratio(graphs, test, train, stats);
        curve.push_back(point);
    }
    return curve;
}

}  // namespace bwflow

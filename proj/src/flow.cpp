#include "bwflow/flow.hpp"

#include "bwflow/errors.hpp"
#include "bwflow/parallel.hpp"
#include "bwflow/velocity.hpp"

#include <algorithm>
#include <cmath>

namespace bwflow {

std::string to_string(Regime r) { return r == Regime::continuous ? "continuous" : "discrete"; }

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::xpred_velocity: return "xpred_velocity";
        case Strategy::bw_velocity: return "bw_velocity";
        case Strategy::path_reconstruction: return "path_reconstruction";
    }
    return "xpred_velocity";
}

std::string to_string(TimeDistortion d) { return d == TimeDistortion::polydec ? "polydec" : "identity"; }

Regime parse_regime(std::string_view name) {
    if (name == "continuous") return Regime::continuous;
    if (name == "discrete") return Regime::discrete;
    throw InputError("unknown regime '" + std::string(name) + "'");
}

Strategy parse_strategy(std::string_view name) {
    if (name == "xpred_velocity") return Strategy::xpred_velocity;
    if (name == "bw_velocity") return Strategy::bw_velocity;
    if (name == "path_reconstruction") return Strategy::path_reconstruction;
    throw InputError("unknown sampling strategy '" + std::string(name) + "'");
}

TimeDistortion parse_time_distortion(std::string_view name) {
    if (name == "identity") return TimeDistortion::identity;
    if (name == "polydec") return TimeDistortion::polydec;
    throw InputError("unknown time distortion '" + std::string(name) + "'");
}

void FlowConfig::validate() const {
    if (steps < 1) throw InputError("FlowConfig: steps must be at least 1");
    if (!(clamp_eps > 0.0 && clamp_eps < 0.5)) throw InputError("FlowConfig: clamp_eps must lie in (0, 0.5)");
    if (!(nu >= 0.0)) throw InputError("FlowConfig: nu must be nonnegative");
    if (!(scheme.eps > 0.0)) throw InputError("FlowConfig: scheme eps must be positive");
}

double apply_time_distortion(double t, TimeDistortion kind) {
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("time must lie in [0, 1]");
    return kind == TimeDistortion::polydec ? 2.0 * t - t * t : t;
}

namespace {

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Independent Bernoulli draw per slot u < v, mirrored.
Matrix sample_edges(const Matrix& probs, Rng& rng) {
    const Index n = probs.rows();
    Matrix e = Matrix::Zero(n, n);
    for (Index j = 1; j < n; ++j) {
        for (Index i = 0; i < j; ++i) {
            if (uniform(rng) < probs(i, j)) e(i, j) = e(j, i) = 1.0;
        }
    }
    return e;
}

// Clips each row onto the simplex (negatives to zero, renormalize) and draws a class.
Matrix sample_nodes(const Matrix& probs, Rng& rng) {
    const Index n = probs.rows();
    const Index k = probs.cols();
    Matrix x = Matrix::Zero(n, k);
    if (k == 0) return x;
    for (Index v = 0; v < n; ++v) {
        Vector row = probs.row(v).transpose().cwiseMax(0.0);
        const double total = row.sum();
        if (!(total > 0.0)) throw NonFiniteVelocity("node probabilities vanished during sampling");
        double u = uniform(rng) * total;
        Index pick = k - 1;
        for (Index c = 0; c < k; ++c) {
            if (row[c] <= 0.0) continue;
            if (u < row[c]) {
                pick = c;
                break;
            }
            u -= row[c];
        }
        while (row[pick] <= 0.0 && pick > 0) --pick;
        x(v, pick) = 1.0;
    }
    return x;
}

Graph sample_graph(const Matrix& edge_probs, const Matrix& node_probs, Rng& rng) {
    Graph g;
    g.w = sample_edges(edge_probs, rng);
    g.x = sample_nodes(node_probs, rng);
    g.discrete = true;
    return g;
}

void require_same_shape(const Graph& a, const Graph& b) {
    if (a.n() != b.n() || a.num_features() != b.num_features()) {
        throw DimensionMismatch("graphs differ in node count or feature width");
    }
}

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw NonFiniteVelocity(std::string("non-finite ") + what + " during sampling");
}

PathPoint path_point(const Graph& g0, const Graph& g1, double t, const FlowConfig& cfg) {
    const GraphMRF m0 = GraphMRF::from_graph(g0, cfg.nu);
    const GraphMRF m1 = GraphMRF::from_graph(g1, cfg.nu);
    return interpolate(m0, m1, t, cfg.scheme);
}

Graph snap(const DenoiserOutput& pred, Regime regime) {
    Graph g;
    if (regime == Regime::discrete) {
        g.w = threshold_edges(pred.edge_probs);
        g.x = one_hot(feature_argmax(pred.node_probs), pred.node_probs.cols());
        g.discrete = true;
    } else {
        g.w = pred.edge_probs;
        g.w.diagonal().setZero();
        g.x = pred.node_probs;
        g.discrete = false;
    }
    return g;
}

Graph prediction_graph(const DenoiserOutput& pred) {
    Graph g;
    g.w = pred.edge_probs;
    g.w.diagonal().setZero();
    g.x = pred.node_probs;
    return g;
}

// One Euler update of the continuous state from time t over dt.
Graph continuous_step(const Graph& state, const Graph& g0, const DenoiserOutput& pred, double t, double t_next,
                      const FlowConfig& cfg) {
    const double dt = t_next - t;
    Graph next = state;
    next.discrete = false;
    switch (cfg.strategy) {
        case Strategy::xpred_velocity: {
            const double gain = dt / (1.0 - t);
            next.w += gain * (pred.edge_probs - state.w);
            next.x += gain * (pred.node_probs - state.x);
            break;
        }
        case Strategy::bw_velocity: {
            const Graph target = prediction_graph(pred);
            const BwGeodesic geo(GraphMRF::from_graph(g0, cfg.nu), GraphMRF::from_graph(target, cfg.nu));
            const GraphVelocity v = bw_velocity(geo, t);
            require_finite(v.w_dot, "edge velocity");
            next.w += dt * v.w_dot;
            next.x += dt * v.x_dot;
            break;
        }
        case Strategy::path_reconstruction: {
            const PathPoint p = path_point(g0, prediction_graph(pred), t_next, cfg);
            next.w = p.w;
            next.x = p.x;
            break;
        }
    }
    next.w.diagonal().setZero();
    return next;
}

Graph discrete_step(const Graph& state, const Graph& g0, const DenoiserOutput& pred, double t, double t_next,
                    const FlowConfig& cfg, Rng& rng) {
    const double dt = t_next - t;
    const double gain = dt / (1.0 - t);
    const Index n = state.n();
    switch (cfg.strategy) {
        case Strategy::xpred_velocity: {
            const Matrix edge_p = (state.w + gain * (pred.edge_probs - state.w)).cwiseMax(0.0).cwiseMin(1.0);
            const Matrix node_p = state.x + gain * (pred.node_probs - state.x);
            require_finite(edge_p, "edge probabilities");
            require_finite(node_p, "node probabilities");
            return sample_graph(edge_p, node_p, rng);
        }
        case Strategy::bw_velocity: {
            const Graph target = sample_graph(pred.edge_probs, pred.node_probs, rng);
            const BwGeodesic geo(GraphMRF::from_graph(g0, cfg.nu), GraphMRF::from_graph(target, cfg.nu));
            const Matrix w_t = geo.at(t).w;
            const GraphVelocity v = bw_velocity(geo, t);
            const Matrix rates = discrete_edge_velocity(state.w, w_t, v.w_dot, cfg.clamp_eps);
            require_finite(rates, "edge rates");
            Matrix edge_p = state.w;
            for (Index j = 1; j < n; ++j) {
                for (Index i = 0; i < j; ++i) {
                    const double flip = std::min(1.0, rates(i, j) * dt);
                    const double on = state.w(i, j) > 0.5 ? 1.0 - flip : flip;
                    edge_p(i, j) = edge_p(j, i) = on;
                }
            }
            const Matrix node_p = state.x + gain * (target.x - state.x);
            return sample_graph(edge_p, node_p, rng);
        }
        case Strategy::path_reconstruction: {
            const Graph target = sample_graph(pred.edge_probs, pred.node_probs, rng);
            return make_training_sample(g0, target, t_next, cfg, rng).g_t;
        }
    }
    return state;
}

}  // namespace

TrainingSample make_training_sample(const Graph& g0, const Graph& g1, double t, const FlowConfig& cfg,
                                    Rng& rng) {
    cfg.validate();
    require_same_shape(g0, g1);
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("training time must lie in [0, 1]");
    TrainingSample s;
    s.t = t;
    s.target = g1;
    const bool discrete = cfg.regime == Regime::discrete;
    if (t == 0.0 || t == 1.0) {
        const Graph& end = t == 0.0 ? g0 : g1;
        s.g_t = discrete ? sample_graph(end.w, end.x, rng) : end;
        s.g_t.discrete = discrete;
        return s;
    }
    const PathPoint p = path_point(g0, g1, t, cfg);
    if (!discrete) {
        s.g_t.w = p.w;
        s.g_t.w.diagonal().setZero();
        s.g_t.x = p.x;
        s.g_t.discrete = false;
        return s;
    }
    const Matrix edge_p = p.w.cwiseMax(cfg.clamp_eps).cwiseMin(1.0 - cfg.clamp_eps);
    s.g_t = sample_graph(edge_p, p.x, rng);
    return s;
}

double cfm_loss(const Denoiser& denoiser, const std::vector<TrainingSample>& samples, double floor) {
    if (samples.empty()) throw InputError("cfm_loss needs at least one sample");
    double total = 0.0;
    for (const TrainingSample& s : samples) {
        const DenoiserOutput out = denoiser.predict(s.g_t, s.t);
        const Index n = s.target.n();
        if (out.edge_probs.rows() != n || out.edge_probs.cols() != n ||
            out.node_probs.rows() != s.target.x.rows() || out.node_probs.cols() != s.target.x.cols()) {
            throw DimensionMismatch("cfm_loss: denoiser output does not match the target");
        }
        double nll = 0.0;
        const std::vector<Index> classes = feature_argmax(s.target.x);
        for (Index v = 0; v < n; ++v) {
            const Index c = classes[static_cast<std::size_t>(v)];
            if (c >= 0) nll -= std::log(std::max(out.node_probs(v, c), floor));
        }
        for (Index j = 1; j < n; ++j) {
            for (Index i = 0; i < j; ++i) {
                const double p = out.edge_probs(i, j);
                const double q = s.target.w(i, j) > 0.5 ? p : 1.0 - p;
                nll -= std::log(std::max(q, floor));
            }
        }
        total += nll;
    }
    return total / static_cast<double>(samples.size());
}

double draw_training_time(const FlowConfig& cfg, Rng& rng) {
    return apply_time_distortion(uniform(rng), cfg.time_distortion);
}

SampleResult sample(const Denoiser& denoiser, const Graph& g0, const FlowConfig& cfg, Rng& rng) {
    cfg.validate();
    if (cfg.strategy == Strategy::bw_velocity && cfg.scheme.kind != SchemeKind::bw) {
        throw InputError("the bw_velocity strategy requires the bw interpolation scheme");
    }
    const bool discrete = cfg.regime == Regime::discrete;
    Graph state = g0;
    state.discrete = discrete;
    const double steps = static_cast<double>(cfg.steps);
    SampleResult result;
    for (std::size_t i = 0; i < cfg.steps; ++i) {
        const double t = apply_time_distortion(static_cast<double>(i) / steps, cfg.time_distortion);
        const double t_next =
            i + 1 == cfg.steps ? 1.0
                               : apply_time_distortion(static_cast<double>(i + 1) / steps, cfg.time_distortion);
        const DenoiserOutput pred = denoiser.predict(state, t);
        require_finite(pred.edge_probs, "denoiser edge output");
        require_finite(pred.node_probs, "denoiser node output");
        if (pred.edge_probs.rows() != state.n() || pred.node_probs.rows() != state.x.rows() ||
            pred.node_probs.cols() != state.x.cols()) {
            throw DimensionMismatch("denoiser output does not match the sampler state");
        }
        if (i + 1 == cfg.steps) {
            result.pre_snap = discrete ? state : continuous_step(state, g0, pred, t, t_next, cfg);
            result.graph = snap(pred, cfg.regime);
            break;
        }
        state = discrete ? discrete_step(state, g0, pred, t, t_next, cfg, rng)
                         : continuous_step(state, g0, pred, t, t_next, cfg);
    }
    return result;
}

std::vector<SampleResult> sample_batch(const Denoiser& denoiser, const std::vector<Graph>& g0s,
                                       const FlowConfig& cfg) {
    cfg.validate();
    std::vector<SampleResult> out(g0s.size());
    parallel_for(g0s.size(), [&](std::size_t i) {
        Rng rng = substream(cfg.seed, "chain", i);
        out[i] = sample(denoiser, g0s[i], cfg, rng);
    });
    return out;
}

namespace serial {

std::vector<SampleResult> sample_batch(const Denoiser& denoiser, const std::vector<Graph>& g0s,
                                       const FlowConfig& cfg) {
    cfg.validate();
    std::vector<SampleResult> out(g0s.size());
    for (std::size_t i = 0; i < g0s.size(); ++i) {
        Rng rng = substream(cfg.seed, "chain", i);
        out[i] = sample(denoiser, g0s[i], cfg, rng);
    }
    return out;
}

}  // namespace serial

}  // namespace bwflow

#pragma once

// Flow-matching engine: conditional training samples, the x-prediction
// likelihood loss, and continuous/discrete samplers.

#include "bwflow/denoiser.hpp"
#include "bwflow/interp.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bwflow {

enum class Regime { continuous, discrete };
enum class Strategy { xpred_velocity, bw_velocity, path_reconstruction };
enum class TimeDistortion { identity, polydec };

std::string to_string(Regime r);
std::string to_string(Strategy s);
std::string to_string(TimeDistortion d);
Regime parse_regime(std::string_view name);
Strategy parse_strategy(std::string_view name);
TimeDistortion parse_time_distortion(std::string_view name);

struct FlowConfig {
    Regime regime = Regime::discrete;
    Strategy strategy = Strategy::xpred_velocity;
    std::size_t steps = 100;
    double clamp_eps = 1e-6;
    TimeDistortion time_distortion = TimeDistortion::identity;
    std::uint64_t seed = 0;
    /// Precision regularizer of the GraphMRFs built from endpoint graphs.
    /// Reference draws are usually disconnected, so the BW path needs nu > 0
    /// whenever an endpoint may be.
    double nu = 0.0;
    /// Path used for training samples and path reconstruction.
    InterpScheme scheme{};

    [[nodiscard]] double dt() const { return 1.0 / static_cast<double>(steps); }
    /// Throws InputError on steps == 0 or clamp_eps outside (0, 0.5).
    void validate() const;
};

struct TrainingSample {
    double t = 0.0;
    Graph g_t;
    Graph target;
};

/// Draws G_t ~ p(G_t | G₀, G₁). Continuous: the interpolant itself.
/// Discrete: W_t clipped into [clamp_eps, 1 − clamp_eps] (left unclipped at
/// t = 0 and t = 1), then independent Bernoulli edges and categorical nodes.
TrainingSample make_training_sample(const Graph& g0, const Graph& g1, double t, const FlowConfig& cfg,
                                    Rng& rng);

/// Mean over samples of the factorized negative log-likelihood of the target
/// under the denoiser: categorical over nodes plus Bernoulli over slots u < v.
/// Probabilities are floored at `floor` inside the log.
double cfm_loss(const Denoiser& denoiser, const std::vector<TrainingSample>& samples,
                double floor = 1e-6);

double apply_time_distortion(double t, TimeDistortion kind);

/// Training time: distortion applied to a uniform draw.
double draw_training_time(const FlowConfig& cfg, Rng& rng);

struct SampleResult {
    Graph graph;
    /// Continuous regime: the state after a regular update on the last step
    /// instead of substituting the prediction. Discrete regime: the state
    /// entering the last step.
    Graph pre_snap;
};

/// Runs one sampling chain from g0. Time grid τ_i = distortion(i/steps); the
/// last step outputs the denoiser's prediction at τ_{steps−1} (thresholded
/// and argmaxed in the discrete regime).
SampleResult sample(const Denoiser& denoiser, const Graph& g0, const FlowConfig& cfg, Rng& rng);

/// Chain i uses substream(cfg.seed, "chain", i); results do not depend on the
/// thread count.
std::vector<SampleResult> sample_batch(const Denoiser& denoiser, const std::vector<Graph>& g0s,
                                       const FlowConfig& cfg);

namespace serial {
std::vector<SampleResult> sample_batch(const Denoiser& denoiser, const std::vector<Graph>& g0s,
                                       const FlowConfig& cfg);
}  // namespace serial

}  // namespace bwflow

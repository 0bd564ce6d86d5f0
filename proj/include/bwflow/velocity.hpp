#pragma once

// Conditional velocity fields along a path: the continuous Bures–Wasserstein
// velocity, discrete edge/node rates, and finite-difference velocities.

#include "bwflow/interp.hpp"

namespace bwflow {

struct GraphVelocity {
    Matrix w_dot;  // symmetric, zero diagonal
    Matrix x_dot;
};

enum class BwVelocityForm {
    /// d/dt of the geodesic: L̇_t = −(L_t A_t + A_t L_t) with
    /// A_t = (T − I)((1−t)I + tT)^{-1}.
    exact,
    /// L̇_t = 2L_t − T L_t − L_t T, i.e. A_t frozen at its t = 0 value T − I.
    /// Agrees with `exact` at t = 0 only.
    source_tangent,
};

/// Largest admissible t for velocities carrying a 1/(1−t) factor.
inline constexpr double kMaxVelocityTime = 1.0 - 1e-6;

/// Edge rate Ẇ_t = diag(L̇_t) − L̇_t and feature rate (X₁ − X_t)/(1−t).
/// The feature rate omits the covariance correction of the Gaussian velocity
/// field (its amplitude is assumed small next to the mean displacement).
GraphVelocity bw_velocity(const BwGeodesic& geodesic, double t,
                          BwVelocityForm form = BwVelocityForm::exact);
GraphVelocity bw_velocity(const GraphMRF& g0, const GraphMRF& g1, double t,
                          BwVelocityForm form = BwVelocityForm::exact);

enum class EdgeRateForm {
    /// Flip rates of a two-state chain that reproduce Ẇ exactly:
    /// 0→1 at max(Ẇ,0)/(1−W), 1→0 at max(−Ẇ,0)/W.
    continuity,
    /// (1 − 2E)·Ẇ / (W ∘ (1 − W)), signed and unclamped.
    signed_ratio,
};

/// Per-edge rate of flipping the current state of e_uv. W is clipped into
/// [clamp_eps, 1 − clamp_eps] before any division. Symmetric, zero diagonal.
Matrix discrete_edge_velocity(const Matrix& e_t, const Matrix& w_t, const Matrix& w_dot,
                              double clamp_eps = 1e-6, EdgeRateForm form = EdgeRateForm::continuity);

/// (x1 − x_t)/(1 − t) row-wise; rows sum to zero for probability rows.
Matrix discrete_node_velocity(const Matrix& x_t, const Matrix& x1, double t);

/// Central difference (P_{t+h} − P_{t−h})/(2h) of the scheme's path. The BW path
/// is evaluated in long double.
GraphVelocity numerical_velocity(const GraphMRF& g0, const GraphMRF& g1, double t, double h,
                                 InterpScheme scheme);

}  // namespace bwflow

#pragma once

// Probability-path interpolants between two GraphMRFs: the Bures–Wasserstein
// geodesic with its transport map, and the linear / geometric / harmonic
// baselines on adjacency matrices.

#include "bwflow/graph.hpp"
#include "bwflow/linalg.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bwflow {

enum class SchemeKind { bw, linear, geometric, harmonic };

struct InterpScheme {
    SchemeKind kind = SchemeKind::bw;
    double eps = 1e-6;  // spectral floor for geometric/harmonic
};

std::string to_string(SchemeKind kind);
SchemeKind parse_scheme(std::string_view name);

/// One point on a path. w is diag(l) − l and may carry small negative
/// off-diagonal entries; clipping is left to the discrete sampler.
struct PathPoint {
    double t = 0.0;
    Matrix x;
    Matrix l;
    Matrix w;
};

/// The constant-speed geodesic between the feature Gaussians of two GraphMRFs.
///
/// With precisions P_i = L_i + νI and covariances Σ_i = P_i†,
///   T   = P₀^{1/2} (Σ₀^{1/2} Σ₁ Σ₀^{1/2})^{1/2} P₀^{1/2},
///   Σ_t = ((1−t)I + tT) Σ₀ ((1−t)I + tT),
///   L_t = Σ_t† − νI,   X_t = (1−t)X₀ + tX₁.
/// At ν = 0 every chained product is re-projected onto the complement of the
/// constant vector, the shared null direction of connected Laplacians.
/// All spectral work on the endpoints is done once at construction.
class BwGeodesic {
public:
    BwGeodesic(const GraphMRF& source, const GraphMRF& target, linalg::RankTolerance tol = {});

    [[nodiscard]] PathPoint at(double t) const;
    [[nodiscard]] Matrix covariance_at(double t) const;
    [[nodiscard]] Matrix precision_at(double t) const;

    /// A_t = (T − I)((1−t)I + tT)^{-1}, the symmetric velocity field of the
    /// displacement interpolation: Σ̇_t = A_t Σ_t + Σ_t A_t.
    [[nodiscard]] Matrix tangent(double t) const;

    [[nodiscard]] const Matrix& transport_map() const { return transport_; }
    [[nodiscard]] const GraphMRF& source() const { return source_; }
    [[nodiscard]] const GraphMRF& target() const { return target_; }
    [[nodiscard]] double nu() const { return source_.nu; }
    [[nodiscard]] const linalg::RankTolerance& tolerance() const { return tol_; }

    /// Projects out the constant direction when ν = 0; identity otherwise.
    [[nodiscard]] Matrix project(const Matrix& m) const;

private:
    GraphMRF source_;
    GraphMRF target_;
    linalg::RankTolerance tol_;
    Matrix precision0_sqrt_;
    Matrix covariance0_;
    Matrix cross_sqrt_;
    Matrix transport_;
    linalg::Spectrum transport_spectrum_;
};

/// Transport map between N(0, L₀†) and N(0, L₁†) (or the ν-regularized pair).
Matrix transport_map(const Matrix& l0, const Matrix& l1, double nu = 0.0, linalg::RankTolerance tol = {});

PathPoint bw_interpolate(const GraphMRF& g0, const GraphMRF& g1, double t, linalg::RankTolerance tol = {});

/// Linear, geometric or harmonic interpolation of adjacency matrices. Features
/// are always interpolated linearly; the returned w has its diagonal zeroed.
PathPoint baseline_interpolate(const GraphMRF& g0, const GraphMRF& g1, double t, InterpScheme scheme);

/// Dispatches on scheme.kind.
PathPoint interpolate(const GraphMRF& g0, const GraphMRF& g1, double t, InterpScheme scheme);

/// Spectral floor: U max(λ, eps) Uᵀ.
Matrix spectral_floor(const Matrix& a, double eps);
/// A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2} on spectrally floored A, B.
Matrix geometric_mean(const Matrix& a, const Matrix& b, double t, double eps);
/// ((1−t)A^{-1} + tB^{-1})^{-1} on spectrally floored A, B.
Matrix harmonic_mean(const Matrix& a, const Matrix& b, double t, double eps);

/// Points at t = i/(steps−1), evaluated in parallel.
std::vector<PathPoint> path_sweep(const GraphMRF& g0, const GraphMRF& g1, InterpScheme scheme,
                                  std::size_t steps);

namespace serial {
std::vector<PathPoint> path_sweep(const GraphMRF& g0, const GraphMRF& g1, InterpScheme scheme,
                                  std::size_t steps);
}  // namespace serial

}  // namespace bwflow

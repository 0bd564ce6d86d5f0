#pragma once

// Closed-form optimal-transport distances between Gaussian measures and
// between GraphMRFs.

#include "bwflow/graph.hpp"
#include "bwflow/linalg.hpp"

namespace bwflow {

struct GaussianMeasure {
    Vector mean;
    Matrix cov;
};

/// Squared 2-Wasserstein distance
///   ||μ₀−μ₁||² + Tr(Σ₀ + Σ₁ − 2(Σ₀^{1/2} Σ₁ Σ₀^{1/2})^{1/2}).
double gaussian_w2_sq(const GaussianMeasure& a, const GaussianMeasure& b,
                      linalg::RankTolerance tol = {});

/// ||Σ₀^{1/2} − Σ₁^{1/2}||²_F, the PSD metric used for the edge measure.
double bures_psd(const Matrix& s0, const Matrix& s1, linalg::RankTolerance tol = {});

/// Tr(Σ₀ + Σ₁ − 2(Σ₀^{1/2} Σ₁ Σ₀^{1/2})^{1/2}), clamped at 0.
double bures_trace(const Matrix& s0, const Matrix& s1, linalg::RankTolerance tol = {});

struct BwDistance {
    double total = 0.0;
    double mean_term = 0.0;        // ||X₀ − X₁||²_F
    double covariance_term = 0.0;  // β · bures_trace(Σ₀, Σ₁)
};

/// Graph Bures–Wasserstein distance between two GraphMRFs. With ν = 0 the
/// covariances are the Laplacian pseudoinverses and both graphs must be
/// connected (DisconnectedGraph otherwise); with ν > 0, (L + νI)^{-1} is used.
///
/// `beta` scales the trace term only. It absorbs ||V†||²_F; splitting it into
/// a feature part and an edge part (β + 1) is left to the caller.
BwDistance graph_bw_distance(const GraphMRF& g0, const GraphMRF& g1, linalg::RankTolerance tol = {});

/// (νI + L)† for a GraphMRF, after the connectivity check described above.
Matrix mrf_covariance(const GraphMRF& g, linalg::RankTolerance tol = {});

/// Throws unless the two MRFs can be joined by a geodesic (same size, same
/// feature width, same ν, connected when ν = 0).
void require_compatible(const GraphMRF& g0, const GraphMRF& g1, linalg::RankTolerance tol = {});

}  // namespace bwflow

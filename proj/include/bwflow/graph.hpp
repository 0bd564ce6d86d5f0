#pragma once

#include "bwflow/linalg.hpp"
#include "bwflow/types.hpp"

#include <cstddef>
#include <vector>

namespace bwflow {

/// A graph realization: symmetric nonnegative weighted adjacency with zero
/// diagonal, plus a dense row-major n×K feature matrix (K may be 0). In the
/// discrete regime edges are binary and feature rows are one-hot.
struct Graph {
    Matrix w;
    Matrix x;
    bool discrete = false;

    [[nodiscard]] Index n() const { return w.rows(); }
    [[nodiscard]] Index num_features() const { return x.cols(); }

    static Graph empty(Index n, Index num_features = 0, bool discrete = true);

    friend bool operator==(const Graph& a, const Graph& b);
};

/// L = D − W with D = diag(W·1).
[[nodiscard]] Matrix laplacian(const Matrix& w);
[[nodiscard]] Matrix laplacian(const Graph& g);

/// W = diag(L) − L, the inverse of laplacian() on zero-row-sum matrices.
[[nodiscard]] Matrix adjacency_from_laplacian(const Matrix& l);

struct GraphValidity {
    bool symmetric = false;
    bool nonnegative = false;
    bool connected = false;
    std::size_t zero_eigs = 0;
};

/// Diagnostic check; connectivity is read off the Laplacian null-space dimension.
GraphValidity validate(const Graph& g, linalg::RankTolerance tol = {});

/// Graph Markov random field parameters. The emission matrix is represented
/// only through beta = ||V†||²_F, which is all the distance and geodesic need.
struct GraphMRF {
    Matrix mean;
    Matrix laplacian;
    double nu = 0.0;
    double beta = 1.0;

    [[nodiscard]] Index n() const { return laplacian.rows(); }

    static GraphMRF from_graph(const Graph& g, double nu = 0.0, double beta = 1.0);
};

/// Draws X + E with vec(E) ~ N(0, β·(νI+L)† ⊗ I) via spectral coloring.
/// With ν = 0 the draw is restricted to range(L); a disconnected Laplacian at
/// ν = 0 throws SingularCovariance.
Matrix sample_features(const GraphMRF& mrf, Rng& rng, linalg::RankTolerance tol = {});

/// Binary adjacency with entries w_uv > threshold.
[[nodiscard]] Matrix threshold_edges(const Matrix& w, double threshold = 0.5);

/// Number of edges u < v with weight above threshold.
[[nodiscard]] std::size_t edge_count(const Matrix& w, double threshold = 0.5);

/// Row-wise argmax of a feature matrix; -1 for rows of a K = 0 matrix.
[[nodiscard]] std::vector<Index> feature_argmax(const Matrix& x);

[[nodiscard]] Matrix one_hot(const std::vector<Index>& classes, Index num_classes);

}  // namespace bwflow

#pragma once

// Random generators and comparison helpers shared by the test binaries.

#include "bwflow/graph.hpp"
#include "bwflow/types.hpp"

#include <random>

namespace bwtest {

using bwflow::Graph;
using bwflow::Index;
using bwflow::Matrix;
using bwflow::Rng;
using bwflow::Vector;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Index uniform_index(Rng& rng, Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng); }

inline double rel_frobenius(const Matrix& a, const Matrix& b) {
    const double scale = std::max(b.norm(), 1e-300);
    return (a - b).norm() / scale;
}

/// Random spanning tree plus extra edges with probability `extra`; weights
/// uniform in [lo, hi]. Always connected.
inline Matrix random_connected_weights(Index n, Rng& rng, double extra = 0.3, double lo = 0.5, double hi = 1.5) {
    Matrix w = Matrix::Zero(n, n);
    for (Index v = 1; v < n; ++v) {
        const Index u = uniform_index(rng, 0, v - 1);
        w(u, v) = w(v, u) = uniform(rng, lo, hi);
    }
    for (Index j = 1; j < n; ++j)
        for (Index i = 0; i < j; ++i)
            if (w(i, j) == 0.0 && uniform(rng, 0.0, 1.0) < extra) w(i, j) = w(j, i) = uniform(rng, lo, hi);
    return w;
}

inline Graph random_connected_graph(Index n, Index k, Rng& rng) {
    Graph g;
    g.w = random_connected_weights(n, rng);
    g.x = Matrix::Zero(n, k);
    for (Index v = 0; v < n; ++v)
        for (Index c = 0; c < k; ++c) g.x(v, c) = uniform(rng, -1.0, 1.0);
    return g;
}

/// Binary graph with a one-hot feature per node.
inline Graph random_binary_graph(Index n, Index k, double p, Rng& rng) {
    Graph g = Graph::empty(n, k, true);
    for (Index j = 1; j < n; ++j)
        for (Index i = 0; i < j; ++i)
            if (uniform(rng, 0.0, 1.0) < p) g.w(i, j) = g.w(j, i) = 1.0;
    if (k > 0) {
        g.x.setZero();
        for (Index v = 0; v < n; ++v) g.x(v, uniform_index(rng, 0, k - 1)) = 1.0;
    }
    return g;
}

inline Matrix random_orthogonal(Index n, Rng& rng) {
    Matrix a(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) a(i, j) = std::normal_distribution<double>(0.0, 1.0)(rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.householderQ() * Matrix::Identity(n, n);
}

inline Matrix random_psd(Index n, Index rank, Rng& rng) {
    Matrix b(n, rank);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < rank; ++j) b(i, j) = std::normal_distribution<double>(0.0, 1.0)(rng);
    return b * b.transpose();
}

/// Weight matrix of the path graph on n nodes with unit weights scaled by w.
inline Matrix path_weights(Index n, double w = 1.0) {
    Matrix m = Matrix::Zero(n, n);
    for (Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = w;
    return m;
}

inline Graph weighted_graph(const Matrix& w, Index k = 0) {
    Graph g;
    g.w = w;
    g.x = Matrix::Zero(w.rows(), k);
    return g;
}

}  // namespace bwtest

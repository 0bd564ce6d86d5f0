#include "bwflow/graph.hpp"

#include "bwflow/errors.hpp"

#include <cmath>
#include <random>

namespace bwflow {

Graph Graph::empty(Index n, Index num_features, bool discrete) {
    Graph g;
    g.w = Matrix::Zero(n, n);
    g.x = Matrix::Zero(n, num_features);
    if (num_features > 0) g.x.col(0).setOnes();
    g.discrete = discrete;
    return g;
}

bool operator==(const Graph& a, const Graph& b) {
    return a.discrete == b.discrete && a.w.rows() == b.w.rows() && a.x.rows() == b.x.rows() &&
           a.x.cols() == b.x.cols() && a.w == b.w && a.x == b.x;
}

Matrix laplacian(const Matrix& w) {
    Matrix l = -w;
    l.diagonal() = w.rowwise().sum();
    // W has zero diagonal, so the degree already excludes self-weight.
    l.diagonal() -= w.diagonal();
    return l;
}

Matrix laplacian(const Graph& g) {
    return laplacian(g.w);
}

Matrix adjacency_from_laplacian(const Matrix& l) {
    Matrix w = -l;
    w.diagonal().setZero();
    return w;
}

GraphValidity validate(const Graph& g, linalg::RankTolerance tol) {
    GraphValidity v;
    if (g.n() == 0) return v;
    v.symmetric = linalg::is_symmetric(g.w) && g.w.diagonal().cwiseAbs().maxCoeff() == 0.0;
    v.nonnegative = g.w.size() == 0 || g.w.minCoeff() >= 0.0;
    if (!v.symmetric) return v;
    v.zero_eigs = linalg::null_dimension(laplacian(g.w), tol);
    v.connected = v.zero_eigs == 1;
    return v;
}

GraphMRF GraphMRF::from_graph(const Graph& g, double nu, double beta) {
    if (nu < 0.0) throw InputError("GraphMRF: nu must be nonnegative");
    if (!(beta > 0.0)) throw InputError("GraphMRF: beta must be positive");
    return GraphMRF{g.x, bwflow::laplacian(g.w), nu, beta};
}

Matrix sample_features(const GraphMRF& mrf, Rng& rng, linalg::RankTolerance tol) {
    const Index n = mrf.n();
    const Index k = mrf.mean.cols();
    if (mrf.mean.rows() != n) throw DimensionMismatch("sample_features: mean rows != node count");

    const linalg::Spectrum s = linalg::eig_sym(mrf.laplacian);
    const double cut = tol.threshold(s.eigenvalues.size() ? s.eigenvalues.maxCoeff() : 0.0);
    if (mrf.nu == 0.0 && (s.eigenvalues.array().abs() <= cut).count() > 1) {
        throw SingularCovariance("sample_features: nu = 0 with a disconnected Laplacian");
    }
    Vector scale(n);
    for (Index i = 0; i < n; ++i) {
        const double lam = mrf.nu + std::max(s.eigenvalues[i], 0.0);
        scale[i] = lam <= cut ? 0.0 : 1.0 / std::sqrt(lam);
    }

    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(n, k);
    for (Index j = 0; j < k; ++j)
        for (Index i = 0; i < n; ++i) z(i, j) = normal(rng);

    const Matrix color = s.eigenvectors * scale.asDiagonal() * s.eigenvectors.transpose();
    return mrf.mean + std::sqrt(mrf.beta) * color * z;
}

Matrix threshold_edges(const Matrix& w, double threshold) {
    Matrix e = (w.array() > threshold).cast<double>().matrix();
    e.diagonal().setZero();
    return e;
}

std::size_t edge_count(const Matrix& w, double threshold) {
    std::size_t count = 0;
    for (Index j = 0; j < w.cols(); ++j)
        for (Index i = 0; i < j; ++i)
            if (w(i, j) > threshold) ++count;
    return count;
}

std::vector<Index> feature_argmax(const Matrix& x) {
    std::vector<Index> out(static_cast<std::size_t>(x.rows()), -1);
    if (x.cols() == 0) return out;
    for (Index i = 0; i < x.rows(); ++i) {
        Index best = 0;
        x.row(i).maxCoeff(&best);
        out[static_cast<std::size_t>(i)] = best;
    }
    return out;
}

Matrix one_hot(const std::vector<Index>& classes, Index num_classes) {
    Matrix x = Matrix::Zero(static_cast<Index>(classes.size()), num_classes);
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i] >= 0) x(static_cast<Index>(i), classes[i]) = 1.0;
    }
    return x;
}

}  // namespace bwflow

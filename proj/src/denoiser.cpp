#include "bwflow/denoiser.hpp"

#include "bwflow/errors.hpp"

#include <algorithm>
#include <numeric>

namespace bwflow {

namespace {

std::size_t distance(const Matrix& edges_a, const std::vector<Index>& classes_a,
                     const Matrix& edges_b, const std::vector<Index>& classes_b) {
    std::size_t d = 0;
    const Index n = edges_a.rows();
    for (Index j = 1; j < n; ++j) {
        for (Index i = 0; i < j; ++i) {
            if (edges_a(i, j) != edges_b(i, j)) ++d;
        }
    }
    for (std::size_t v = 0; v < classes_a.size(); ++v) {
        if (classes_a[v] != classes_b[v]) ++d;
    }
    return d;
}

void require_size(const Graph& g, Index n, Index k) {
    if (g.n() != n || g.num_features() != k) {
        throw DimensionMismatch("denoiser input has size " + std::to_string(g.n()) + "x" +
                                std::to_string(g.num_features()) + ", expected " +
                                std::to_string(n) + "x" + std::to_string(k));
    }
}

}  // namespace

OracleDenoiser::OracleDenoiser(Graph target) : target_(std::move(target)) {}

DenoiserOutput OracleDenoiser::predict(const Graph& g_t, double) const {
    require_size(g_t, target_.n(), target_.num_features());
    DenoiserOutput out{target_.x, target_.w};
    out.edge_probs.diagonal().setZero();
    return out;
}

KnnDenoiser::KnnDenoiser(std::vector<Graph> train, std::size_t k) : train_(std::move(train)), k_(k) {
    if (train_.empty()) throw InputError("KnnDenoiser needs a nonempty training set");
    if (k_ < 1) throw InputError("KnnDenoiser needs k >= 1");
    k_ = std::min(k_, train_.size());
    const Index n = train_.front().n();
    const Index kf = train_.front().num_features();
    encoded_.reserve(train_.size());
    for (const Graph& g : train_) {
        if (g.n() != n || g.num_features() != kf) {
            throw DimensionMismatch("KnnDenoiser training graphs must share size and feature width");
        }
        encoded_.push_back({threshold_edges(g.w), feature_argmax(g.x)});
    }
}

std::vector<std::size_t> KnnDenoiser::neighbors(const Graph& g_t) const {
    require_size(g_t, train_.front().n(), train_.front().num_features());
    const Matrix edges = threshold_edges(g_t.w);
    const std::vector<Index> classes = feature_argmax(g_t.x);
    std::vector<std::size_t> dist(train_.size());
    for (std::size_t i = 0; i < train_.size(); ++i) {
        dist[i] = distance(edges, classes, encoded_[i].edges, encoded_[i].classes);
    }
    std::vector<std::size_t> order(train_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
                      });
    order.resize(k_);
    return order;
}

DenoiserOutput KnnDenoiser::predict(const Graph& g_t, double) const {
    const std::vector<std::size_t> nearest = neighbors(g_t);
    const Index n = train_.front().n();
    const Index kf = train_.front().num_features();
    DenoiserOutput out{Matrix::Zero(n, kf), Matrix::Zero(n, n)};
    for (std::size_t idx : nearest) {
        out.edge_probs += encoded_[idx].edges;
        out.node_probs += one_hot(encoded_[idx].classes, kf);
    }
    const double scale = 1.0 / static_cast<double>(nearest.size());
    out.edge_probs *= scale;
    out.node_probs *= scale;
    out.edge_probs.diagonal().setZero();
    return out;
}

UniformDenoiser::UniformDenoiser(Index n, Index num_features) : n_(n), num_features_(num_features) {}

DenoiserOutput UniformDenoiser::predict(const Graph& g_t, double) const {
    require_size(g_t, n_, num_features_);
    DenoiserOutput out;
    out.node_probs = Matrix::Constant(n_, num_features_,
                                      num_features_ > 0 ? 1.0 / static_cast<double>(num_features_) : 0.0);
    out.edge_probs = Matrix::Constant(n_, n_, 0.5);
    out.edge_probs.diagonal().setZero();
    return out;
}

std::size_t hamming_distance(const Graph& a, const Graph& b) {
    if (a.n() != b.n() || a.num_features() != b.num_features()) {
        throw DimensionMismatch("hamming_distance: graph shapes differ");
    }
    return distance(threshold_edges(a.w), feature_argmax(a.x), threshold_edges(b.w), feature_argmax(b.x));
}

}  // namespace bwflow

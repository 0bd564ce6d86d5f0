#pragma once

#include "bwflow/graph.hpp"

#include <memory>
#include <vector>

namespace bwflow {

/// Prediction of the clean endpoint G₁ given a noisy G_t. In the discrete
/// regime node rows lie on the simplex and edge entries are Bernoulli
/// probabilities; continuous-regime denoisers may emit real edge weights.
struct DenoiserOutput {
    Matrix node_probs;  // n×K
    Matrix edge_probs;  // n×n, symmetric, zero diagonal
};

/// Immutable after construction; predict() may be called concurrently.
class Denoiser {
public:
    virtual ~Denoiser() = default;
    [[nodiscard]] virtual DenoiserOutput predict(const Graph& g_t, double t) const = 0;
};

/// Always returns the fixed target graph.
class OracleDenoiser final : public Denoiser {
public:
    explicit OracleDenoiser(Graph target);
    [[nodiscard]] DenoiserOutput predict(const Graph& g_t, double t) const override;
    [[nodiscard]] const Graph& target() const { return target_; }

private:
    Graph target_;
};

/// Averages the one-hot encodings of the k training graphs nearest to g_t.
/// Distance: edge Hamming distance after thresholding at 0.5 plus the number
/// of nodes whose feature argmax differs. Ties go to the lower training index.
class KnnDenoiser final : public Denoiser {
public:
    KnnDenoiser(std::vector<Graph> train, std::size_t k);
    [[nodiscard]] DenoiserOutput predict(const Graph& g_t, double t) const override;
    /// Training indices of the k nearest graphs, nearest first.
    [[nodiscard]] std::vector<std::size_t> neighbors(const Graph& g_t) const;
    [[nodiscard]] std::size_t k() const { return k_; }

private:
    struct Encoded {
        Matrix edges;
        std::vector<Index> classes;
    };
    std::vector<Graph> train_;
    std::vector<Encoded> encoded_;
    std::size_t k_;
};

/// Edge probability 1/2 and uniform node classes everywhere.
class UniformDenoiser final : public Denoiser {
public:
    UniformDenoiser(Index n, Index num_features);
    [[nodiscard]] DenoiserOutput predict(const Graph& g_t, double t) const override;

private:
    Index n_;
    Index num_features_;
};

/// Edge/feature distance used by KnnDenoiser.
[[nodiscard]] std::size_t hamming_distance(const Graph& a, const Graph& b);

}  // namespace bwflow

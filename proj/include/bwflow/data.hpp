#pragma once

// Synthetic graph datasets and reference distributions p₀.

#include "bwflow/graph.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bwflow {

/// Stochastic block model. Binary edges, no features.
Graph sbm_sample(const std::vector<Index>& block_sizes, double p_in, double p_out, Rng& rng);

/// Uniform labeled tree on n ≥ 2 nodes, decoded from a random Prüfer sequence.
Graph tree_sample(Index n, Rng& rng);

/// Erdős–Rényi G(n, p).
Graph er_sample(Index n, double p, Rng& rng);

enum class ReferenceKind { marginal, absorbing };

std::string to_string(ReferenceKind kind);
ReferenceKind parse_reference(std::string_view name);

struct ReferenceDistribution {
    ReferenceKind kind = ReferenceKind::marginal;
    double edge_marginal = 0.0;
    Vector node_marginal;  // length K; may be empty when K = 0

    void validate() const;
};

/// Edge density over slots u < v and class frequencies of the training set.
ReferenceDistribution estimate_marginal(const std::vector<Graph>& train);

/// marginal: Bernoulli(edge_marginal) edges and Categorical(node_marginal)
/// nodes. absorbing: no edges, every node in class 0.
Graph draw_reference(const ReferenceDistribution& ref, Index n, Index num_features, Rng& rng);


/// Parameters of a synthetic dataset. `kind` selects which fields are read:
/// sbm uses block_sizes/p_in/p_out, tree uses n, er uses n/p.
struct DatasetManifest {
    std::string kind = "tree";
    std::vector<Index> block_sizes{10, 10};
    double p_in = 0.8;
    double p_out = 0.05;
    Index n = 16;
    double p = 0.3;
    std::size_t count = 100;      // train + test
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
};

struct Dataset {
    std::vector<Graph> train;
    std::vector<Graph> test;
};

/// Graph i is drawn from substream(seed, "dataset", i); the first
/// count − round(count·test_fraction) graphs form the training split.
Dataset generate_dataset(const DatasetManifest& manifest);

}  // namespace bwflow

#include "bwflow/data.hpp"

#include "bwflow/errors.hpp"

#include <cmath>
#include <queue>

namespace bwflow {

namespace {

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(what) + " must lie in [0, 1]");
}

bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

}  // namespace

Graph sbm_sample(const std::vector<Index>& block_sizes, double p_in, double p_out, Rng& rng) {
    check_probability(p_in, "p_in");
    check_probability(p_out, "p_out");
    std::vector<Index> block;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        if (block_sizes[b] < 0) throw InputError("block sizes must be nonnegative");
        block.insert(block.end(), static_cast<std::size_t>(block_sizes[b]), static_cast<Index>(b));
    }
    const auto n = static_cast<Index>(block.size());
    Graph g = Graph::empty(n, 0, true);
    for (Index j = 1; j < n; ++j) {
        for (Index i = 0; i < j; ++i) {
            const double p = block[static_cast<std::size_t>(i)] == block[static_cast<std::size_t>(j)] ? p_in : p_out;
            if (coin(rng, p)) g.w(i, j) = g.w(j, i) = 1.0;
        }
    }
    return g;
}

Graph tree_sample(Index n, Rng& rng) {
    if (n < 2) throw InputError("tree_sample needs n >= 2");
    Graph g = Graph::empty(n, 0, true);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::vector<Index> code(static_cast<std::size_t>(n - 2));
    for (Index& c : code) c = pick(rng);
    std::vector<Index> degree(static_cast<std::size_t>(n), 1);
    for (Index c : code) ++degree[static_cast<std::size_t>(c)];
    std::priority_queue<Index, std::vector<Index>, std::greater<>> leaves;
    for (Index v = 0; v < n; ++v)
        if (degree[static_cast<std::size_t>(v)] == 1) leaves.push(v);
    for (Index c : code) {
        const Index leaf = leaves.top();
        leaves.pop();
        g.w(leaf, c) = g.w(c, leaf) = 1.0;
        if (--degree[static_cast<std::size_t>(c)] == 1) leaves.push(c);
    }
    const Index a = leaves.top();
    leaves.pop();
    const Index b = leaves.top();
    g.w(a, b) = g.w(b, a) = 1.0;
    return g;
}

Graph er_sample(Index n, double p, Rng& rng) {
    check_probability(p, "p");
    if (n < 0) throw InputError("node count must be nonnegative");
    Graph g = Graph::empty(n, 0, true);
    for (Index j = 1; j < n; ++j)
        for (Index i = 0; i < j; ++i)
            if (coin(rng, p)) g.w(i, j) = g.w(j, i) = 1.0;
    return g;
}

std::string to_string(ReferenceKind kind) { return kind == ReferenceKind::absorbing ? "absorbing" : "marginal"; }

ReferenceKind parse_reference(std::string_view name) {
    if (name == "marginal") return ReferenceKind::marginal;
    if (name == "absorbing") return ReferenceKind::absorbing;
    throw InputError("unknown reference distribution '" + std::string(name) + "'");
}

void ReferenceDistribution::validate() const {
    check_probability(edge_marginal, "edge_marginal");
    if (node_marginal.size() > 0) {
        if ((node_marginal.array() < 0.0).any()) throw InputError("node_marginal entries must be nonnegative");
        if (std::abs(node_marginal.sum() - 1.0) > 1e-9) throw InputError("node_marginal must sum to 1");
    }
}

ReferenceDistribution estimate_marginal(const std::vector<Graph>& train) {
    if (train.empty()) throw InputError("estimate_marginal needs a nonempty training set");
    const Index k = train.front().num_features();
    double edges = 0.0;
    double slots = 0.0;
    Vector classes = Vector::Zero(k);
    for (const Graph& g : train) {
        if (g.num_features() != k) throw DimensionMismatch("training graphs differ in feature width");
        const double n = static_cast<double>(g.n());
        edges += static_cast<double>(edge_count(g.w));
        slots += n * (n - 1.0) / 2.0;
        for (Index c : feature_argmax(g.x))
            if (c >= 0) classes[c] += 1.0;
    }
    ReferenceDistribution ref;
    ref.kind = ReferenceKind::marginal;
    ref.edge_marginal = slots > 0.0 ? edges / slots : 0.0;
    if (k > 0) {
        const double total = classes.sum();
        ref.node_marginal = total > 0.0 ? Vector(classes / total) : Vector(Vector::Constant(k, 1.0 / k));
    }
    return ref;
}

Graph draw_reference(const ReferenceDistribution& ref, Index n, Index num_features, Rng& rng) {
    ref.validate();
    Graph g = Graph::empty(n, num_features, true);
    if (ref.kind == ReferenceKind::absorbing) return g;
    if (num_features > 0 && ref.node_marginal.size() != num_features) {
        throw DimensionMismatch("node_marginal length does not match the feature width");
    }
    for (Index j = 1; j < n; ++j)
        for (Index i = 0; i < j; ++i)
            if (coin(rng, ref.edge_marginal)) g.w(i, j) = g.w(j, i) = 1.0;
    if (num_features > 0) {
        std::discrete_distribution<Index> cat(ref.node_marginal.data(),
                                              ref.node_marginal.data() + ref.node_marginal.size());
        g.x.setZero();
        for (Index v = 0; v < n; ++v) g.x(v, cat(rng)) = 1.0;
    }
    return g;
}


Dataset generate_dataset(const DatasetManifest& m) {
    if (!(m.test_fraction >= 0.0 && m.test_fraction <= 1.0)) throw InputError("test_fraction must lie in [0, 1]");
    if (m.kind != "sbm" && m.kind != "tree" && m.kind != "er") {
        throw InputError("unknown dataset kind '" + m.kind + "'");
    }
    const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(m.count) * m.test_fraction));
    Dataset out;
    for (std::size_t i = 0; i < m.count; ++i) {
        Rng rng = substream(m.seed, "dataset", i);
        Graph g;
        if (m.kind == "sbm") {
            g = sbm_sample(m.block_sizes, m.p_in, m.p_out, rng);
        } else if (m.kind == "tree") {
            g = tree_sample(m.n, rng);
        } else {
            g = er_sample(m.n, m.p, rng);
        }
        (i < m.count - n_test ? out.train : out.test).push_back(std::move(g));
    }
    return out;
}

}  // namespace bwflow

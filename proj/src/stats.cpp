#include "bwflow/stats.hpp"

#include "bwflow/errors.hpp"
#include "bwflow/linalg.hpp"
#include "bwflow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <unordered_set>

namespace bwflow {

std::string to_string(StatKind kind) {
    switch (kind) {
        case StatKind::degree: return "degree";
        case StatKind::clustering: return "clustering";
        case StatKind::spectral: return "spectral";
    }
    return "degree";
}

StatKind parse_stat(std::string_view name) {
    if (name == "degree") return StatKind::degree;
    if (name == "clustering") return StatKind::clustering;
    if (name == "spectral") return StatKind::spectral;
    throw InputError("unknown statistic '" + std::string(name) + "'");
}

StatDescriptor StatDescriptor::standard(StatKind kind) {
    switch (kind) {
        case StatKind::degree: return {kind, 64, 0.0, 64.0};
        case StatKind::clustering: return {kind, 100, 0.0, 1.0};
        case StatKind::spectral: return {kind, 100, 0.0, 1.0};
    }
    return {};
}

std::vector<StatDescriptor> standard_stats() {
    return {StatDescriptor::standard(StatKind::degree), StatDescriptor::standard(StatKind::clustering),
            StatDescriptor::standard(StatKind::spectral)};
}

namespace {

void add_to_bin(Vector& hist, double value, const StatDescriptor& d) {
    const double pos = (value - d.lo) / (d.hi - d.lo) * static_cast<double>(d.bins);
    const double clamped = std::clamp(std::floor(pos), 0.0, static_cast<double>(d.bins - 1));
    hist[static_cast<Index>(clamped)] += 1.0;
}

std::vector<double> clustering_coefficients(const Matrix& e) {
    const Index n = e.rows();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (Index v = 0; v < n; ++v) {
        std::vector<Index> nbrs;
        for (Index u = 0; u < n; ++u)
            if (e(v, u) > 0.0) nbrs.push_back(u);
        const std::size_t k = nbrs.size();
        if (k < 2) continue;
        std::size_t closed = 0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                if (e(nbrs[a], nbrs[b]) > 0.0) ++closed;
        out[static_cast<std::size_t>(v)] = 2.0 * static_cast<double>(closed) / static_cast<double>(k * (k - 1));
    }
    return out;
}

}  // namespace

Vector stat_histogram(const Graph& g, const StatDescriptor& d) {
    if (d.bins < 2) throw InputError("StatDescriptor: bins must be at least 2");
    if (!(d.hi > d.lo)) throw InputError("StatDescriptor: empty range");
    Vector hist = Vector::Zero(static_cast<Index>(d.bins));
    const Index n = g.n();
    if (n == 0) {
        hist[0] = 1.0;
        return hist;
    }
    switch (d.kind) {
        case StatKind::degree: {
            const Vector deg = g.w.rowwise().sum();
            for (Index v = 0; v < n; ++v) add_to_bin(hist, deg[v], d);
            break;
        }
        case StatKind::clustering: {
            for (double c : clustering_coefficients(threshold_edges(g.w))) add_to_bin(hist, c, d);
            break;
        }
        case StatKind::spectral: {
            const Vector eig = linalg::eig_sym(linalg::symmetrize(laplacian(g.w))).eigenvalues;
            const double top = eig.maxCoeff();
            for (Index i = 0; i < eig.size(); ++i) add_to_bin(hist, top > 1e-12 ? eig[i] / top : 0.0, d);
            break;
        }
    }
    return hist / hist.sum();
}

std::vector<Vector> stat_histograms(const std::vector<Graph>& graphs, const StatDescriptor& d) {
    std::vector<Vector> out(graphs.size());
    parallel_for(graphs.size(), [&](std::size_t i) { out[i] = stat_histogram(graphs[i], d); });
    return out;
}

namespace {

void check_sets(const std::vector<Vector>& a, const std::vector<Vector>& b, double sigma) {
    if (a.empty() || b.empty()) throw InputError("mmd_sq needs nonempty sets");
    if (!(sigma > 0.0)) throw InputError("mmd_sq needs a positive bandwidth");
    const Index len = a.front().size();
    for (const auto* set : {&a, &b})
        for (const Vector& v : *set)
            if (v.size() != len) throw DimensionMismatch("mmd_sq: histogram lengths differ");
}

double kernel(const Vector& x, const Vector& y, double sigma) {
    return std::exp(-(x - y).squaredNorm() / (2.0 * sigma * sigma));
}

// Mean kernel value over X × Y. Row sums may be computed in parallel; the
// final reduction is always sequential so both variants agree bit for bit.
template <class RowLoop>
double mean_kernel(const std::vector<Vector>& x, const std::vector<Vector>& y, double sigma, RowLoop loop) {
    std::vector<double> rows(x.size(), 0.0);
    loop(x.size(), [&](std::size_t i) {
        double s = 0.0;
        for (const Vector& v : y) s += kernel(x[i], v, sigma);
        rows[i] = s;
    });
    double total = 0.0;
    for (double r : rows) total += r;
    return total / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

template <class RowLoop>
double mmd_impl(const std::vector<Vector>& a, const std::vector<Vector>& b, double sigma, RowLoop loop) {
    check_sets(a, b, sigma);
    const double value =
        mean_kernel(a, a, sigma, loop) + mean_kernel(b, b, sigma, loop) - 2.0 * mean_kernel(a, b, sigma, loop);
    return std::max(value, 0.0);
}

void serial_loop(std::size_t count, const std::function<void(std::size_t)>& body) {
    for (std::size_t i = 0; i < count; ++i) body(i);
}

void parallel_loop(std::size_t count, const std::function<void(std::size_t)>& body) { parallel_for(count, body); }

}  // namespace

double mmd_sq(const std::vector<Vector>& a, const std::vector<Vector>& b, double sigma) {
    return mmd_impl(a, b, sigma, parallel_loop);
}

double median_bandwidth(const std::vector<Vector>& vectors) {
    std::vector<double> dist;
    dist.reserve(vectors.size() * (vectors.size() > 0 ? vectors.size() - 1 : 0) / 2);
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = i + 1; j < vectors.size(); ++j) dist.push_back((vectors[i] - vectors[j]).norm());
    if (dist.empty()) return 1.0;
    const std::size_t mid = dist.size() / 2;
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
    double median = dist[mid];
    if (dist.size() % 2 == 0) {
        const double lower = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid));
        median = 0.5 * (median + lower);
    }
    return median > 0.0 ? median : 1.0;
}

namespace serial {

std::vector<Vector> stat_histograms(const std::vector<Graph>& graphs, const StatDescriptor& d) {
    std::vector<Vector> out;
    out.reserve(graphs.size());
    for (const Graph& g : graphs) out.push_back(stat_histogram(g, d));
    return out;
}

double mmd_sq(const std::vector<Vector>& a, const std::vector<Vector>& b, double sigma) {
    return mmd_impl(a, b, sigma, serial_loop);
}

}  // namespace serial

RatioReport a_ratio(const std::vector<Graph>& gen, const std::vector<Graph>& test,
                    const std::vector<Graph>& train, const std::vector<StatDescriptor>& stats) {
    if (gen.empty() || test.empty() || train.empty()) throw InputError("a_ratio needs nonempty graph sets");
    if (stats.empty()) throw InputError("a_ratio needs at least one statistic");
    RatioReport report;
    double sum = 0.0;
    for (const StatDescriptor& d : stats) {
        const std::vector<Vector> h_gen = stat_histograms(gen, d);
        const std::vector<Vector> h_test = stat_histograms(test, d);
        const std::vector<Vector> h_train = stat_histograms(train, d);
        std::vector<Vector> pooled = h_train;
        pooled.insert(pooled.end(), h_test.begin(), h_test.end());
        StatRatio r;
        r.stat = to_string(d.kind);
        r.sigma = median_bandwidth(pooled);
        r.mmd_gen_test = mmd_sq(h_gen, h_test, r.sigma);
        r.mmd_train_test = mmd_sq(h_train, h_test, r.sigma);
        r.ratio = std::max(r.mmd_gen_test, kMmdFloor) / std::max(r.mmd_train_test, kMmdFloor);
        sum += r.ratio;
        report.per_stat.push_back(r);
    }
    report.a_ratio = sum / static_cast<double>(stats.size());
    return report;
}

std::string to_string(Validity v) {
    switch (v) {
        case Validity::is_connected: return "is_connected";
        case Validity::is_tree: return "is_tree";
        case Validity::always_true: return "always_true";
    }
    return "always_true";
}

Validity parse_validity(std::string_view name) {
    if (name == "is_connected") return Validity::is_connected;
    if (name == "is_tree") return Validity::is_tree;
    if (name == "always_true") return Validity::always_true;
    throw InputError("unknown validity oracle '" + std::string(name) + "'");
}

bool is_connected(const Graph& g) {
    const Index n = g.n();
    if (n == 0) return false;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::queue<Index> frontier;
    frontier.push(0);
    seen[0] = 1;
    Index reached = 1;
    while (!frontier.empty()) {
        const Index v = frontier.front();
        frontier.pop();
        for (Index u = 0; u < n; ++u) {
            if (!seen[static_cast<std::size_t>(u)] && u != v && g.w(v, u) > 0.5) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++reached;
                frontier.push(u);
            }
        }
    }
    return reached == n;
}

bool is_tree(const Graph& g) {
    return g.n() > 0 && edge_count(g.w) == static_cast<std::size_t>(g.n() - 1) && is_connected(g);
}

bool is_valid(const Graph& g, Validity v) {
    switch (v) {
        case Validity::is_connected: return is_connected(g);
        case Validity::is_tree: return is_tree(g);
        case Validity::always_true: return true;
    }
    return true;
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    return h;
}

}  // namespace

std::uint64_t wl_hash(const Graph& g, int rounds) {
    const Index n = g.n();
    const Matrix e = threshold_edges(g.w);
    const std::vector<Index> classes = feature_argmax(g.x);
    std::vector<std::uint64_t> labels(static_cast<std::size_t>(n));
    for (Index v = 0; v < n; ++v) {
        const auto deg = static_cast<std::uint64_t>(e.row(v).sum());
        labels[static_cast<std::size_t>(v)] =
            mix(mix(0x51ed27ULL, deg), static_cast<std::uint64_t>(classes[static_cast<std::size_t>(v)] + 1));
    }
    for (int r = 0; r < rounds; ++r) {
        std::vector<std::uint64_t> next(labels.size());
        for (Index v = 0; v < n; ++v) {
            std::vector<std::uint64_t> nbr;
            for (Index u = 0; u < n; ++u)
                if (e(v, u) > 0.0) nbr.push_back(labels[static_cast<std::size_t>(u)]);
            std::sort(nbr.begin(), nbr.end());
            std::uint64_t h = mix(0xa0761d6478bd642fULL, labels[static_cast<std::size_t>(v)]);
            for (std::uint64_t l : nbr) h = mix(h, l);
            next[static_cast<std::size_t>(v)] = h;
        }
        labels = std::move(next);
    }
    std::sort(labels.begin(), labels.end());
    std::uint64_t digest = mix(0xe7037ed1a0b428dbULL, static_cast<std::uint64_t>(n));
    digest = mix(digest, static_cast<std::uint64_t>(g.num_features()));
    for (std::uint64_t l : labels) digest = mix(digest, l);
    return digest;
}

VunResult vun(const std::vector<Graph>& gen, const std::vector<Graph>& train, Validity validity) {
    if (gen.empty()) throw InputError("vun needs at least one generated graph");
    std::unordered_set<std::uint64_t> train_hashes;
    for (const Graph& g : train) train_hashes.insert(wl_hash(g));
    std::unordered_set<std::uint64_t> seen;
    std::size_t valid = 0;
    std::size_t novel = 0;
    std::size_t all_three = 0;
    for (const Graph& g : gen) {
        const std::uint64_t h = wl_hash(g);
        const bool ok = is_valid(g, validity);
        const bool first = seen.insert(h).second;
        const bool is_novel = train_hashes.count(h) == 0;
        valid += ok;
        novel += is_novel;
        all_three += ok && first && is_novel;
    }
    const double total = static_cast<double>(gen.size());
    VunResult r;
    r.valid = 100.0 * static_cast<double>(valid) / total;
    r.unique = 100.0 * static_cast<double>(seen.size()) / total;
    r.novel = 100.0 * static_cast<double>(novel) / total;
    r.vun = 100.0 * static_cast<double>(all_three) / total;
    return r;
}

}  // namespace bwflow

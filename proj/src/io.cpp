#include "bwflow/io.hpp"

#include "bwflow/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bwflow::io {

namespace {

template <class T>
T require(const Json& j, const char* key) {
    if (!j.contains(key)) throw InputError(std::string("missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw InputError(std::string("bad value for '") + key + "': " + e.what());
    }
}

template <class T>
T optional(const Json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw InputError(std::string("bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

Json to_json(const Graph& g) {
    Json edges = Json::array();
    for (Index j = 1; j < g.n(); ++j) {
        for (Index i = 0; i < j; ++i) {
            if (g.w(i, j) != 0.0) edges.push_back(Json::array({i, j, g.w(i, j)}));
        }
    }
    Json out{{"n", g.n()}, {"edges", edges}, {"discrete", g.discrete}};
    if (g.num_features() > 0) {
        Json rows = Json::array();
        for (Index v = 0; v < g.n(); ++v) {
            Json row = Json::array();
            for (Index c = 0; c < g.num_features(); ++c) row.push_back(g.x(v, c));
            rows.push_back(row);
        }
        out["features"] = rows;
    }
    return out;
}

Graph graph_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("graph must be a JSON object");
    const auto n = require<long long>(j, "n");
    if (n < 0) throw InputError("graph node count must be nonnegative");
    Graph g;
    g.w = Matrix::Zero(n, n);
    g.discrete = optional<bool>(j, "discrete", false);
    if (j.contains("edges")) {
        if (!j.at("edges").is_array()) throw InputError("'edges' must be an array");
        for (const Json& e : j.at("edges")) {
            if (!e.is_array() || e.size() < 2 || e.size() > 3) throw InputError("edge must be [u, v] or [u, v, w]");
            long long u = 0;
            long long v = 0;
            double w = 1.0;
            try {
                u = e[0].get<long long>();
                v = e[1].get<long long>();
                if (e.size() == 3) w = e[2].get<double>();
            } catch (const Json::exception& ex) {
                throw InputError(std::string("bad edge entry: ") + ex.what());
            }
            if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("edge endpoint out of range");
            if (u == v) throw InputError("self-loops are not allowed");
            if (!std::isfinite(w) || w < 0.0) throw InputError("edge weights must be finite and nonnegative");
            g.w(u, v) = g.w(v, u) = w;
        }
    }
    if (j.contains("features")) {
        const Json& rows = j.at("features");
        if (!rows.is_array() || static_cast<long long>(rows.size()) != n) {
            throw DimensionMismatch("'features' must have one row per node");
        }
        const auto k = n > 0 ? static_cast<Index>(rows[0].size()) : 0;
        g.x = Matrix::Zero(n, k);
        for (Index v = 0; v < n; ++v) {
            if (!rows[v].is_array() || static_cast<Index>(rows[v].size()) != k) {
                throw DimensionMismatch("feature rows must share one width");
            }
            for (Index c = 0; c < k; ++c) {
                try {
                    g.x(v, c) = rows[v][c].get<double>();
                } catch (const Json::exception& ex) {
                    throw InputError(std::string("bad feature entry: ") + ex.what());
                }
            }
        }
    } else {
        g.x = Matrix::Zero(n, 0);
    }
    return g;
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("malformed JSON in '" + path.string() + "': " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::vector<Graph> read_graphs(const std::filesystem::path& path) {
    const Json j = read_json(path);
    std::vector<Graph> out;
    if (j.is_array()) {
        for (const Json& g : j) out.push_back(graph_from_json(g));
    } else {
        out.push_back(graph_from_json(j));
    }
    if (out.empty()) throw InputError("'" + path.string() + "' holds no graphs");
    return out;
}

void write_graphs(const std::filesystem::path& path, const std::vector<Graph>& graphs) {
    Json arr = Json::array();
    for (const Graph& g : graphs) arr.push_back(to_json(g));
    write_json(path, arr);
}

Json to_json(const FlowConfig& cfg) {
    return Json{{"regime", to_string(cfg.regime)},
                {"strategy", to_string(cfg.strategy)},
                {"steps", cfg.steps},
                {"clamp_eps", cfg.clamp_eps},
                {"time_distortion", to_string(cfg.time_distortion)},
                {"seed", cfg.seed},
                {"nu", cfg.nu},
                {"scheme", to_string(cfg.scheme.kind)},
                {"scheme_eps", cfg.scheme.eps}};
}

FlowConfig flow_config_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("flow config must be a JSON object");
    FlowConfig cfg;
    cfg.regime = parse_regime(optional<std::string>(j, "regime", to_string(cfg.regime)));
    cfg.strategy = parse_strategy(optional<std::string>(j, "strategy", to_string(cfg.strategy)));
    const auto steps = optional<long long>(j, "steps", static_cast<long long>(cfg.steps));
    if (steps < 1) throw InputError("steps must be at least 1");
    cfg.steps = static_cast<std::size_t>(steps);
    cfg.clamp_eps = optional<double>(j, "clamp_eps", cfg.clamp_eps);
    cfg.time_distortion =
        parse_time_distortion(optional<std::string>(j, "time_distortion", to_string(cfg.time_distortion)));
    cfg.seed = require<std::uint64_t>(j, "seed");
    cfg.nu = optional<double>(j, "nu", cfg.nu);
    cfg.scheme.kind = parse_scheme(optional<std::string>(j, "scheme", to_string(cfg.scheme.kind)));
    cfg.scheme.eps = optional<double>(j, "scheme_eps", cfg.scheme.eps);
    cfg.validate();
    return cfg;
}

namespace {

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

Json to_json(const PathPoint& p) { return Json{{"t", p.t}, {"w", matrix_json(p.w)}, {"x", matrix_json(p.x)}}; }

Json to_json(const ReferenceDistribution& ref) {
    Json nodes = Json::array();
    for (Index c = 0; c < ref.node_marginal.size(); ++c) nodes.push_back(ref.node_marginal[c]);
    return Json{{"kind", to_string(ref.kind)}, {"edge_marginal", ref.edge_marginal}, {"node_marginal", nodes}};
}

DatasetManifest dataset_manifest_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("dataset manifest must be a JSON object");
    DatasetManifest m;
    m.kind = require<std::string>(j, "kind");
    if (m.kind != "sbm" && m.kind != "tree" && m.kind != "er") throw InputError("unknown dataset kind '" + m.kind + "'");
    const auto count = require<long long>(j, "count");
    if (count < 1) throw InputError("count must be positive");
    m.count = static_cast<std::size_t>(count);
    m.seed = require<std::uint64_t>(j, "seed");
    const Json params = j.contains("params") ? j.at("params") : Json::object();
    if (!params.is_object()) throw InputError("'params' must be an object");
    m.test_fraction = optional<double>(params, "test_fraction", m.test_fraction);
    if (m.kind == "sbm") {
        m.block_sizes = optional<std::vector<Index>>(params, "block_sizes", m.block_sizes);
        m.p_in = optional<double>(params, "p_in", m.p_in);
        m.p_out = optional<double>(params, "p_out", m.p_out);
    } else {
        m.n = optional<Index>(params, "n", m.n);
        if (m.kind == "er") m.p = optional<double>(params, "p", m.p);
    }
    return m;
}

Json to_json(const DatasetManifest& m) {
    Json params{{"test_fraction", m.test_fraction}};
    if (m.kind == "sbm") {
        params["block_sizes"] = m.block_sizes;
        params["p_in"] = m.p_in;
        params["p_out"] = m.p_out;
    } else {
        params["n"] = m.n;
        if (m.kind == "er") params["p"] = m.p;
    }
    return Json{{"kind", m.kind}, {"params", params}, {"count", m.count}, {"seed", m.seed}};
}

Json to_json(const EvalReport& r) {
    Json per_stat = Json::object();
    Json stats = Json::array();
    for (const StatRatio& s : r.ratios.per_stat) {
        stats.push_back(s.stat);
        per_stat[s.stat] = Json{{"mmd_gen_test", s.mmd_gen_test},
                                {"mmd_train_test", s.mmd_train_test},
                                {"ratio", s.ratio},
                                {"sigma", s.sigma}};
    }
    return Json{{"statistics", stats},
                {"per_stat", per_stat},
                {"a_ratio", r.ratios.a_ratio},
                {"vun",
                 {{"validity", r.validity},
                  {"valid", r.vun.valid},
                  {"unique", r.vun.unique},
                  {"novel", r.vun.novel},
                  {"vun", r.vun.vun}}},
                {"generated", r.generated}};
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const RatioReport& r) {
    std::ostringstream out;
    out << "stat,mmd_gen_test,mmd_train_test,ratio\n";
    for (const StatRatio& s : r.per_stat) {
        out << s.stat << ',' << format_number(s.mmd_gen_test) << ',' << format_number(s.mmd_train_test) << ','
            << format_number(s.ratio) << '\n';
    }
    return out.str();
}

}  // namespace bwflow::io

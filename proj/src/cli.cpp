#include "bwflow/cli.hpp"

#include "bwflow/analysis.hpp"
#include "bwflow/data.hpp"
#include "bwflow/denoiser.hpp"
#include "bwflow/errors.hpp"
#include "bwflow/flow.hpp"
#include "bwflow/io.hpp"
#include "bwflow/metric.hpp"
#include "bwflow/stats.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

namespace bwflow::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

Json run_manifest(const std::string& command, Json config, const std::vector<std::string>& inputs,
                  const std::vector<std::string>& outputs, std::uint64_t seed) {
    return Json{{"command", command}, {"config", std::move(config)}, {"inputs", inputs},
                {"outputs", outputs}, {"seed", seed},            {"version", kVersion}};
}

struct GenerateArgs {
    std::string manifest;
    std::string out;
};

void cmd_generate(const GenerateArgs& a, std::ostream& out) {
    const DatasetManifest m = io::dataset_manifest_from_json(io::read_json(a.manifest));
    const Dataset data = generate_dataset(m);
    const fs::path dir(a.out);
    io::write_graphs(dir / "train.json", data.train);
    io::write_graphs(dir / "test.json", data.test);
    io::write_json(dir / "manifest.json",
                   run_manifest("generate", io::to_json(m), {a.manifest}, {"train.json", "test.json"}, m.seed));
    out << "wrote " << data.train.size() << " train and " << data.test.size() << " test graphs to " << a.out
        << '\n';
}

struct InterpolateArgs {
    std::string g0;
    std::string g1;
    std::string scheme = "bw";
    std::size_t steps = 11;
    std::string out;
    double nu = 0.0;
    double eps = 1e-6;
    std::string test;
    std::uint64_t seed = 0;
    bool discrete = false;
};

void cmd_interpolate(const InterpolateArgs& a, std::ostream& out) {
    const std::vector<Graph> g0s = io::read_graphs(a.g0);
    const std::vector<Graph> g1s = io::read_graphs(a.g1);
    FlowConfig cfg;
    cfg.regime = a.discrete ? Regime::discrete : Regime::continuous;
    cfg.scheme = InterpScheme{parse_scheme(a.scheme), a.eps};
    cfg.nu = a.nu;
    cfg.seed = a.seed;
    cfg.validate();
    if (a.steps < 2) throw InputError("--steps must be at least 2");
    const std::vector<double> times = uniform_times(a.steps);

    std::vector<CurvePoint> curve;
    if (a.test.empty()) {
        curve = path_weight_curve(g0s, g1s, cfg, times);
    } else {
        curve = path_ratio_curve(g0s, g1s, io::read_graphs(a.test), g1s, cfg, times);
    }

    std::ostringstream csv;
    csv << "t,scheme,stat,value,ratio\n";
    for (const CurvePoint& p : curve) {
        const std::string t = io::format_number(p.t);
        csv << t << ',' << a.scheme << ",mean_edge_weight," << io::format_number(p.mean_edge_weight) << ",\n";
        csv << t << ',' << a.scheme << ",min_edge_weight," << io::format_number(p.min_edge_weight) << ",\n";
        if (a.test.empty()) continue;
        for (const StatRatio& s : p.report.per_stat) {
            csv << t << ',' << a.scheme << ',' << s.stat << ',' << io::format_number(s.mmd_gen_test) << ','
                << io::format_number(s.ratio) << '\n';
        }
        csv << t << ',' << a.scheme << ",a_ratio," << io::format_number(p.report.a_ratio) << ','
            << io::format_number(p.report.a_ratio) << '\n';
    }

    // Path points of the first pair.
    const GraphMRF m0 = GraphMRF::from_graph(g0s.front(), cfg.nu);
    const GraphMRF m1 = GraphMRF::from_graph(g1s.front(), cfg.nu);
    Json points = Json::array();
    for (const PathPoint& p : path_sweep(m0, m1, cfg.scheme, a.steps)) points.push_back(io::to_json(p));

    const fs::path dir(a.out);
    io::write_text(dir / "interpolation.csv", csv.str());
    io::write_json(dir / "path_points.json", points);
    Json config{{"scheme", a.scheme}, {"steps", a.steps}, {"nu", a.nu}, {"scheme_eps", a.eps},
                {"discrete", a.discrete}};
    std::vector<std::string> inputs{a.g0, a.g1};
    if (!a.test.empty()) inputs.push_back(a.test);
    io::write_json(dir / "manifest.json",
                   run_manifest("interpolate", config, inputs, {"interpolation.csv", "path_points.json"}, a.seed));
    out << "wrote " << curve.size() << " time points to " << a.out << '\n';
}

struct SampleArgs {
    std::string config;
    std::string train;
    std::size_t count = 0;
    std::string out;
    std::string target;
    std::string test;
    std::string validity = "always_true";
};

std::unique_ptr<Denoiser> make_denoiser(const Json& desc, const std::vector<Graph>& train,
                                        const std::string& target_path) {
    const std::string kind = desc.is_string() ? desc.get<std::string>() : desc.value("kind", std::string("knn"));
    if (kind == "oracle") {
        if (target_path.empty()) throw InputError("the oracle denoiser needs --target");
        return std::make_unique<OracleDenoiser>(io::read_graphs(target_path).front());
    }
    if (kind == "knn") {
        const auto k = desc.is_object() ? desc.value("k", 1LL) : 1LL;
        if (k < 1) throw InputError("denoiser k must be at least 1");
        return std::make_unique<KnnDenoiser>(train, static_cast<std::size_t>(k));
    }
    if (kind == "uniform") return std::make_unique<UniformDenoiser>(train.front().n(), train.front().num_features());
    throw InputError("unknown denoiser '" + kind + "'");
}

void cmd_sample(const SampleArgs& a, std::ostream& out) {
    const Json config = io::read_json(a.config);
    const FlowConfig cfg = io::flow_config_from_json(config);
    const std::vector<Graph> train = io::read_graphs(a.train);
    const std::string test_path = a.test.empty() ? (fs::path(a.train).parent_path() / "test.json").string() : a.test;
    if (!fs::exists(test_path)) throw InputError("test set '" + test_path + "' not found; pass --test");
    const std::vector<Graph> test = io::read_graphs(test_path);
    if (a.count < 1) throw InputError("--count must be positive");

    for (const Graph& g : train) {
        if (cfg.regime == Regime::discrete) {
            const bool binary = ((g.w.array() == 0.0) || (g.w.array() == 1.0)).all();
            if (!binary) throw InputError("discrete regime needs binary training graphs");
        }
    }
    const Validity validity = parse_validity(config.value("validity", a.validity));
    const std::unique_ptr<Denoiser> denoiser =
        make_denoiser(config.contains("denoiser") ? config.at("denoiser") : Json("knn"), train, a.target);

    ReferenceDistribution ref = estimate_marginal(train);
    ref.kind = parse_reference(config.value("reference", std::string("marginal")));
    const Index n = train.front().n();
    const Index k = train.front().num_features();
    std::vector<Graph> g0s;
    g0s.reserve(a.count);
    for (std::size_t i = 0; i < a.count; ++i) {
        Rng rng = substream(cfg.seed, "reference", i);
        Graph g = draw_reference(ref, n, k, rng);
        g.discrete = cfg.regime == Regime::discrete;
        g0s.push_back(std::move(g));
    }

    const std::vector<SampleResult> results = sample_batch(*denoiser, g0s, cfg);
    std::vector<Graph> generated;
    generated.reserve(results.size());
    for (const SampleResult& r : results) generated.push_back(r.graph);

    EvalReport report;
    report.ratios = a_ratio(generated, test, train, standard_stats());
    report.vun = vun(generated, train, validity);
    report.validity = to_string(validity);
    report.generated = generated.size();

    const fs::path dir(a.out);
    io::write_graphs(dir / "graphs.json", generated);
    io::write_json(dir / "report.json", io::to_json(report));
    io::write_text(dir / "report.csv", io::to_csv(report.ratios));
    Json cfg_json = io::to_json(cfg);
    cfg_json["reference"] = io::to_json(ref);
    cfg_json["denoiser"] = config.contains("denoiser") ? config.at("denoiser") : Json("knn");
    cfg_json["validity"] = report.validity;
    cfg_json["count"] = a.count;
    std::vector<std::string> inputs{a.config, a.train, test_path};
    if (!a.target.empty()) inputs.push_back(a.target);
    io::write_json(dir / "manifest.json", run_manifest("sample", cfg_json, inputs,
                                                       {"graphs.json", "report.json", "report.csv"}, cfg.seed));
    out << "generated " << generated.size() << " graphs; A.Ratio " << io::format_number(report.ratios.a_ratio)
        << ", valid " << io::format_number(report.vun.valid) << "%\n";
}

struct DistanceArgs {
    std::string g0;
    std::string g1;
    double beta = 1.0;
    double nu = 0.0;
    bool json = false;
};

void cmd_distance(const DistanceArgs& a, std::ostream& out) {
    const Graph g0 = io::read_graphs(a.g0).front();
    const Graph g1 = io::read_graphs(a.g1).front();
    const BwDistance d =
        graph_bw_distance(GraphMRF::from_graph(g0, a.nu, a.beta), GraphMRF::from_graph(g1, a.nu, a.beta));
    if (a.json) {
        out << Json{{"d_bw", d.total}, {"mean_term", d.mean_term}, {"covariance_term", d.covariance_term},
                    {"beta", a.beta}, {"nu", a.nu}}
                   .dump(2)
            << '\n';
    } else {
        out << "d_bw " << io::format_number(d.total) << '\n'
            << "mean_term " << io::format_number(d.mean_term) << '\n'
            << "covariance_term " << io::format_number(d.covariance_term) << '\n';
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bures-Wasserstein flow matching toolkit for graphs", "bwflow"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate a synthetic dataset from a manifest");
    generate->add_option("manifest", gen.manifest, "Dataset manifest JSON")->required();
    generate->add_option("--out", gen.out, "Output directory")->required();

    InterpolateArgs interp;
    auto* interpolate = app.add_subcommand("interpolate", "Sweep a probability path between graphs");
    interpolate->add_option("g0", interp.g0, "Source graph(s) JSON")->required();
    interpolate->add_option("g1", interp.g1, "Target graph(s) JSON")->required();
    interpolate->add_option("--scheme", interp.scheme, "bw, linear, geometric or harmonic");
    interpolate->add_option("--steps", interp.steps, "Number of time points (>= 2)");
    interpolate->add_option("--out", interp.out, "Output directory")->required();
    interpolate->add_option("--nu", interp.nu, "Precision regularizer");
    interpolate->add_option("--eps", interp.eps, "Spectral floor for geometric/harmonic");
    interpolate->add_option("--test", interp.test, "Test set for MMD ratios");
    interpolate->add_option("--seed", interp.seed, "Seed for discrete path draws");
    interpolate->add_flag("--discrete", interp.discrete, "Draw Bernoulli graphs along the path");

    SampleArgs smp;
    auto* sample_cmd = app.add_subcommand("sample", "Generate graphs with a flow sampler");
    sample_cmd->add_option("config", smp.config, "Flow config JSON")->required();
    sample_cmd->add_option("train", smp.train, "Training set JSON")->required();
    sample_cmd->add_option("--count", smp.count, "Number of graphs")->required();
    sample_cmd->add_option("--out", smp.out, "Output directory")->required();
    sample_cmd->add_option("--target", smp.target, "Target graph for the oracle denoiser");
    sample_cmd->add_option("--test", smp.test, "Test set (default: test.json next to the training set)");
    sample_cmd->add_option("--validity", smp.validity, "is_connected, is_tree or always_true");

    DistanceArgs dist;
    auto* distance = app.add_subcommand("distance", "Graph Bures-Wasserstein distance");
    distance->add_option("g0", dist.g0, "First graph JSON")->required();
    distance->add_option("g1", dist.g1, "Second graph JSON")->required();
    distance->add_option("--beta", dist.beta, "Trace-term weight");
    distance->add_option("--nu", dist.nu, "Precision regularizer");
    distance->add_flag("--json", dist.json, "Print JSON");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed()) cmd_generate(gen, out);
        if (interpolate->parsed()) cmd_interpolate(interp, out);
        if (sample_cmd->parsed()) cmd_sample(smp, out);
        if (distance->parsed()) cmd_distance(dist, out);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return 2;
    } catch (const MathError& e) {
        err << "math error: " << e.what() << '\n';
        return 3;
    } catch (const Json::exception& e) {
        err << "input error: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "input error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace bwflow::cli

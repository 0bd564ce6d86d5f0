#pragma once

// JSON / CSV formats shared by the CLI.

#include "bwflow/analysis.hpp"
#include "bwflow/data.hpp"
#include "bwflow/flow.hpp"
#include "bwflow/stats.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace bwflow::io {

using Json = nlohmann::json;

/// {"n": n, "edges": [[u, v, w], ...] with u < v, "features": [[...], ...],
///  "discrete": bool}. "features" and "discrete" are optional on input.
Json to_json(const Graph& g);
Graph graph_from_json(const Json& j);

/// A file holds either one graph object or an array of them.
std::vector<Graph> read_graphs(const std::filesystem::path& path);
void write_graphs(const std::filesystem::path& path, const std::vector<Graph>& graphs);

Json to_json(const FlowConfig& cfg);
/// Unknown keys are ignored; "seed" is mandatory.
FlowConfig flow_config_from_json(const Json& j);

Json to_json(const PathPoint& p);
Json to_json(const ReferenceDistribution& ref);

DatasetManifest dataset_manifest_from_json(const Json& j);
Json to_json(const DatasetManifest& m);

Json to_json(const EvalReport& r);
/// Header "stat,mmd_gen_test,mmd_train_test,ratio" plus one row per statistic.
std::string to_csv(const RatioReport& r);

Json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline; byte-stable for equal content.
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

}  // namespace bwflow::io

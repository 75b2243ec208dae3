#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "contagion/cascade.hpp"
#include "contagion/configmodel.hpp"
#include "contagion/limit_model.hpp"
#include "contagion/network.hpp"

namespace contagion {

using Json = nlohmann::json;

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
/// Strict parse of a whole field; throws `Error("parse_error")`.
double parse_double(const std::string& text);

/// { "n", "recovery", "gamma": [...], "edges": [[src, dst, weight], ...],
///   "multigraph" }. Reading accepts a missing "multigraph" key and infers it
/// from the edge list.
Json network_to_json(const FinancialNetwork& network);
FinancialNetwork network_from_json(const Json& doc);

/// nodes.csv `id,gamma` and edges.csv `src,dst,exposure`, both with header rows.
/// The recovery rate is not part of the CSV pair.
void save_network_csv(const FinancialNetwork& network, const std::filesystem::path& nodes_csv,
                      const std::filesystem::path& edges_csv);
FinancialNetwork load_network_csv(const std::filesystem::path& nodes_csv, const std::filesystem::path& edges_csv,
                                  double recovery = 0.0);

/// JSON file, or a directory holding nodes.csv and edges.csv.
FinancialNetwork load_network(const std::filesystem::path& path, double csv_recovery = 0.0);
void save_network_json(const FinancialNetwork& network, const std::filesystem::path& path);

/// { "mu": [[j, k, prob], ...], "p": [[j, k, theta, prob], ...] }
Json model_to_json(const LimitModel& model);
LimitModel model_from_json(const Json& doc);
LimitModel load_model(const std::filesystem::path& path);

/// { "fraction", "rounds_used", "final": [ids], "round_sizes": [...] }
Json cascade_to_json(const CascadeResult& result);

/// CSV `t,D,D_minus,<one column per class>` plus a manifest JSON listing the
/// classes in column order.
void write_trajectory(const MarkovTrajectory& trajectory, const std::filesystem::path& csv,
                      const std::filesystem::path& manifest);

/// CSV `src,dst,multiplicity`, sorted by (src, dst).
void write_multigraph_csv(const Multigraph& graph, const std::filesystem::path& path);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace contagion

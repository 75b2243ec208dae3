#include "contagion/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "contagion/error.hpp"

namespace contagion {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) throw Error("parse_error", "not a number: '" + text + "'");
  return value;
}

namespace {

std::uint64_t parse_index(const std::string& text) {
  const double v = parse_double(text);
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
    throw Error("parse_error", "not a node id: '" + text + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path.string());
  return out;
}

template <typename T>
T field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw Error("parse_error", std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse_error", std::string("bad field '") + key + "': " + e.what());
  }
}

bool infer_multigraph(std::span<const EdgeSpec> edges) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (const auto& e : edges) {
    if (e.source == e.target) return true;
    pairs.emplace_back(e.source, e.target);
  }
  std::sort(pairs.begin(), pairs.end());
  return std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end();
}

}  // namespace

Json network_to_json(const FinancialNetwork& network) {
  Json edges = Json::array();
  for (const auto& e : network.edge_list()) edges.push_back(Json::array({e.source, e.target, e.weight}));
  Json gamma = Json::array();
  for (double g : network.gammas()) gamma.push_back(g);
  return Json{{"n", network.size()},
              {"recovery", network.recovery()},
              {"gamma", std::move(gamma)},
              {"edges", std::move(edges)},
              {"multigraph", network.multigraph()}};
}

FinancialNetwork network_from_json(const Json& doc) {
  if (!doc.is_object()) throw Error("parse_error", "network document must be an object");
  const auto n = field<std::size_t>(doc, "n");
  auto gammas = field<std::vector<double>>(doc, "gamma");
  if (gammas.size() != n) throw Error("invalid_network", "gamma has " + std::to_string(gammas.size()) + " entries, n = " + std::to_string(n));
  const auto recovery = field<double>(doc, "recovery");
  std::vector<EdgeSpec> edges;
  for (const auto& e : field<Json>(doc, "edges")) {
    if (!e.is_array() || e.size() != 3) throw Error("parse_error", "edges must be [src, dst, weight] triples");
    const auto src = e[0].get<double>(), dst = e[1].get<double>();
    if (src < 0 || dst < 0 || src >= static_cast<double>(n) || dst >= static_cast<double>(n) ||
        src != static_cast<NodeId>(src) || dst != static_cast<NodeId>(dst)) {
      throw Error("invalid_network", "edge endpoint out of range");
    }
    edges.push_back({static_cast<NodeId>(src), static_cast<NodeId>(dst), e[2].get<double>()});
  }
  const bool multigraph = doc.contains("multigraph") ? field<bool>(doc, "multigraph") : infer_multigraph(edges);
  return FinancialNetwork::build(edges, std::move(gammas), recovery, multigraph);
}

void save_network_csv(const FinancialNetwork& network, const fs::path& nodes_csv, const fs::path& edges_csv) {
  auto nodes = open_out(nodes_csv);
  nodes << "id,gamma\n";
  for (NodeId i = 0; i < network.size(); ++i) nodes << i << ',' << format_double(network.gamma(i)) << '\n';
  auto edges = open_out(edges_csv);
  edges << "src,dst,exposure\n";
  for (const auto& e : network.edge_list()) {
    edges << e.source << ',' << e.target << ',' << format_double(e.weight) << '\n';
  }
}

FinancialNetwork load_network_csv(const fs::path& nodes_csv, const fs::path& edges_csv, double recovery) {
  auto nodes = open_in(nodes_csv);
  std::string line;
  if (!std::getline(nodes, line)) throw Error("parse_error", "empty nodes file");
  std::map<std::uint64_t, double> by_id;
  while (std::getline(nodes, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != 2) throw Error("parse_error", "nodes row must be id,gamma: '" + line + "'");
    if (!by_id.emplace(parse_index(f[0]), parse_double(f[1])).second) {
      throw Error("invalid_network", "duplicate node id in " + nodes_csv.string());
    }
  }
  std::vector<double> gammas;
  for (const auto& [id, g] : by_id) {
    if (id != gammas.size()) throw Error("invalid_network", "node ids must be 0..n-1");
    gammas.push_back(g);
  }
  auto edges_in = open_in(edges_csv);
  if (!std::getline(edges_in, line)) throw Error("parse_error", "empty edges file");
  std::vector<EdgeSpec> edges;
  while (std::getline(edges_in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != 3) throw Error("parse_error", "edges row must be src,dst,exposure: '" + line + "'");
    const auto src = parse_index(f[0]), dst = parse_index(f[1]);
    if (src >= gammas.size() || dst >= gammas.size()) throw Error("invalid_network", "edge endpoint out of range");
    edges.push_back({static_cast<NodeId>(src), static_cast<NodeId>(dst), parse_double(f[2])});
  }
  const bool multigraph = infer_multigraph(edges);
  return FinancialNetwork::build(edges, std::move(gammas), recovery, multigraph);
}

FinancialNetwork load_network(const fs::path& path, double csv_recovery) {
  if (fs::is_directory(path)) return load_network_csv(path / "nodes.csv", path / "edges.csv", csv_recovery);
  return network_from_json(read_json_file(path));
}

void save_network_json(const FinancialNetwork& network, const fs::path& path) {
  write_text_file(path, network_to_json(network).dump() + "\n");
}

Json model_to_json(const LimitModel& model) {
  Json mu = Json::array(), p = Json::array();
  for (const auto& c : model.classes()) {
    mu.push_back(Json::array({c.out_degree, c.in_degree, c.mass}));
    for (std::uint32_t t = 0; t < c.threshold.size(); ++t) {
      if (c.threshold[t] != 0.0) p.push_back(Json::array({c.out_degree, c.in_degree, t, c.threshold[t]}));
    }
  }
  return Json{{"mu", std::move(mu)}, {"p", std::move(p)}};
}

LimitModel model_from_json(const Json& doc) {
  if (!doc.is_object()) throw Error("parse_error", "model document must be an object");
  std::map<std::pair<std::uint32_t, std::uint32_t>, ClassDistribution> classes;
  for (const auto& row : field<Json>(doc, "mu")) {
    if (!row.is_array() || row.size() != 3) throw Error("parse_error", "mu rows must be [j, k, prob]");
    const auto j = row[0].get<std::uint32_t>(), k = row[1].get<std::uint32_t>();
    auto [it, fresh] = classes.try_emplace({j, k});
    if (!fresh) throw Error("invalid_model", "duplicate class in mu");
    it->second.out_degree = j;
    it->second.in_degree = k;
    it->second.mass = row[2].get<double>();
    it->second.threshold.assign(j + 1, 0.0);
  }
  for (const auto& row : field<Json>(doc, "p")) {
    if (!row.is_array() || row.size() != 4) throw Error("parse_error", "p rows must be [j, k, theta, prob]");
    const auto j = row[0].get<std::uint32_t>(), k = row[1].get<std::uint32_t>(), t = row[2].get<std::uint32_t>();
    auto it = classes.find({j, k});
    if (it == classes.end()) throw Error("invalid_model", "p refers to a class missing from mu");
    if (t > j) throw Error("invalid_model", "theta must not exceed j in p rows");
    it->second.threshold[t] = row[3].get<double>();
  }
  std::vector<ClassDistribution> list;
  for (auto& [key, c] : classes) list.push_back(std::move(c));
  return LimitModel(std::move(list));
}

LimitModel load_model(const fs::path& path) { return model_from_json(read_json_file(path)); }

Json cascade_to_json(const CascadeResult& result) {
  return Json{{"fraction", result.fraction},
              {"rounds_used", result.rounds_used},
              {"final", result.final_set},
              {"round_sizes", result.round_sizes}};
}

void write_trajectory(const MarkovTrajectory& trajectory, const fs::path& csv, const fs::path& manifest) {
  auto out = open_out(csv);
  out << "t,D,D_minus";
  Json classes = Json::array();
  for (const auto& c : trajectory.classes) {
    out << ",S_" << c.j << '_' << c.k << '_' << c.theta << '_' << c.l;
    classes.push_back(Json{{"j", c.j}, {"k", c.k}, {"theta", c.theta}, {"l", c.l}});
  }
  out << '\n';
  for (std::size_t t = 0; t < trajectory.steps_recorded(); ++t) {
    out << t << ',' << trajectory.defaulted[t] << ',' << trajectory.defaulted_in_stubs[t];
    for (std::size_t c = 0; c < trajectory.classes.size(); ++c) out << ',' << trajectory.counter(t, c);
    out << '\n';
  }
  Json counts = Json::array();
  for (const auto& c : trajectory.initial_counts) {
    counts.push_back(Json{{"j", c.j}, {"k", c.k}, {"theta", c.theta}, {"count", c.count}});
  }
  const Json doc{{"n", trajectory.n},
                 {"m", trajectory.m},
                 {"stopping_time", trajectory.stopping_time},
                 {"classes", std::move(classes)},
                 {"threshold_counts", std::move(counts)}};
  write_text_file(manifest, doc.dump(2) + "\n");
}

void write_multigraph_csv(const Multigraph& graph, const fs::path& path) {
  std::map<std::pair<NodeId, NodeId>, std::size_t> mult;
  for (const auto& e : graph.edges()) ++mult[e];
  auto out = open_out(path);
  out << "src,dst,multiplicity\n";
  for (const auto& [e, c] : mult) out << e.first << ',' << e.second << ',' << c << '\n';
}

Json read_json_file(const fs::path& path) {
  auto in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse_error", path.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw Error("io_error", "write failed for " + path.string());
}

}  // namespace contagion

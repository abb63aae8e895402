#include "odg/graph/snapshot.hpp"

#include "odg/error.hpp"

namespace odg::graph {

namespace fs = std::filesystem;

nlohmann::ordered_json SnapshotManifest::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "odg-graph/1";
  j["node_count"] = node_count;
  j["edge_count"] = edge_count;
  j["created_at"] = created_at;
  j["config_hash"] = config_hash;
  j["source_hashes"] = source_hashes;
  j["nodes_sha256"] = nodes_sha256;
  j["edges_sha256"] = edges_sha256;
  j["content_hash"] = content_hash;
  return j;
}

SnapshotManifest SnapshotManifest::from_json(const json& j) {
  try {
    SnapshotManifest m;
    m.node_count = j.at("node_count").get<std::size_t>();
    m.edge_count = j.at("edge_count").get<std::size_t>();
    m.created_at = j.at("created_at").get<std::string>();
    m.config_hash = j.value("config_hash", std::string{});
    if (j.contains("source_hashes")) m.source_hashes = j.at("source_hashes").get<std::map<std::string, std::string>>();
    m.nodes_sha256 = j.at("nodes_sha256").get<std::string>();
    m.edges_sha256 = j.at("edges_sha256").get<std::string>();
    m.content_hash = j.at("content_hash").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw CorruptionError(std::string("graph manifest: ") + e.what());
  }
}

SnapshotManifest save_snapshot(const Graph& graph, const fs::path& dir, std::string created_at, std::string config_hash,
                               std::map<std::string, std::string> source_hashes) {
  fs::create_directories(dir);
  const auto nodes = graph.nodes_jsonl();
  const auto edges = graph.edges_jsonl();
  SnapshotManifest m;
  m.node_count = graph.node_count();
  m.edge_count = graph.edge_count();
  m.created_at = std::move(created_at);
  m.config_hash = std::move(config_hash);
  m.source_hashes = std::move(source_hashes);
  m.nodes_sha256 = sha256_hex(nodes);
  m.edges_sha256 = sha256_hex(edges);
  m.content_hash = sha256_hex(nodes + edges);
  write_file_atomic(dir / kNodesFile, nodes);
  write_file_atomic(dir / kEdgesFile, edges);
  // Manifest last: its presence marks a complete snapshot.
  write_file_atomic(dir / kManifestFile, m.to_json().dump(2) + "\n");
  return m;
}

bool snapshot_exists(const fs::path& dir) { return fs::is_regular_file(dir / kManifestFile); }

namespace {

std::string read_part(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw CorruptionError("snapshot file missing: " + p.string());
  return read_file(p);
}

template <typename Fn>
std::size_t for_each_line(const std::string& text, const fs::path& file, Fn&& fn) {
  std::size_t n = 0;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    ++n;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw CorruptionError(file.filename().string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const ParseError& e) {
      throw CorruptionError(file.filename().string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return n;
}

}  // namespace

LoadedGraph load_snapshot(const fs::path& dir) {
  const auto manifest_path = dir / kManifestFile;
  LoadedGraph out;
  {
    const auto text = read_part(manifest_path);
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw CorruptionError("graph manifest unparsable: " + std::string(e.what()));
    }
    out.manifest = SnapshotManifest::from_json(j);
  }
  const auto nodes_path = dir / kNodesFile;
  const auto edges_path = dir / kEdgesFile;
  const auto nodes = read_part(nodes_path);
  const auto edges = read_part(edges_path);

  auto& g = out.graph;
  const auto node_lines = for_each_line(nodes, nodes_path, [&](const json& j) { g.restore_node(node_from_json(j)); });
  if (node_lines != out.manifest.node_count)
    throw CorruptionError("node count mismatch: manifest " + std::to_string(out.manifest.node_count) + ", file " +
                          std::to_string(node_lines));

  const auto edge_lines = for_each_line(edges, edges_path, [&](const json& j) {
    Edge e;
    auto endpoint = [&](const char* key) {
      const auto id = g.find(NodeKey::parse(j.at(key).get<std::string>()));
      if (!id) throw CorruptionError(std::string("edge references unknown node ") + j.at(key).dump());
      return *id;
    };
    e.subject = endpoint("subject");
    e.predicate = j.at("predicate").get<std::string>();
    e.object = endpoint("object");
    e.source_labels = j.at("source_labels").get<std::set<std::string>>();
    for (const auto& p : j.at("provenance")) e.provenance.push_back(provenance_from_json(p));
    if (j.at("aggregate_count").get<std::size_t>() != e.provenance.size())
      throw CorruptionError("aggregate_count disagrees with provenance length");
    g.restore_edge(std::move(e));
  });
  if (edge_lines != out.manifest.edge_count)
    throw CorruptionError("edge count mismatch: manifest " + std::to_string(out.manifest.edge_count) + ", file " +
                          std::to_string(edge_lines));

  if (sha256_hex(nodes) != out.manifest.nodes_sha256) throw CorruptionError("node file hash mismatch");
  if (sha256_hex(edges) != out.manifest.edges_sha256) throw CorruptionError("edge file hash mismatch");
  return out;
}

}  // namespace odg::graph

#ifndef ODG_GRAPH_SNAPSHOT_HPP
#define ODG_GRAPH_SNAPSHOT_HPP

#include <filesystem>
#include <map>
#include <string>

#include "odg/graph/graph.hpp"

namespace odg::graph {

inline constexpr const char* kNodesFile = "graph.nodes.jsonl";
inline constexpr const char* kEdgesFile = "graph.edges.jsonl";
inline constexpr const char* kManifestFile = "graph.manifest.json";

struct SnapshotManifest {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::string created_at;
  std::string config_hash;
  std::map<std::string, std::string> source_hashes;  // input name -> sha256
  std::string nodes_sha256;
  std::string edges_sha256;
  std::string content_hash;

  nlohmann::ordered_json to_json() const;
  static SnapshotManifest from_json(const json& j);  // throws CorruptionError
};

/// Writes the two JSONL files and the manifest into `dir` (created if
/// needed). Output bytes depend only on graph content and the given
/// metadata. Returns the manifest written.
SnapshotManifest save_snapshot(const Graph& graph, const std::filesystem::path& dir, std::string created_at,
                               std::string config_hash = {}, std::map<std::string, std::string> source_hashes = {});

struct LoadedGraph {
  Graph graph;
  SnapshotManifest manifest;
};

/// Throws CorruptionError when files are missing, unparsable, or disagree
/// with the manifest's counts or hashes.
LoadedGraph load_snapshot(const std::filesystem::path& dir);

bool snapshot_exists(const std::filesystem::path& dir);

}  // namespace odg::graph

#endif

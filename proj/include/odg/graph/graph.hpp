#ifndef ODG_GRAPH_GRAPH_HPP
#define ODG_GRAPH_GRAPH_HPP

#include <compare>
#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "odg/records.hpp"

namespace odg::graph {

/// "UMLS:<cui>" or "PMID:<pmid>". Ordered by that string form.
struct NodeKey {
  NodeKind kind = NodeKind::Concept;
  std::string id;

  std::string str() const;
  static NodeKey parse(std::string_view text);  // throws ParseError
  static NodeKey for_concept(std::string cui) { return {NodeKind::Concept, std::move(cui)}; }
  static NodeKey for_article(std::string pmid) { return {NodeKind::Article, std::move(pmid)}; }

  bool operator==(const NodeKey&) const = default;
  std::strong_ordering operator<=>(const NodeKey& other) const;
};

struct ConceptNode {
  std::string cui;
  std::string preferred_name;
  std::set<std::string> semantic_types;
  std::set<std::string> source_vocabularies;
  bool stub = false;
};

struct ArticleNode {
  std::string pmid;
  std::string title;
  bool has_abstract = false;
  bool has_fulltext = false;
  std::optional<Date> pub_date;
  bool stub = false;
};

/// Stored node. Concept-only and article-only fields stay empty for the
/// other kind.
struct Node {
  NodeKey key;
  std::string name;  // preferred name or title
  std::set<std::string> semantic_types;
  std::set<std::string> source_vocabularies;
  bool has_abstract = false;
  bool has_fulltext = false;
  std::optional<Date> pub_date;
  bool stub = true;

  bool is_concept() const { return key.kind == NodeKind::Concept; }
  bool operator==(const Node&) const = default;
};

/// Where an edge was asserted: a structured resource (`resource`) or an
/// article (`article_pmid`), never both. `harvest_timestamp` is recorded but
/// is not part of an entry's identity, so re-ingesting the same fact on a
/// later date is a duplicate.
struct ProvenanceEntry {
  std::optional<std::string> resource;
  std::optional<std::string> article_pmid;
  std::optional<std::size_t> sentence_index;
  std::optional<bool> negated;
  std::string harvest_timestamp;
  // Mention aggregates, MENTIONED_IN only.
  std::size_t mention_count = 0;
  std::set<std::size_t> sentences;

  bool same_identity(const ProvenanceEntry& other) const;
  bool operator==(const ProvenanceEntry&) const = default;
};

/// Identity order: resource form first, then article form.
bool provenance_less(const ProvenanceEntry& a, const ProvenanceEntry& b);

/// Provenance implied by an integrated relation.
ProvenanceEntry provenance_for(const IntegratedRelation& r, std::string_view harvest_timestamp);

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  NodeId subject = 0;
  std::string predicate;  // canonical label
  NodeId object = 0;
  std::set<std::string> source_labels;  // predicate labels as received
  std::vector<ProvenanceEntry> provenance;  // sorted by provenance_less, unique identities

  std::size_t aggregate_count() const { return provenance.size(); }
};

struct MergeStats {
  std::size_t nodes_added = 0;
  std::size_t edges_added = 0;
  std::size_t provenance_appended = 0;
  std::size_t duplicates_skipped = 0;

  bool operator==(const MergeStats&) const = default;
  MergeStats& operator+=(const MergeStats& o);
};

/// In-memory property graph: one node per CUI or PMID, at most one edge per
/// (subject, canonical predicate, object), provenance aggregated per edge.
/// Not internally synchronised; see SharedGraph.
class Graph {
 public:
  /// Inserts or merges: set fields are unioned, the lexicographically
  /// smallest non-empty name is kept, the earliest pub_date wins, and stub is
  /// cleared by any non-stub upsert. Throws ContractViolation for a malformed
  /// CUI or PMID.
  NodeId upsert_concept(const ConceptNode& node);
  NodeId upsert_article(const ArticleNode& node);

  /// Creates stub endpoint nodes as needed and records provenance.
  EdgeId upsert_edge(const IntegratedRelation& relation, std::string_view harvest_timestamp = {});

  /// Upserts both endpoints (concepts as enriched nodes, articles as stubs)
  /// and the edge for every relation.
  MergeStats merge_increment(std::span<const IntegratedRelation> relations, std::string_view harvest_timestamp = {});

  std::optional<NodeId> find(const NodeKey& key) const;
  std::optional<NodeId> find_concept(std::string_view cui) const { return find(NodeKey::for_concept(std::string(cui))); }
  std::optional<EdgeId> find_edge(NodeId s, std::string_view canonical_predicate, NodeId o) const;

  const Node& node(NodeId id) const { return nodes_.at(id); }
  const Edge& edge(EdgeId id) const { return edges_.at(id); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<EdgeId>& out_edges(NodeId id) const { return out_.at(id); }
  const std::vector<EdgeId>& in_edges(NodeId id) const { return in_.at(id); }

  /// Node ids sorted by key; edge ids sorted by (subject key, predicate,
  /// object key). The canonical order used for serialisation.
  std::vector<NodeId> sorted_nodes() const;
  std::vector<EdgeId> sorted_edges() const;

  /// Canonical line-delimited JSON; equal graphs give identical bytes.
  std::string nodes_jsonl() const;
  std::string edges_jsonl() const;
  /// SHA-256 over the canonical serialisation.
  std::string content_hash() const;

  /// Structural equality independent of insertion order.
  bool operator==(const Graph& other) const;

  /// Appends a fully formed node or edge; used when loading snapshots.
  /// Throws CorruptionError on duplicate keys or dangling endpoints.
  NodeId restore_node(Node node);
  EdgeId restore_edge(Edge edge);

 private:
  enum class Upsert { Added, Merged };
  std::pair<NodeId, Upsert> upsert_node(Node incoming);
  std::pair<EdgeId, MergeStats> upsert_edge_impl(const IntegratedRelation& r, std::string_view ts);
  static std::string edge_index_key(NodeId s, std::string_view p, NodeId o);

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
};

/// Single writer, many readers over one Graph.
class SharedGraph {
 public:
  explicit SharedGraph(Graph g = {}) : graph_(std::move(g)) {}

  template <typename Fn>
  decltype(auto) read(Fn&& fn) const {
    std::shared_lock lock(mutex_);
    return fn(static_cast<const Graph&>(graph_));
  }
  template <typename Fn>
  decltype(auto) write(Fn&& fn) {
    std::unique_lock lock(mutex_);
    return fn(graph_);
  }

 private:
  mutable std::shared_mutex mutex_;
  Graph graph_;
};

nlohmann::ordered_json to_json(const Node& n);
nlohmann::ordered_json to_json(const ProvenanceEntry& p);
Node node_from_json(const json& j);               // throws ParseError
ProvenanceEntry provenance_from_json(const json& j);  // throws ParseError

}  // namespace odg::graph

#endif

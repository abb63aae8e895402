#ifndef ODG_QUERY_QUERIES_HPP
#define ODG_QUERY_QUERIES_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odg/graph/graph.hpp"

// Read-only analytical queries. None of them mutate the graph.
namespace odg::query {

inline constexpr std::string_view kEnzymeType = "Enzyme";

struct RankingRow {
  std::string semantic_type;
  std::size_t concept_count = 0;
  std::size_t rank = 0;  // 1-based

  bool operator==(const RankingRow&) const = default;
};

struct SemanticTypeRanking {
  std::vector<RankingRow> rows;

  std::optional<std::size_t> rank_of(std::string_view semantic_type) const;
  /// Builds a ranking from types already in rank order, counts unknown.
  static SemanticTypeRanking from_order(std::span<const std::string> types_in_rank_order);
};

/// Counts, per semantic type, the concepts with at least one MENTIONED_IN
/// edge. Ordered by count descending then type name; ranks are 1..N.
SemanticTypeRanking rank_semantic_types(const graph::Graph& g);

struct RankComparisonRow {
  std::string semantic_type;
  std::vector<std::size_t> ranks;
  double stdv = 0.0;
};

/// Sample standard deviation (divisor n-1). Requires n >= 2.
double sample_stdev(std::span<const double> values);

/// Per type present in every ranking: its ranks and their sample standard
/// deviation, ordered by stdv descending then type name. Throws
/// ContractViolation for fewer than two rankings.
std::vector<RankComparisonRow> compare_rankings(std::span<const SemanticTypeRanking> rankings);

struct ConceptProfile {
  std::string cui;
  std::string name;
  std::size_t mention_total = 0;
  std::size_t article_count = 0;
  std::size_t topic_article_count = 0;
  std::size_t relation_edge_count = 0;
  std::size_t relation_type_count = 0;
  std::size_t neighbor_concept_count = 0;

  bool operator==(const ConceptProfile&) const = default;
};

/// Throws NotFoundError for an unknown CUI.
ConceptProfile concept_profile(const graph::Graph& g, std::string_view cui);

struct CooccurringConcept {
  std::string cui;
  std::string name;
  std::size_t shared_article_count = 0;

  bool operator==(const CooccurringConcept&) const = default;
};

inline constexpr std::size_t kDefaultIsaDepth = 10;

/// Concepts that reach `ancestor_cui` through at most `max_depth` ISA edges
/// and share at least one article with `anchor_cui`; ordered by shared count
/// descending then CUI. The anchor itself is never returned.
std::vector<CooccurringConcept> cooccurring_descendants(const graph::Graph& g, std::string_view anchor_cui,
                                                        std::string_view ancestor_cui,
                                                        std::size_t max_depth = kDefaultIsaDepth);

struct Enrichment {
  std::size_t interacting_concept_count = 0;
  std::size_t interacting_filtered_count = 0;
  std::size_t interacting_enzyme_count = 0;
  std::size_t filtered_enzyme_count = 0;

  bool operator==(const Enrichment&) const = default;
};

/// Distinct concepts joined to `cui` by INTERACTS_WITH in either direction.
/// The filtered counts keep partners with at least one such edge carrying
/// provenance from `filter_source` (case-insensitive); without a filter
/// they equal the unfiltered counts.
Enrichment interaction_enrichment(const graph::Graph& g, std::string_view cui,
                                  const std::optional<std::string>& filter_source = std::nullopt);

struct HopEdge {
  std::string predicate;
  bool forward = true;  // edge points from the earlier node to the later one

  bool operator==(const HopEdge&) const = default;
  auto operator<=>(const HopEdge&) const = default;
};

struct PathResult {
  std::vector<graph::NodeKey> nodes;
  /// hops[i] lists every edge between nodes[i] and nodes[i+1].
  std::vector<std::vector<HopEdge>> hops;

  std::size_t length() const { return hops.size(); }
  bool operator==(const PathResult&) const = default;
};

struct PathOptions {
  std::size_t max_hops = 3;
  /// Ignore MENTIONED_IN and HAS_MESH edges.
  bool concept_only = false;
  std::size_t max_paths = 10000;
};

/// All minimal-length paths of at most `max_hops` edges, edges taken as
/// undirected, in lexicographic order of node-key sequence. Empty when no
/// path is short enough. Throws NotFoundError for unknown endpoints and
/// ContractViolation when max_hops is zero.
std::vector<PathResult> shortest_paths(const graph::Graph& g, const graph::NodeKey& from, const graph::NodeKey& to,
                                       const PathOptions& options);

/// Predicates produced by literature analysis rather than extraction.
bool is_literature_predicate(std::string_view canonical_predicate);

}  // namespace odg::query

#endif

#ifndef ODG_QUERY_FORMAT_HPP
#define ODG_QUERY_FORMAT_HPP

#include <span>
#include <string>
#include <vector>

#include "odg/query/queries.hpp"

// Human-readable tables and JSON renderings of query results.
namespace odg::query {

/// Left-aligned columns separated by two spaces, header underlined.
std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

std::string format_stdv(double v);  // two decimals
std::string format_path(const PathResult& p);

std::string to_table(const SemanticTypeRanking& r);
std::string to_table(std::span<const RankComparisonRow> rows, const std::vector<std::string>& graph_names);
std::string to_table(const ConceptProfile& p);
std::string to_table(std::span<const CooccurringConcept> rows);
std::string to_table(const Enrichment& e, const std::optional<std::string>& filter_source);
std::string to_table(std::span<const PathResult> paths);

nlohmann::ordered_json to_json(const SemanticTypeRanking& r);
nlohmann::ordered_json to_json(std::span<const RankComparisonRow> rows, const std::vector<std::string>& graph_names);
nlohmann::ordered_json to_json(const ConceptProfile& p);
nlohmann::ordered_json to_json(std::span<const CooccurringConcept> rows);
nlohmann::ordered_json to_json(const Enrichment& e, const std::optional<std::string>& filter_source);
nlohmann::ordered_json to_json(std::span<const PathResult> paths);

}  // namespace odg::query

#endif

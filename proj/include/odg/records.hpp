#ifndef ODG_RECORDS_HPP
#define ODG_RECORDS_HPP

#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "odg/common.hpp"

namespace odg {

using json = nlohmann::json;

namespace vocab {
inline constexpr std::string_view kUmls = "UMLS";
inline constexpr std::string_view kPmid = "PMID";
inline constexpr std::string_view kMesh = "MSH";
inline constexpr std::string_view kDrugBank = "DRUGBANK";
}  // namespace vocab

namespace predicate {
inline constexpr std::string_view kIsA = "is a";
inline constexpr std::string_view kInteractsWith = "interacts with";
inline constexpr std::string_view kMentionedIn = "MENTIONED_IN";
inline constexpr std::string_view kHasMesh = "HAS_MESH";
}  // namespace predicate

/// One side of a relation as named by its source: a code in some vocabulary.
struct Endpoint {
  std::string vocab;
  std::string code;
  std::string label;
  /// Vocabulary the endpoint was resolved from; set once integrated.
  std::string origin_vocab;

  bool operator==(const Endpoint&) const = default;
};

/// The harvester-neutral relation unit exchanged between pipeline stages.
struct RelationRecord {
  Endpoint subject;
  std::string predicate;
  Endpoint object;
  std::string source;
  json attributes = json::object();

  bool operator==(const RelationRecord&) const = default;
};

enum class NodeKind { Concept, Article };

std::string_view to_string(NodeKind kind);

/// A resolved relation endpoint: a UMLS concept or a PubMed article.
struct NodeRef {
  NodeKind kind = NodeKind::Concept;
  std::string id;  // CUI or PMID
  std::string name;
  std::set<std::string> semantic_types;
  std::string origin_vocab;

  bool operator==(const NodeRef&) const = default;
};

/// A relation whose concept endpoints are all UMLS CUIs.
struct IntegratedRelation {
  NodeRef subject;
  std::string predicate;
  NodeRef object;
  std::string source;
  json attributes = json::object();

  bool operator==(const IntegratedRelation&) const = default;
};

/// Converts back to the exchange form (vocab UMLS / PMID) so integrated
/// output can be fed through integration again.
RelationRecord to_relation_record(const IntegratedRelation& r);

/// A harvested literature document.
struct ArticleRecord {
  std::string pmid;
  std::string title;
  std::optional<std::string> abstract_text;
  std::optional<std::string> fulltext_body;
  std::vector<std::string> mesh_headings;
  std::optional<Date> pub_date;
  std::optional<std::string> pmcid;

  bool operator==(const ArticleRecord&) const = default;
};

// JSON forms. Key names and order are the on-disk contract.
nlohmann::ordered_json to_json(const Endpoint& e);
nlohmann::ordered_json to_json(const RelationRecord& r);
nlohmann::ordered_json to_json(const IntegratedRelation& r);
nlohmann::ordered_json to_json(const ArticleRecord& a);

/// Throws ParseError naming the missing or mistyped field.
RelationRecord relation_from_json(const json& j);
IntegratedRelation integrated_from_json(const json& j);
ArticleRecord article_from_json(const json& j);

/// Calls `fn(parsed_object, line_number)` for every non-blank line.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const json&, std::size_t)>& fn);

template <typename T>
void write_jsonl(const std::filesystem::path& path, std::span<const T> items) {
  std::string out;
  for (const auto& item : items) {
    out += to_json(item).dump();
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<RelationRecord> read_relations(const std::filesystem::path& path);
std::vector<IntegratedRelation> read_integrated(const std::filesystem::path& path);
std::vector<ArticleRecord> read_articles(const std::filesystem::path& path);

}  // namespace odg

#endif

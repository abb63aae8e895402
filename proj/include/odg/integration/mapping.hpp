#ifndef ODG_INTEGRATION_MAPPING_HPP
#define ODG_INTEGRATION_MAPPING_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "odg/records.hpp"

namespace odg::integration {

struct MappingLoadStats {
  std::size_t conso_rows = 0;
  std::size_t conso_skipped = 0;  // wrong column count or malformed CUI
  std::size_t sty_rows = 0;
  std::size_t sty_skipped = 0;       // wrong column count or malformed CUI
  std::size_t sty_unknown_type = 0;  // not in the shipped semantic type list
  std::size_t sty_orphan = 0;        // CUI absent from conso
  std::vector<std::string> problems;  // first few, "file:line: reason"
};

/// Local cross-walk from source vocabulary codes to UMLS CUIs. Built from a
/// conso TSV (CUI, SAB, CODE, STR, ISPREF) and a sty TSV (CUI, STY) and
/// immutable afterwards.
class MappingTable {
 public:
  /// Throws ValidationError if either file is missing or conso has no rows.
  static MappingTable load(const std::filesystem::path& conso, const std::filesystem::path& sty);
  static MappingTable parse(std::string_view conso_text, std::string_view sty_text);

  /// Vocabulary names compare case-insensitively and a code may carry a
  /// redundant "SAB:" prefix ("GO:0008150" under GO).
  std::optional<std::string_view> lookup(std::string_view vocab, std::string_view code) const;
  bool contains(std::string_view cui) const { return names_.contains(cui); }
  /// Empty for unknown CUIs.
  std::string_view preferred_name(std::string_view cui) const;
  const std::set<std::string>& semantic_types(std::string_view cui) const;

  /// Lower-cased term string to CUI: the tagger lexicon.
  const std::unordered_map<std::string, std::string>& term_to_cui() const { return terms_; }
  std::size_t concept_count() const { return names_.size(); }
  std::size_t code_count() const { return codes_.size(); }
  const MappingLoadStats& stats() const { return stats_; }

  static std::string normalize_vocab(std::string_view vocab);
  static std::string normalize_code(std::string_view vocab, std::string_view code);

 private:
  std::map<std::pair<std::string, std::string>, std::string, std::less<>> codes_;
  std::map<std::string, std::string, std::less<>> names_;
  std::map<std::string, std::set<std::string>, std::less<>> types_;
  std::unordered_map<std::string, std::string> terms_;
  MappingLoadStats stats_;
};

struct UnmappedEntry {
  RelationRecord record;
  /// The endpoints that could not be resolved. Empty when the record was
  /// diverted for another reason.
  std::vector<Endpoint> endpoints;
  std::string reason;
};

nlohmann::ordered_json to_json(const UnmappedEntry& e);

struct Resolution {
  std::vector<IntegratedRelation> relations;
  std::vector<UnmappedEntry> unmapped;
};

/// Resolves every concept endpoint to a CUI. PMID endpoints pass through,
/// UMLS endpoints are checked for CUI shape. A record with any unresolvable
/// endpoint, or whose two concept endpoints collapse onto one CUI, goes to
/// the unmapped report instead of the output. Input order is preserved.
Resolution resolve_relations(std::span<const RelationRecord> records, const MappingTable& table);

}  // namespace odg::integration

#endif

#ifndef ODG_ANALYSIS_SEMREP_HPP
#define ODG_ANALYSIS_SEMREP_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "odg/analysis/tagger.hpp"
#include "odg/records.hpp"

namespace odg::analysis {

struct Predication {
  std::string subject_cui;
  std::string subject_name;
  std::string predicate;  // Semantic Network label, e.g. "INTERACTS_WITH"
  std::string object_cui;
  std::string object_name;
  bool negated = false;
  std::string pmid;
  std::size_t sentence_index = 0;

  bool operator==(const Predication&) const = default;
  auto operator<=>(const Predication&) const = default;
};

/// Field indices of fielded predication output. Only the columns read here
/// are listed; `min_fields` rejects truncated lines.
struct SemRepColumns {
  char delimiter = '|';
  std::size_t record_type = 0;
  std::size_t pmid = 0;
  std::size_t sentence_index = 0;
  struct {
    std::size_t min_fields = 0, cui = 0, name = 0, semtypes = 0, text = 0, start = 0, end = 0;
  } entity;
  struct {
    std::size_t min_fields = 0, subject_cui = 0, subject_name = 0, subject_semtype = 0, indicator = 0,
                predicate = 0, negation = 0, object_cui = 0, object_name = 0, object_semtype = 0;
  } relation;

  /// The shipped layout (data/semrep_columns.json).
  static const SemRepColumns& defaults();
  /// Throws ParseError naming a missing or non-integer key.
  static SemRepColumns from_json(const json& j);
};

struct SemRepStats {
  std::size_t total_lines = 0;    // non-blank
  std::size_t other_records = 0;  // well-formed but neither entity nor relation
  std::size_t malformed = 0;
  std::size_t dropped = 0;  // pmid not in allowlist
  std::size_t parsed = 0;
  /// "line N: reason" for the first malformed lines.
  std::vector<std::string> problems;
};

struct SemRepOutput {
  std::vector<ConceptMention> mentions;
  std::vector<Predication> predications;
  SemRepStats stats;
  std::vector<std::string> warnings;
};

/// Parses entity and relation records. Relation predicates must be in the
/// shipped label set; a "NEG_" prefix or a non-empty negation column marks
/// the predication as negated. Records for pmids outside `allowlist` (when
/// given) are dropped and tallied.
SemRepOutput ingest_semrep_output(std::string_view text,
                                  const std::optional<std::set<std::string, std::less<>>>& allowlist,
                                  const SemRepColumns& columns = SemRepColumns::defaults());

}  // namespace odg::analysis

#endif

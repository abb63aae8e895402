#ifndef ODG_RESOURCES_HPP
#define ODG_RESOURCES_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

// Reference lists shipped in data/ and compiled into the library.
namespace odg::resources {

/// Raw contents of a shipped data file, e.g. "semantic_types.tsv".
std::string_view data_file(const std::string& name);

/// The closed list of semantic type names.
const std::set<std::string, std::less<>>& semantic_type_names();
/// Semantic type name for a type identifier such as "T002"; empty if unknown.
std::string_view semantic_type_for_tui(std::string_view tui);

/// Predicate labels accepted from predication output, upper case.
const std::set<std::string, std::less<>>& relation_labels();

/// Tokens ending in '.' that never terminate a sentence.
const std::vector<std::string>& abbreviations();

/// Canonical graph predicate for a source label: "is a" and "ISA" both map to
/// "ISA". Unlisted labels are upper-cased with spaces turned into underscores.
std::string canonical_predicate(std::string_view label);

}  // namespace odg::resources

#endif

#ifndef ODG_HARVEST_STRUCTURED_HPP
#define ODG_HARVEST_STRUCTURED_HPP

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odg/records.hpp"

namespace odg::harvest {

// ---------------------------------------------------------------------------
// OBO ontologies

struct Xref {
  std::string vocabulary;
  std::string code;
  bool operator==(const Xref&) const = default;
};

struct OboTerm {
  std::string term_id;  // PREFIX:LOCAL
  std::string name;
  std::vector<std::string> is_a_parents;
  std::vector<Xref> xrefs;
  bool is_obsolete = false;

  bool operator==(const OboTerm&) const = default;
};

/// Parses the [Term] stanzas of an OBO 1.2/1.4 document. `is_a:` targets lose
/// their trailing "! comment" and "{...}" qualifiers; `xref:` values are split
/// at the first colon. Other stanza types and unknown tags are skipped.
/// Throws ParseError (with the stanza's line) for a [Term] without an id.
std::vector<OboTerm> parse_obo(std::string_view text);

/// Renders terms as an OBO 1.2 document that parse_obo reads back.
std::string write_obo(std::span<const OboTerm> terms);

/// One "is a" relation per (child, parent) pair of non-obsolete terms.
///
/// A term that carries a UMLS xref (prefix UMLS or UMLS_CUI) is named by that
/// CUI; other terms by (id prefix, local id). Parents missing from the file
/// are still emitted. Pairs whose two endpoints coincide are dropped.
std::vector<RelationRecord> obo_to_relations(std::span<const OboTerm> terms, std::string_view source_name);

// ---------------------------------------------------------------------------
// MeSH descriptor XML

struct MeshDescriptor {
  std::string ui;
  std::string name;
  std::vector<std::string> tree_numbers;
};

std::vector<MeshDescriptor> parse_mesh_descriptors(std::string_view xml);

/// Parent descriptor UIs per descriptor. The parent of tree number A.B.C is
/// the descriptor owning A.B; single-segment numbers are tree roots.
/// Parents are listed once each, in tree-number order.
std::map<std::string, std::vector<std::string>> mesh_parents(std::span<const MeshDescriptor> descriptors);

/// MeSH descriptor XML to an OBO document with ids "MSH:<DescriptorUI>".
std::string mesh_xml_to_obo(std::string_view xml);

// ---------------------------------------------------------------------------
// DrugBank

struct DrugInteraction {
  std::string partner_id;
  std::string partner_name;
};

struct DrugEntry {
  std::string drugbank_id;
  std::string name;
  std::vector<DrugInteraction> interactions;
};

/// Top-level <drug> elements of a DrugBank database export. Throws
/// ParseError for a drug whose primary id is not of the form DB#####.
std::vector<DrugEntry> parse_drugbank_entries(std::string_view xml);

/// One directed "interacts with" relation per listed partner, as listed.
std::vector<RelationRecord> drugbank_to_relations(std::span<const DrugEntry> drugs, std::string_view source_name);

std::vector<RelationRecord> parse_drugbank_interactions(std::string_view xml,
                                                        std::string_view source_name = "DrugBank");

}  // namespace odg::harvest

#endif

#include "odg/error.hpp"
#include "odg/harvest/structured.hpp"
#include "odg/xml.hpp"

namespace odg::harvest {

namespace {

std::string primary_id(const xml::Element& drug) {
  const auto ids = drug.children("drugbank-id");
  for (const auto& id : ids)
    if (id.attribute("primary") == std::optional<std::string_view>("true")) return std::string(trim(id.text()));
  return ids.empty() ? std::string{} : std::string(trim(ids.front().text()));
}

}  // namespace

std::vector<DrugEntry> parse_drugbank_entries(std::string_view text) {
  std::vector<DrugEntry> out;
  // Only direct children of <drugbank>; <drug> also appears nested in pathways.
  xml::for_each_top_level_element(text, "drug", [&](std::string_view element) {
    xml::Document doc{std::string(element)};
    const auto drug = doc.root();
    DrugEntry entry;
    entry.drugbank_id = primary_id(drug);
    if (!is_drugbank_id(entry.drugbank_id))
      throw ParseError("drug with malformed DrugBank id '" + entry.drugbank_id + "'");
    entry.name = collapse_whitespace(drug.child("name").text());
    for (const auto& inter : drug.path("drug-interactions").children("drug-interaction")) {
      DrugInteraction di;
      di.partner_id = std::string(trim(inter.child("drugbank-id").text()));
      di.partner_name = collapse_whitespace(inter.child("name").text());
      if (!di.partner_id.empty()) entry.interactions.push_back(std::move(di));
    }
    out.push_back(std::move(entry));
  });
  return out;
}

std::vector<RelationRecord> drugbank_to_relations(std::span<const DrugEntry> drugs, std::string_view source_name) {
  std::vector<RelationRecord> out;
  for (const auto& d : drugs) {
    const Endpoint subject{std::string(vocab::kDrugBank), d.drugbank_id, d.name, {}};
    for (const auto& i : d.interactions) {
      out.push_back(RelationRecord{subject, std::string(predicate::kInteractsWith),
                                   Endpoint{std::string(vocab::kDrugBank), i.partner_id, i.partner_name, {}},
                                   std::string(source_name), json::object()});
    }
  }
  return out;
}

std::vector<RelationRecord> parse_drugbank_interactions(std::string_view xml, std::string_view source_name) {
  return drugbank_to_relations(parse_drugbank_entries(xml), source_name);
}

}  // namespace odg::harvest

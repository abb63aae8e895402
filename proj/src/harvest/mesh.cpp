#include <algorithm>
#include <unordered_map>

#include "odg/error.hpp"
#include "odg/harvest/structured.hpp"
#include "odg/xml.hpp"

namespace odg::harvest {

std::vector<MeshDescriptor> parse_mesh_descriptors(std::string_view text) {
  std::vector<MeshDescriptor> out;
  xml::for_each_top_level_element(text, "DescriptorRecord", [&](std::string_view element) {
    xml::Document doc{std::string(element)};
    const auto rec = doc.root();
    MeshDescriptor d;
    d.ui = std::string(trim(rec.child("DescriptorUI").text()));
    if (!is_mesh_ui(d.ui)) throw ParseError("DescriptorRecord with invalid DescriptorUI '" + d.ui + "'");
    d.name = collapse_whitespace(rec.path("DescriptorName/String").text());
    for (const auto& tn : rec.path("TreeNumberList").children("TreeNumber")) {
      auto number = std::string(trim(tn.text()));
      if (!number.empty()) d.tree_numbers.push_back(std::move(number));
    }
    out.push_back(std::move(d));
  });
  return out;
}

std::map<std::string, std::vector<std::string>> mesh_parents(std::span<const MeshDescriptor> descriptors) {
  std::unordered_map<std::string_view, std::string_view> owner;
  for (const auto& d : descriptors)
    for (const auto& tn : d.tree_numbers) owner.emplace(tn, d.ui);

  std::map<std::string, std::vector<std::string>> parents;
  for (const auto& d : descriptors) {
    auto& list = parents[d.ui];
    for (const auto& tn : d.tree_numbers) {
      const auto dot = tn.rfind('.');
      if (dot == std::string::npos) continue;
      auto it = owner.find(std::string_view(tn).substr(0, dot));
      if (it == owner.end() || it->second == d.ui) continue;
      if (std::find(list.begin(), list.end(), it->second) == list.end()) list.emplace_back(it->second);
    }
  }
  return parents;
}

std::string mesh_xml_to_obo(std::string_view text) {
  const auto descriptors = parse_mesh_descriptors(text);
  const auto parents = mesh_parents(descriptors);
  std::vector<OboTerm> terms;
  terms.reserve(descriptors.size());
  for (const auto& d : descriptors) {
    OboTerm t;
    t.term_id = "MSH:" + d.ui;
    t.name = d.name;
    for (const auto& p : parents.at(d.ui)) t.is_a_parents.push_back("MSH:" + p);
    terms.push_back(std::move(t));
  }
  return write_obo(terms);
}

}  // namespace odg::harvest

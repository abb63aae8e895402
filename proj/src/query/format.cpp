#include "odg/query/format.hpp"

#include <algorithm>
#include <cstdio>

namespace odg::query {

using ojson = nlohmann::ordered_json;

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());

  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      s += cells[c];
      if (c + 1 < cells.size()) s += std::string(width[c] - cells[c].size() + 2, ' ');
    }
    return s + "\n";
  };
  std::string out = line(header);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  out += line(rule);
  for (const auto& r : rows) out += line(r);
  return out;
}

std::string format_stdv(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

namespace {

std::string hop_label(const std::vector<HopEdge>& hop) {
  std::string s;
  for (const auto& h : hop) {
    if (!s.empty()) s += "|";
    s += h.forward ? h.predicate + ">" : "<" + h.predicate;
  }
  return s;
}

}  // namespace

std::string format_path(const PathResult& p) {
  std::string s = p.nodes.front().str();
  for (std::size_t i = 0; i < p.hops.size(); ++i) s += " -[" + hop_label(p.hops[i]) + "]- " + p.nodes[i + 1].str();
  return s;
}

std::string to_table(const SemanticTypeRanking& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : r.rows)
    rows.push_back({std::to_string(row.rank), row.semantic_type, std::to_string(row.concept_count)});
  return render_table({"rank", "semantic_type", "concepts"}, rows);
}

std::string to_table(std::span<const RankComparisonRow> rows, const std::vector<std::string>& names) {
  std::vector<std::string> header{"semantic_type"};
  header.insert(header.end(), names.begin(), names.end());
  header.push_back("stdv");
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows) {
    std::vector<std::string> cells{r.semantic_type};
    for (auto rank : r.ranks) cells.push_back(std::to_string(rank));
    cells.push_back(format_stdv(r.stdv));
    body.push_back(std::move(cells));
  }
  return render_table(header, body);
}

std::string to_table(const ConceptProfile& p) {
  return render_table({"field", "value"}, {{"cui", p.cui},
                                           {"name", p.name},
                                           {"mention_total", std::to_string(p.mention_total)},
                                           {"article_count", std::to_string(p.article_count)},
                                           {"topic_article_count", std::to_string(p.topic_article_count)},
                                           {"relation_edge_count", std::to_string(p.relation_edge_count)},
                                           {"relation_type_count", std::to_string(p.relation_type_count)},
                                           {"neighbor_concept_count", std::to_string(p.neighbor_concept_count)}});
}

std::string to_table(std::span<const CooccurringConcept> rows) {
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows) body.push_back({r.cui, r.name, std::to_string(r.shared_article_count)});
  return render_table({"cui", "name", "shared_articles"}, body);
}

std::string to_table(const Enrichment& e, const std::optional<std::string>& filter) {
  std::vector<std::vector<std::string>> body{
      {"interacting_concepts", std::to_string(e.interacting_concept_count)},
      {"interacting_enzymes", std::to_string(e.interacting_enzyme_count)}};
  if (filter) {
    body.push_back({"interacting_concepts[" + *filter + "]", std::to_string(e.interacting_filtered_count)});
    body.push_back({"interacting_enzymes[" + *filter + "]", std::to_string(e.filtered_enzyme_count)});
  }
  return render_table({"measure", "value"}, body);
}

std::string to_table(std::span<const PathResult> paths) {
  std::vector<std::vector<std::string>> body;
  for (const auto& p : paths) body.push_back({std::to_string(p.length()), format_path(p)});
  return render_table({"length", "path"}, body);
}

ojson to_json(const SemanticTypeRanking& r) {
  ojson arr = ojson::array();
  for (const auto& row : r.rows)
    arr.push_back({{"rank", row.rank}, {"semantic_type", row.semantic_type}, {"concept_count", row.concept_count}});
  return arr;
}

ojson to_json(std::span<const RankComparisonRow> rows, const std::vector<std::string>& names) {
  ojson out;
  out["graphs"] = names;
  auto& arr = out["rows"] = ojson::array();
  for (const auto& r : rows) arr.push_back({{"semantic_type", r.semantic_type}, {"ranks", r.ranks}, {"stdv", r.stdv}});
  return out;
}

ojson to_json(const ConceptProfile& p) {
  ojson j;
  j["cui"] = p.cui;
  j["name"] = p.name;
  j["mention_total"] = p.mention_total;
  j["article_count"] = p.article_count;
  j["topic_article_count"] = p.topic_article_count;
  j["relation_edge_count"] = p.relation_edge_count;
  j["relation_type_count"] = p.relation_type_count;
  j["neighbor_concept_count"] = p.neighbor_concept_count;
  return j;
}

ojson to_json(std::span<const CooccurringConcept> rows) {
  ojson arr = ojson::array();
  for (const auto& r : rows)
    arr.push_back({{"cui", r.cui}, {"name", r.name}, {"shared_article_count", r.shared_article_count}});
  return arr;
}

ojson to_json(const Enrichment& e, const std::optional<std::string>& filter) {
  ojson j;
  j["interacting_concept_count"] = e.interacting_concept_count;
  j["interacting_enzyme_count"] = e.interacting_enzyme_count;
  j["filter_source"] = filter ? ojson(*filter) : ojson(nullptr);
  j["interacting_filtered_count"] = e.interacting_filtered_count;
  j["filtered_enzyme_count"] = e.filtered_enzyme_count;
  return j;
}

ojson to_json(std::span<const PathResult> paths) {
  ojson arr = ojson::array();
  for (const auto& p : paths) {
    ojson j;
    j["length"] = p.length();
    auto& nodes = j["nodes"] = ojson::array();
    for (const auto& n : p.nodes) nodes.push_back({{"key", n.str()}, {"kind", std::string(to_string(n.kind))}});
    auto& hops = j["hops"] = ojson::array();
    for (const auto& h : p.hops) {
      ojson edges = ojson::array();
      for (const auto& e : h) edges.push_back({{"predicate", e.predicate}, {"forward", e.forward}});
      hops.push_back(std::move(edges));
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace odg::query

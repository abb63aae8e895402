#include "odg/records.hpp"

#include <fstream>

#include "odg/error.hpp"

namespace odg {

using ojson = nlohmann::ordered_json;

std::string_view to_string(NodeKind kind) { return kind == NodeKind::Concept ? "concept" : "article"; }

namespace {

const json& require(const json& j, const char* field, const char* context) {
  if (!j.is_object() || !j.contains(field))
    throw ParseError(std::string(context) + ": missing field '" + field + "'");
  return j.at(field);
}

std::string require_string(const json& j, const char* field, const char* context) {
  const auto& v = require(j, field, context);
  if (!v.is_string()) throw ParseError(std::string(context) + ": field '" + field + "' is not a string");
  return v.get<std::string>();
}

std::string optional_string(const json& j, const char* field, const char* context) {
  if (!j.contains(field) || j.at(field).is_null()) return {};
  const auto& v = j.at(field);
  if (!v.is_string()) throw ParseError(std::string(context) + ": field '" + field + "' is not a string");
  return v.get<std::string>();
}

Endpoint endpoint_from_json(const json& j, const char* context) {
  if (!j.is_object()) throw ParseError(std::string(context) + " is not an object");
  return Endpoint{require_string(j, "vocab", context), require_string(j, "code", context),
                  optional_string(j, "label", context), optional_string(j, "origin_vocab", context)};
}

ojson node_to_json(const NodeRef& n) {
  ojson j;
  j["vocab"] = n.kind == NodeKind::Concept ? vocab::kUmls : vocab::kPmid;
  j["code"] = n.id;
  j["label"] = n.name;
  if (n.kind == NodeKind::Concept) {
    j["semantic_types"] = n.semantic_types;
    if (!n.origin_vocab.empty()) j["origin_vocab"] = n.origin_vocab;
  }
  return j;
}

NodeRef node_from_json(const json& j, const char* context) {
  const auto e = endpoint_from_json(j, context);
  NodeRef n;
  if (e.vocab == vocab::kUmls) {
    n.kind = NodeKind::Concept;
    if (!is_cui(e.code)) throw ParseError(std::string(context) + ": malformed CUI '" + e.code + "'");
  } else if (e.vocab == vocab::kPmid) {
    n.kind = NodeKind::Article;
  } else {
    throw ParseError(std::string(context) + ": vocab must be UMLS or PMID, got '" + e.vocab + "'");
  }
  n.id = e.code;
  n.name = e.label;
  n.origin_vocab = e.origin_vocab;
  if (j.contains("semantic_types")) {
    const auto& st = j.at("semantic_types");
    if (!st.is_array()) throw ParseError(std::string(context) + ": semantic_types is not an array");
    for (const auto& t : st) n.semantic_types.insert(t.get<std::string>());
  }
  return n;
}

json attributes_from(const json& j, const char* context) {
  if (!j.contains("attributes") || j.at("attributes").is_null()) return json::object();
  const auto& a = j.at("attributes");
  if (!a.is_object()) throw ParseError(std::string(context) + ": attributes is not an object");
  return a;
}

Endpoint node_to_endpoint(const NodeRef& n) {
  return Endpoint{std::string(n.kind == NodeKind::Concept ? vocab::kUmls : vocab::kPmid), n.id, n.name,
                  n.origin_vocab};
}

}  // namespace

RelationRecord to_relation_record(const IntegratedRelation& r) {
  return RelationRecord{node_to_endpoint(r.subject), r.predicate, node_to_endpoint(r.object), r.source,
                        r.attributes};
}

ojson to_json(const Endpoint& e) {
  ojson j;
  j["vocab"] = e.vocab;
  j["code"] = e.code;
  j["label"] = e.label;
  if (!e.origin_vocab.empty()) j["origin_vocab"] = e.origin_vocab;
  return j;
}

ojson to_json(const RelationRecord& r) {
  ojson j;
  j["subject"] = to_json(r.subject);
  j["predicate"] = r.predicate;
  j["object"] = to_json(r.object);
  j["source"] = r.source;
  j["attributes"] = ojson(r.attributes);
  return j;
}

ojson to_json(const IntegratedRelation& r) {
  ojson j;
  j["subject"] = node_to_json(r.subject);
  j["predicate"] = r.predicate;
  j["object"] = node_to_json(r.object);
  j["source"] = r.source;
  j["attributes"] = ojson(r.attributes);
  return j;
}

ojson to_json(const ArticleRecord& a) {
  ojson j;
  j["pmid"] = a.pmid;
  j["title"] = a.title;
  j["abstract"] = a.abstract_text ? ojson(*a.abstract_text) : ojson(nullptr);
  j["fulltext"] = a.fulltext_body ? ojson(*a.fulltext_body) : ojson(nullptr);
  j["mesh_headings"] = a.mesh_headings;
  j["pub_date"] = a.pub_date ? ojson(a.pub_date->iso()) : ojson(nullptr);
  j["pmcid"] = a.pmcid ? ojson(*a.pmcid) : ojson(nullptr);
  return j;
}

RelationRecord relation_from_json(const json& j) {
  RelationRecord r;
  r.subject = endpoint_from_json(require(j, "subject", "relation"), "relation subject");
  r.predicate = require_string(j, "predicate", "relation");
  r.object = endpoint_from_json(require(j, "object", "relation"), "relation object");
  r.source = require_string(j, "source", "relation");
  r.attributes = attributes_from(j, "relation");
  return r;
}

IntegratedRelation integrated_from_json(const json& j) {
  IntegratedRelation r;
  r.subject = node_from_json(require(j, "subject", "integrated relation"), "integrated relation subject");
  r.predicate = require_string(j, "predicate", "integrated relation");
  r.object = node_from_json(require(j, "object", "integrated relation"), "integrated relation object");
  r.source = require_string(j, "source", "integrated relation");
  r.attributes = attributes_from(j, "integrated relation");
  return r;
}

ArticleRecord article_from_json(const json& j) {
  ArticleRecord a;
  a.pmid = require_string(j, "pmid", "article");
  a.title = optional_string(j, "title", "article");
  if (auto s = optional_string(j, "abstract", "article"); j.contains("abstract") && !j["abstract"].is_null())
    a.abstract_text = s;
  if (auto s = optional_string(j, "fulltext", "article"); j.contains("fulltext") && !j["fulltext"].is_null())
    a.fulltext_body = s;
  if (j.contains("mesh_headings")) {
    for (const auto& m : j.at("mesh_headings")) a.mesh_headings.push_back(m.get<std::string>());
  }
  if (auto s = optional_string(j, "pub_date", "article"); !s.empty()) {
    a.pub_date = Date::parse(s);
    if (!a.pub_date) throw ParseError("article: malformed pub_date '" + s + "'");
  }
  if (auto s = optional_string(j, "pmcid", "article"); !s.empty()) a.pmcid = s;
  return a;
}

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path.string() + ": " + e.what(), line_no);
    }
    try {
      fn(j, line_no);
    } catch (const ParseError& e) {
      if (e.line()) throw;
      throw ParseError(path.string() + ": " + e.what(), line_no);
    }
  }
}

std::vector<RelationRecord> read_relations(const std::filesystem::path& path) {
  std::vector<RelationRecord> out;
  for_each_jsonl(path, [&](const json& j, std::size_t) { out.push_back(relation_from_json(j)); });
  return out;
}

std::vector<IntegratedRelation> read_integrated(const std::filesystem::path& path) {
  std::vector<IntegratedRelation> out;
  for_each_jsonl(path, [&](const json& j, std::size_t) { out.push_back(integrated_from_json(j)); });
  return out;
}

std::vector<ArticleRecord> read_articles(const std::filesystem::path& path) {
  std::vector<ArticleRecord> out;
  for_each_jsonl(path, [&](const json& j, std::size_t) { out.push_back(article_from_json(j)); });
  return out;
}

}  // namespace odg

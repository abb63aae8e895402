#include "odg/graph/graph.hpp"

#include <algorithm>
#include <tuple>

#include "odg/error.hpp"
#include "odg/resources.hpp"

namespace odg::graph {

using ojson = nlohmann::ordered_json;

std::string NodeKey::str() const {
  return std::string(kind == NodeKind::Concept ? vocab::kUmls : vocab::kPmid) + ":" + id;
}

NodeKey NodeKey::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const auto prefix = text.substr(0, colon);
    const std::string id(text.substr(colon + 1));
    if (prefix == vocab::kUmls && is_cui(id)) return for_concept(id);
    if (prefix == vocab::kPmid && is_pmid(id)) return for_article(id);
  }
  throw ParseError("malformed node key '" + std::string(text) + "'");
}

std::strong_ordering NodeKey::operator<=>(const NodeKey& other) const {
  // "PMID:" sorts before "UMLS:" and both prefixes have the same length, so
  // this matches comparing str() values.
  if (kind != other.kind) return kind == NodeKind::Article ? std::strong_ordering::less : std::strong_ordering::greater;
  return id <=> other.id;
}

bool ProvenanceEntry::same_identity(const ProvenanceEntry& o) const {
  return resource == o.resource && article_pmid == o.article_pmid && sentence_index == o.sentence_index &&
         negated == o.negated;
}

bool provenance_less(const ProvenanceEntry& a, const ProvenanceEntry& b) {
  return std::tuple(!a.resource.has_value(), a.resource, a.article_pmid, a.sentence_index, a.negated) <
         std::tuple(!b.resource.has_value(), b.resource, b.article_pmid, b.sentence_index, b.negated);
}

ProvenanceEntry provenance_for(const IntegratedRelation& r, std::string_view ts) {
  ProvenanceEntry p;
  p.harvest_timestamp = ts;
  const auto canonical = resources::canonical_predicate(r.predicate);
  const auto& a = r.attributes;
  if (auto it = a.find("article_pmid"); it != a.end() && it->is_string()) {
    p.article_pmid = it->get<std::string>();
    if (auto s = a.find("sentence_index"); s != a.end() && s->is_number_unsigned())
      p.sentence_index = s->get<std::size_t>();
    if (auto n = a.find("negated"); n != a.end() && n->is_boolean()) p.negated = n->get<bool>();
  } else if (canonical == predicate::kMentionedIn && r.object.kind == NodeKind::Article) {
    p.article_pmid = r.object.id;
    p.mention_count = 1;
    if (auto c = a.find("count"); c != a.end() && c->is_number_unsigned()) p.mention_count = c->get<std::size_t>();
    if (auto s = a.find("sentences"); s != a.end() && s->is_array())
      for (const auto& v : *s)
        if (v.is_number_unsigned()) p.sentences.insert(v.get<std::size_t>());
  } else if (canonical == predicate::kHasMesh && r.subject.kind == NodeKind::Article) {
    p.article_pmid = r.subject.id;
  } else {
    p.resource = r.source;
  }
  return p;
}

MergeStats& MergeStats::operator+=(const MergeStats& o) {
  nodes_added += o.nodes_added;
  edges_added += o.edges_added;
  provenance_appended += o.provenance_appended;
  duplicates_skipped += o.duplicates_skipped;
  return *this;
}

namespace {

void check_key(const NodeKey& key) {
  if (key.kind == NodeKind::Concept && !is_cui(key.id)) throw ContractViolation("malformed CUI '" + key.id + "'");
  if (key.kind == NodeKind::Article && !is_pmid(key.id)) throw ContractViolation("malformed PMID '" + key.id + "'");
}

Node stub_for(const NodeRef& ref) {
  Node n;
  n.key = NodeKey{ref.kind, ref.id};
  n.name = ref.name;
  return n;
}

// Keeps the earliest non-empty timestamp so merge order does not matter.
void merge_timestamp(std::string& into, const std::string& from) {
  if (!from.empty() && (into.empty() || from < into)) into = from;
}

}  // namespace

std::pair<NodeId, Graph::Upsert> Graph::upsert_node(Node incoming) {
  check_key(incoming.key);
  auto [it, inserted] = node_index_.try_emplace(incoming.key.str(), static_cast<NodeId>(nodes_.size()));
  if (inserted) {
    nodes_.push_back(std::move(incoming));
    out_.emplace_back();
    in_.emplace_back();
    return {it->second, Upsert::Added};
  }
  auto& n = nodes_[it->second];
  // Smallest non-empty name, so the result does not depend on merge order.
  if (!incoming.name.empty() && (n.name.empty() || incoming.name < n.name)) n.name = std::move(incoming.name);
  n.semantic_types.merge(incoming.semantic_types);
  n.source_vocabularies.merge(incoming.source_vocabularies);
  n.has_abstract = n.has_abstract || incoming.has_abstract;
  n.has_fulltext = n.has_fulltext || incoming.has_fulltext;
  if (incoming.pub_date && (!n.pub_date || *incoming.pub_date < *n.pub_date)) n.pub_date = incoming.pub_date;
  n.stub = n.stub && incoming.stub;
  return {it->second, Upsert::Merged};
}

NodeId Graph::upsert_concept(const ConceptNode& c) {
  Node n;
  n.key = NodeKey::for_concept(c.cui);
  n.name = c.preferred_name;
  n.semantic_types = c.semantic_types;
  n.source_vocabularies = c.source_vocabularies;
  n.stub = c.stub;
  return upsert_node(std::move(n)).first;
}

NodeId Graph::upsert_article(const ArticleNode& a) {
  Node n;
  n.key = NodeKey::for_article(a.pmid);
  n.name = a.title;
  n.has_abstract = a.has_abstract;
  n.has_fulltext = a.has_fulltext;
  n.pub_date = a.pub_date;
  n.stub = a.stub;
  return upsert_node(std::move(n)).first;
}

std::string Graph::edge_index_key(NodeId s, std::string_view p, NodeId o) {
  std::string k = std::to_string(s);
  k += '\x1f';
  k += p;
  k += '\x1f';
  k += std::to_string(o);
  return k;
}

std::pair<EdgeId, MergeStats> Graph::upsert_edge_impl(const IntegratedRelation& r, std::string_view ts) {
  MergeStats stats;
  auto [s, s_state] = upsert_node(stub_for(r.subject));
  auto [o, o_state] = upsert_node(stub_for(r.object));
  stats.nodes_added += (s_state == Upsert::Added) + (o_state == Upsert::Added);

  auto canonical = resources::canonical_predicate(r.predicate);
  auto prov = provenance_for(r, ts);
  auto [it, inserted] = edge_index_.try_emplace(edge_index_key(s, canonical, o), static_cast<EdgeId>(edges_.size()));
  if (inserted) {
    Edge e;
    e.subject = s;
    e.predicate = std::move(canonical);
    e.object = o;
    e.source_labels.insert(r.predicate);
    e.provenance.push_back(std::move(prov));
    edges_.push_back(std::move(e));
    out_[s].push_back(it->second);
    in_[o].push_back(it->second);
    stats.edges_added = 1;
    return {it->second, stats};
  }

  auto& e = edges_[it->second];
  e.source_labels.insert(r.predicate);
  auto pos = std::lower_bound(e.provenance.begin(), e.provenance.end(), prov, provenance_less);
  if (pos != e.provenance.end() && pos->same_identity(prov)) {
    pos->mention_count = std::max(pos->mention_count, prov.mention_count);
    pos->sentences.merge(prov.sentences);
    merge_timestamp(pos->harvest_timestamp, prov.harvest_timestamp);
    stats.duplicates_skipped = 1;
  } else {
    e.provenance.insert(pos, std::move(prov));
    stats.provenance_appended = 1;
  }
  return {it->second, stats};
}

EdgeId Graph::upsert_edge(const IntegratedRelation& relation, std::string_view ts) {
  return upsert_edge_impl(relation, ts).first;
}

MergeStats Graph::merge_increment(std::span<const IntegratedRelation> relations, std::string_view ts) {
  MergeStats total;
  for (const auto& r : relations) {
    for (const NodeRef* ref : {&r.subject, &r.object}) {
      Node n = stub_for(*ref);
      if (ref->kind == NodeKind::Concept) {
        n.semantic_types = ref->semantic_types;
        if (!ref->origin_vocab.empty()) n.source_vocabularies.insert(ref->origin_vocab);
        n.stub = false;
      }
      if (upsert_node(std::move(n)).second == Upsert::Added) ++total.nodes_added;
    }
    total += upsert_edge_impl(r, ts).second;
  }
  return total;
}

std::optional<NodeId> Graph::find(const NodeKey& key) const {
  auto it = node_index_.find(key.str());
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> Graph::find_edge(NodeId s, std::string_view p, NodeId o) const {
  auto it = edge_index_.find(edge_index_key(s, p, o));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> Graph::sorted_nodes() const {
  std::vector<NodeId> ids(nodes_.size());
  for (NodeId i = 0; i < ids.size(); ++i) ids[i] = i;
  std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) { return nodes_[a].key < nodes_[b].key; });
  return ids;
}

std::vector<EdgeId> Graph::sorted_edges() const {
  std::vector<EdgeId> ids(edges_.size());
  for (EdgeId i = 0; i < ids.size(); ++i) ids[i] = i;
  std::sort(ids.begin(), ids.end(), [&](EdgeId a, EdgeId b) {
    const auto& x = edges_[a];
    const auto& y = edges_[b];
    if (auto c = nodes_[x.subject].key <=> nodes_[y.subject].key; c != 0) return c < 0;
    if (auto c = x.predicate <=> y.predicate; c != 0) return c < 0;
    return nodes_[x.object].key < nodes_[y.object].key;
  });
  return ids;
}

ojson to_json(const Node& n) {
  ojson j;
  j["key"] = n.key.str();
  if (n.is_concept()) {
    j["kind"] = "concept";
    j["cui"] = n.key.id;
    j["preferred_name"] = n.name;
    j["semantic_types"] = n.semantic_types;
    j["source_vocabularies"] = n.source_vocabularies;
  } else {
    j["kind"] = "article";
    j["pmid"] = n.key.id;
    j["title"] = n.name;
    j["has_abstract"] = n.has_abstract;
    j["has_fulltext"] = n.has_fulltext;
    j["pub_date"] = n.pub_date ? ojson(n.pub_date->iso()) : ojson(nullptr);
  }
  j["stub"] = n.stub;
  return j;
}

ojson to_json(const ProvenanceEntry& p) {
  ojson j;
  if (p.resource) j["resource"] = *p.resource;
  if (p.article_pmid) j["article_pmid"] = *p.article_pmid;
  if (p.sentence_index) j["sentence_index"] = *p.sentence_index;
  if (p.negated) j["negated"] = *p.negated;
  if (p.mention_count > 0) j["mention_count"] = p.mention_count;
  if (!p.sentences.empty()) j["sentences"] = p.sentences;
  j["harvest_timestamp"] = p.harvest_timestamp;
  return j;
}

namespace {

template <typename T>
T field(const json& j, const char* key, const char* ctx) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string(ctx) + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string(ctx) + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

Node node_from_json(const json& j) {
  Node n;
  n.key = NodeKey::parse(field<std::string>(j, "key", "node"));
  const auto kind = field<std::string>(j, "kind", "node");
  if (kind != (n.is_concept() ? "concept" : "article")) throw ParseError("node: kind does not match key " + n.key.str());
  if (n.is_concept()) {
    n.name = field<std::string>(j, "preferred_name", "node");
    n.semantic_types = field<std::set<std::string>>(j, "semantic_types", "node");
    n.source_vocabularies = field<std::set<std::string>>(j, "source_vocabularies", "node");
  } else {
    n.name = field<std::string>(j, "title", "node");
    n.has_abstract = field<bool>(j, "has_abstract", "node");
    n.has_fulltext = field<bool>(j, "has_fulltext", "node");
    if (auto it = j.find("pub_date"); it != j.end() && !it->is_null()) {
      n.pub_date = Date::parse(field<std::string>(j, "pub_date", "node"));
      if (!n.pub_date) throw ParseError("node: malformed pub_date");
    }
  }
  n.stub = field<bool>(j, "stub", "node");
  return n;
}

ProvenanceEntry provenance_from_json(const json& j) {
  ProvenanceEntry p;
  if (j.contains("resource")) p.resource = field<std::string>(j, "resource", "provenance");
  if (j.contains("article_pmid")) p.article_pmid = field<std::string>(j, "article_pmid", "provenance");
  if (p.resource.has_value() == p.article_pmid.has_value())
    throw ParseError("provenance: exactly one of 'resource' and 'article_pmid' is required");
  if (j.contains("sentence_index")) p.sentence_index = field<std::size_t>(j, "sentence_index", "provenance");
  if (j.contains("negated")) p.negated = field<bool>(j, "negated", "provenance");
  if (j.contains("mention_count")) p.mention_count = field<std::size_t>(j, "mention_count", "provenance");
  if (j.contains("sentences")) p.sentences = field<std::set<std::size_t>>(j, "sentences", "provenance");
  p.harvest_timestamp = field<std::string>(j, "harvest_timestamp", "provenance");
  return p;
}

std::string Graph::nodes_jsonl() const {
  std::string out;
  for (auto id : sorted_nodes()) {
    out += to_json(nodes_[id]).dump();
    out += '\n';
  }
  return out;
}

std::string Graph::edges_jsonl() const {
  std::string out;
  for (auto id : sorted_edges()) {
    const auto& e = edges_[id];
    ojson j;
    j["subject"] = nodes_[e.subject].key.str();
    j["predicate"] = e.predicate;
    j["object"] = nodes_[e.object].key.str();
    j["aggregate_count"] = e.aggregate_count();
    j["source_labels"] = e.source_labels;
    auto& prov = j["provenance"] = ojson::array();
    for (const auto& p : e.provenance) prov.push_back(to_json(p));
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string Graph::content_hash() const { return sha256_hex(nodes_jsonl() + edges_jsonl()); }

bool Graph::operator==(const Graph& other) const {
  return node_count() == other.node_count() && edge_count() == other.edge_count() &&
         nodes_jsonl() == other.nodes_jsonl() && edges_jsonl() == other.edges_jsonl();
}

NodeId Graph::restore_node(Node node) {
  const auto key = node.key.str();
  if (node_index_.contains(key)) throw CorruptionError("duplicate node " + key);
  try {
    check_key(node.key);
  } catch (const ContractViolation& e) {
    throw CorruptionError(e.what());
  }
  return upsert_node(std::move(node)).first;
}

EdgeId Graph::restore_edge(Edge edge) {
  if (edge.subject >= nodes_.size() || edge.object >= nodes_.size()) throw CorruptionError("edge with unknown endpoint");
  if (edge.provenance.empty()) throw CorruptionError("edge without provenance");
  std::sort(edge.provenance.begin(), edge.provenance.end(), provenance_less);
  for (std::size_t i = 1; i < edge.provenance.size(); ++i)
    if (edge.provenance[i - 1].same_identity(edge.provenance[i])) throw CorruptionError("duplicate provenance entry");
  auto [it, inserted] =
      edge_index_.try_emplace(edge_index_key(edge.subject, edge.predicate, edge.object), static_cast<EdgeId>(edges_.size()));
  if (!inserted) throw CorruptionError("duplicate edge " + nodes_[edge.subject].key.str() + " " + edge.predicate);
  out_[edge.subject].push_back(it->second);
  in_[edge.object].push_back(it->second);
  edges_.push_back(std::move(edge));
  return it->second;
}

}  // namespace odg::graph

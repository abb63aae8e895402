#include "odg/query/queries.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "odg/error.hpp"

namespace odg::query {

using graph::EdgeId;
using graph::Graph;
using graph::NodeId;
using graph::NodeKey;

namespace {

constexpr std::string_view kIsa = "ISA";
constexpr std::string_view kInteractsWith = "INTERACTS_WITH";

NodeId require_concept(const Graph& g, std::string_view cui) {
  auto id = g.find_concept(cui);
  if (!id) throw NotFoundError("unknown concept " + std::string(cui));
  return *id;
}

bool is_mentioned_in(const graph::Edge& e) { return e.predicate == predicate::kMentionedIn; }

// Article nodes linked to `concept` by MENTIONED_IN.
std::vector<NodeId> mentioned_articles(const Graph& g, NodeId concept_id) {
  std::vector<NodeId> out;
  for (auto eid : g.out_edges(concept_id)) {
    const auto& e = g.edge(eid);
    if (is_mentioned_in(e) && !g.node(e.object).is_concept()) out.push_back(e.object);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

bool is_literature_predicate(std::string_view p) { return p == predicate::kMentionedIn || p == predicate::kHasMesh; }

std::optional<std::size_t> SemanticTypeRanking::rank_of(std::string_view type) const {
  for (const auto& r : rows)
    if (r.semantic_type == type) return r.rank;
  return std::nullopt;
}

SemanticTypeRanking SemanticTypeRanking::from_order(std::span<const std::string> types) {
  SemanticTypeRanking r;
  for (std::size_t i = 0; i < types.size(); ++i) r.rows.push_back(RankingRow{types[i], 0, i + 1});
  return r;
}

SemanticTypeRanking rank_semantic_types(const Graph& g) {
  std::map<std::string, std::size_t> counts;
  for (NodeId id = 0; id < g.node_count(); ++id) {
    const auto& n = g.node(id);
    if (!n.is_concept() || n.semantic_types.empty()) continue;
    const auto& out = g.out_edges(id);
    if (std::none_of(out.begin(), out.end(), [&](EdgeId e) { return is_mentioned_in(g.edge(e)); })) continue;
    for (const auto& t : n.semantic_types) ++counts[t];
  }
  SemanticTypeRanking ranking;
  for (const auto& [type, count] : counts) ranking.rows.push_back(RankingRow{type, count, 0});
  std::stable_sort(ranking.rows.begin(), ranking.rows.end(),
                   [](const RankingRow& a, const RankingRow& b) { return a.concept_count > b.concept_count; });
  for (std::size_t i = 0; i < ranking.rows.size(); ++i) ranking.rows[i].rank = i + 1;
  return ranking;
}

double sample_stdev(std::span<const double> values) {
  if (values.size() < 2) throw ContractViolation("sample standard deviation needs at least two values");
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::vector<RankComparisonRow> compare_rankings(std::span<const SemanticTypeRanking> rankings) {
  if (rankings.size() < 2)
    throw ContractViolation("compare_rankings needs at least two rankings, got " + std::to_string(rankings.size()));
  std::vector<std::map<std::string_view, std::size_t>> lookup(rankings.size());
  for (std::size_t k = 0; k < rankings.size(); ++k)
    for (const auto& r : rankings[k].rows) lookup[k].emplace(r.semantic_type, r.rank);

  std::vector<RankComparisonRow> out;
  for (const auto& [type, first_rank] : lookup[0]) {
    RankComparisonRow row{std::string(type), {first_rank}, 0.0};
    bool everywhere = true;
    for (std::size_t k = 1; k < lookup.size() && everywhere; ++k) {
      auto it = lookup[k].find(type);
      if (it == lookup[k].end()) everywhere = false;
      else row.ranks.push_back(it->second);
    }
    if (!everywhere) continue;
    std::vector<double> values(row.ranks.begin(), row.ranks.end());
    row.stdv = sample_stdev(values);
    out.push_back(std::move(row));
  }
  std::sort(out.begin(), out.end(), [](const RankComparisonRow& a, const RankComparisonRow& b) {
    if (a.stdv != b.stdv) return a.stdv > b.stdv;
    return a.semantic_type < b.semantic_type;
  });
  return out;
}

ConceptProfile concept_profile(const Graph& g, std::string_view cui) {
  const auto id = require_concept(g, cui);
  ConceptProfile p;
  p.cui = std::string(cui);
  p.name = g.node(id).name;

  std::set<EdgeId> relation_edges;
  std::set<std::string_view> relation_types;
  std::set<NodeId> neighbors;
  auto visit = [&](EdgeId eid, NodeId other) {
    const auto& e = g.edge(eid);
    if (is_literature_predicate(e.predicate)) return;
    relation_edges.insert(eid);
    relation_types.insert(e.predicate);
    if (other != id && g.node(other).is_concept()) neighbors.insert(other);
  };
  for (auto eid : g.out_edges(id)) {
    const auto& e = g.edge(eid);
    if (is_mentioned_in(e) && !g.node(e.object).is_concept()) {
      ++p.article_count;
      for (const auto& prov : e.provenance) p.mention_total += std::max<std::size_t>(1, prov.mention_count);
    }
    visit(eid, e.object);
  }
  for (auto eid : g.in_edges(id)) {
    const auto& e = g.edge(eid);
    if (e.predicate == predicate::kHasMesh && !g.node(e.subject).is_concept()) ++p.topic_article_count;
    visit(eid, e.subject);
  }
  p.relation_edge_count = relation_edges.size();
  p.relation_type_count = relation_types.size();
  p.neighbor_concept_count = neighbors.size();
  return p;
}

std::vector<CooccurringConcept> cooccurring_descendants(const Graph& g, std::string_view anchor_cui,
                                                        std::string_view ancestor_cui, std::size_t max_depth) {
  const auto anchor = require_concept(g, anchor_cui);
  const auto ancestor = require_concept(g, ancestor_cui);

  // Reverse breadth-first walk over ISA: subject ISA object.
  std::unordered_map<NodeId, std::size_t> depth{{ancestor, 0}};
  std::deque<NodeId> queue{ancestor};
  std::vector<NodeId> descendants;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    if (depth[v] == max_depth) continue;
    for (auto eid : g.in_edges(v)) {
      const auto& e = g.edge(eid);
      if (e.predicate != kIsa || !g.node(e.subject).is_concept()) continue;
      if (depth.try_emplace(e.subject, depth[v] + 1).second) {
        descendants.push_back(e.subject);
        queue.push_back(e.subject);
      }
    }
  }

  const auto anchor_articles = mentioned_articles(g, anchor);
  std::vector<CooccurringConcept> out;
  for (auto x : descendants) {
    if (x == anchor || x == ancestor) continue;
    const auto articles = mentioned_articles(g, x);
    std::vector<NodeId> shared;
    std::set_intersection(articles.begin(), articles.end(), anchor_articles.begin(), anchor_articles.end(),
                          std::back_inserter(shared));
    if (shared.empty()) continue;
    const auto& n = g.node(x);
    out.push_back(CooccurringConcept{n.key.id, n.name, shared.size()});
  }
  std::sort(out.begin(), out.end(), [](const CooccurringConcept& a, const CooccurringConcept& b) {
    if (a.shared_article_count != b.shared_article_count) return a.shared_article_count > b.shared_article_count;
    return a.cui < b.cui;
  });
  return out;
}

Enrichment interaction_enrichment(const Graph& g, std::string_view cui, const std::optional<std::string>& filter_source) {
  const auto id = require_concept(g, cui);
  const auto wanted = filter_source ? std::optional(to_lower_ascii(*filter_source)) : std::nullopt;
  std::set<NodeId> partners;
  std::set<NodeId> filtered;
  auto visit = [&](EdgeId eid, NodeId other) {
    const auto& e = g.edge(eid);
    if (e.predicate != kInteractsWith || other == id || !g.node(other).is_concept()) return;
    partners.insert(other);
    if (!wanted) {
      filtered.insert(other);
      return;
    }
    for (const auto& p : e.provenance) {
      if (p.resource && to_lower_ascii(*p.resource) == *wanted) {
        filtered.insert(other);
        return;
      }
    }
  };
  for (auto eid : g.out_edges(id)) visit(eid, g.edge(eid).object);
  for (auto eid : g.in_edges(id)) visit(eid, g.edge(eid).subject);

  auto enzymes = [&](const std::set<NodeId>& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](NodeId n) {
      return g.node(n).semantic_types.contains(std::string(kEnzymeType));
    }));
  };
  return Enrichment{partners.size(), filtered.size(), enzymes(partners), enzymes(filtered)};
}

namespace {

class UndirectedView {
 public:
  UndirectedView(const Graph& g, bool concept_only) : g_(g), concept_only_(concept_only) {}

  bool usable(const graph::Edge& e) const { return !(concept_only_ && is_literature_predicate(e.predicate)); }

  // Distinct neighbours sorted by node key.
  const std::vector<NodeId>& neighbors(NodeId v) {
    auto [it, fresh] = cache_.try_emplace(v);
    if (!fresh) return it->second;
    auto& list = it->second;
    for (auto eid : g_.out_edges(v))
      if (usable(g_.edge(eid))) list.push_back(g_.edge(eid).object);
    for (auto eid : g_.in_edges(v))
      if (usable(g_.edge(eid))) list.push_back(g_.edge(eid).subject);
    std::sort(list.begin(), list.end(), [&](NodeId a, NodeId b) { return g_.node(a).key < g_.node(b).key; });
    list.erase(std::unique(list.begin(), list.end()), list.end());
    std::erase(list, v);
    return list;
  }

  std::vector<HopEdge> hop(NodeId a, NodeId b) const {
    std::vector<HopEdge> out;
    for (auto eid : g_.out_edges(a)) {
      const auto& e = g_.edge(eid);
      if (e.object == b && usable(e)) out.push_back(HopEdge{e.predicate, true});
    }
    for (auto eid : g_.in_edges(a)) {
      const auto& e = g_.edge(eid);
      if (e.subject == b && usable(e)) out.push_back(HopEdge{e.predicate, false});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Breadth-first distances from `source`, up to `limit` hops.
  std::unordered_map<NodeId, std::size_t> distances(NodeId source, std::size_t limit) {
    std::unordered_map<NodeId, std::size_t> dist{{source, 0}};
    std::deque<NodeId> queue{source};
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      const auto d = dist[v];
      if (d == limit) continue;
      for (auto w : neighbors(v))
        if (dist.try_emplace(w, d + 1).second) queue.push_back(w);
    }
    return dist;
  }

 private:
  const Graph& g_;
  bool concept_only_;
  std::unordered_map<NodeId, std::vector<NodeId>> cache_;
};

}  // namespace

std::vector<PathResult> shortest_paths(const Graph& g, const NodeKey& from, const NodeKey& to,
                                       const PathOptions& options) {
  if (options.max_hops == 0) throw ContractViolation("max_hops must be at least 1");
  const auto a = g.find(from);
  if (!a) throw NotFoundError("unknown node " + from.str());
  const auto b = g.find(to);
  if (!b) throw NotFoundError("unknown node " + to.str());
  if (*a == *b) return {PathResult{{from}, {}}};

  UndirectedView view(g, options.concept_only);
  const auto from_a = view.distances(*a, options.max_hops);
  const auto hit = from_a.find(*b);
  if (hit == from_a.end()) return {};
  const auto length = hit->second;
  const auto from_b = view.distances(*b, length);

  auto on_shortest = [&](NodeId v, std::size_t step) {
    auto da = from_a.find(v);
    auto db = from_b.find(v);
    return da != from_a.end() && db != from_b.end() && da->second == step && db->second == length - step;
  };

  std::vector<PathResult> out;
  std::vector<NodeId> stack{*a};
  auto emit = [&] {
    PathResult p;
    for (auto v : stack) p.nodes.push_back(g.node(v).key);
    for (std::size_t i = 0; i + 1 < stack.size(); ++i) p.hops.push_back(view.hop(stack[i], stack[i + 1]));
    out.push_back(std::move(p));
  };
  auto extend = [&](auto& self) -> void {
    if (out.size() >= options.max_paths) return;
    const auto step = stack.size() - 1;
    if (step == length) {
      emit();
      return;
    }
    for (auto w : view.neighbors(stack.back())) {
      if (!on_shortest(w, step + 1)) continue;
      stack.push_back(w);
      self(self);
      stack.pop_back();
    }
  };
  extend(extend);
  return out;
}

}  // namespace odg::query

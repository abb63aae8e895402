#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "generators.hpp"
#include "odg/analysis/tagger.hpp"
#include "odg/analysis/text.hpp"
#include "odg/graph/graph.hpp"
#include "odg/graph/snapshot.hpp"
#include "odg/integration/mapping.hpp"
#include "odg/query/queries.hpp"
#include "odg/resources.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace odg {
namespace {

using graph::Graph;
using graph::NodeKey;
using test::Rng;
namespace oracle = test::oracle;

constexpr std::uint64_t kSeeds = 60;

Graph build(std::span<const IntegratedRelation> rels) {
  Graph g;
  g.merge_increment(rels, "2024-01-01");
  return g;
}

std::vector<IntegratedRelation> random_graph_relations(Rng& rng) {
  return test::random_relations(rng, test::random_shape(rng, 120, 500));
}

std::set<oracle::Triple> graph_triples(const Graph& g) {
  std::set<oracle::Triple> out;
  for (const auto& e : g.edges()) out.insert({g.node(e.subject).key.str(), e.predicate, g.node(e.object).key.str()});
  return out;
}

std::vector<std::string> concept_ids(const Graph& g) {
  std::vector<std::string> out;
  for (const auto& n : g.nodes())
    if (n.is_concept()) out.push_back(n.key.id);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(GraphProperty, MatchesTripleAndProvenanceOracle) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed);
    const auto rels = random_graph_relations(rng);
    const auto g = build(rels);
    SCOPED_TRACE("seed " + std::to_string(seed));

    std::set<std::string> keys;
    for (const auto& n : g.nodes()) keys.insert(n.key.str());
    EXPECT_EQ(keys, oracle::node_keys(rels));
    EXPECT_EQ(graph_triples(g), oracle::triples(rels));
    ASSERT_EQ(g.edge_count(), oracle::triples(rels).size());

    const auto counts = oracle::provenance_counts(rels);
    for (const auto& e : g.edges()) {
      const oracle::Triple t{g.node(e.subject).key.str(), e.predicate, g.node(e.object).key.str()};
      EXPECT_EQ(e.aggregate_count(), counts.at(t));
      EXPECT_TRUE(std::is_sorted(e.provenance.begin(), e.provenance.end(), graph::provenance_less));
    }
  }
}

TEST(GraphProperty, MergeOrderDoesNotMatter) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed * 7919);
    auto rels = random_graph_relations(rng);
    const auto reference = build(rels);
    for (int shuffle = 0; shuffle < 3; ++shuffle) {
      rng.shuffle(rels);
      EXPECT_EQ(build(rels).content_hash(), reference.content_hash()) << "seed " << seed;
    }
  }
}

TEST(GraphProperty, SplitMergeEqualsSingleMerge) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed + 1000);
    const auto rels = random_graph_relations(rng);
    const auto cut = rng.below(rels.size() + 1);
    Graph g;
    const auto first = g.merge_increment(std::span(rels).first(cut), "2024-01-01");
    const auto second = g.merge_increment(std::span(rels).subspan(cut), "2024-01-01");
    const auto single = build(rels);
    EXPECT_EQ(g, single) << "seed " << seed;

    auto total = first;
    total += second;
    EXPECT_EQ(total.nodes_added, single.node_count());
    EXPECT_EQ(total.edges_added, single.edge_count());
    EXPECT_EQ(total.edges_added + total.provenance_appended + total.duplicates_skipped, rels.size());
  }
}

TEST(GraphProperty, ReplayIsIdempotent) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed + 2000);
    const auto rels = random_graph_relations(rng);
    auto g = build(rels);
    const auto hash = g.content_hash();
    const auto again = g.merge_increment(rels, "2025-06-01");
    EXPECT_EQ(again.nodes_added + again.edges_added + again.provenance_appended, 0u);
    EXPECT_EQ(g.content_hash(), hash) << "seed " << seed;
  }
}

TEST(GraphProperty, SnapshotRoundTrip) {
  test::TempDir dir;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed + 3000);
    const auto g = build(random_graph_relations(rng));
    const auto snap = dir / ("s" + std::to_string(seed));
    graph::save_snapshot(g, snap, "2024-01-01");
    const auto loaded = graph::load_snapshot(snap);
    EXPECT_EQ(loaded.graph, g) << "seed " << seed;
    // Loading then saving reproduces the same bytes.
    graph::save_snapshot(loaded.graph, dir / "again", "2024-01-01");
    EXPECT_EQ(read_file(snap / graph::kEdgesFile), read_file(dir / "again" / graph::kEdgesFile));
  }
}

TEST(QueryProperty, RankingMatchesTypeCounts) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed + 4000);
    const auto rels = random_graph_relations(rng);
    const auto ranking = query::rank_semantic_types(build(rels));
    const auto expected = oracle::type_counts(rels);
    ASSERT_EQ(ranking.rows.size(), expected.size());
    for (std::size_t i = 0; i < ranking.rows.size(); ++i) {
      const auto& row = ranking.rows[i];
      EXPECT_EQ(row.rank, i + 1);
      EXPECT_EQ(row.concept_count, expected.at(row.semantic_type));
      if (i > 0) {
        const auto& prev = ranking.rows[i - 1];
        EXPECT_TRUE(prev.concept_count > row.concept_count ||
                    (prev.concept_count == row.concept_count && prev.semantic_type < row.semantic_type));
      }
    }
  }
}

TEST(QueryProperty, ProfileCooccurrenceAndEnrichmentMatchOracle) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed + 5000);
    const auto rels = random_graph_relations(rng);
    const auto g = build(rels);
    const auto cuis = concept_ids(g);
    SCOPED_TRACE("seed " + std::to_string(seed));
    for (int probe = 0; probe < 5; ++probe) {
      const auto& cui = rng.pick(cuis);
      const auto p = query::concept_profile(g, cui);
      const auto o = oracle::profile(rels, cui);
      EXPECT_EQ((oracle::Profile{p.mention_total, p.article_count, p.topic_article_count, p.relation_edge_count,
                                 p.relation_type_count, p.neighbor_concept_count}),
                o)
          << cui;

      const auto& ancestor = rng.pick(cuis);
      const auto depth = rng.between(0, 4);
      std::vector<std::pair<std::string, std::size_t>> got;
      for (const auto& c : query::cooccurring_descendants(g, cui, ancestor, depth))
        got.emplace_back(c.cui, c.shared_article_count);
      EXPECT_EQ(got, oracle::cooccurring(rels, cui, ancestor, depth)) << cui << " under " << ancestor;

      const std::optional<std::string> source =
          rng.chance(0.5) ? std::optional<std::string>("SRC" + std::to_string(rng.below(3))) : std::nullopt;
      const auto e = query::interaction_enrichment(g, cui, source);
      EXPECT_EQ((oracle::Enrichment{e.interacting_concept_count, e.interacting_filtered_count,
                                    e.interacting_enzyme_count, e.filtered_enzyme_count}),
                oracle::enrichment(rels, cui, source));
    }
  }
}

TEST(QueryProperty, ShortestPathsMatchExhaustiveSearch) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed + 6000);
    test::GraphShape shape;
    shape.concepts = rng.between(5, 30);
    shape.articles = rng.between(1, 10);
    shape.relations = rng.between(10, 60);
    const auto rels = test::random_relations(rng, shape);
    const auto g = build(rels);
    std::vector<std::string> keys;
    for (const auto& n : g.nodes()) keys.push_back(n.key.str());
    SCOPED_TRACE("seed " + std::to_string(seed));
    for (int probe = 0; probe < 4; ++probe) {
      const auto& from = rng.pick(keys);
      const auto& to = rng.pick(keys);
      query::PathOptions opt;
      opt.max_hops = rng.between(1, 4);
      opt.concept_only = rng.chance(0.3);
      if (opt.concept_only && (from.starts_with("PMID") || to.starts_with("PMID"))) continue;
      const auto got = query::shortest_paths(g, NodeKey::parse(from), NodeKey::parse(to), opt);
      const auto want = oracle::shortest_paths(rels, from, to, opt.max_hops, opt.concept_only);
      ASSERT_EQ(got.size(), want.size()) << from << " -> " << to;
      for (std::size_t i = 0; i < got.size(); ++i) {
        std::vector<std::string> nodes;
        for (const auto& k : got[i].nodes) nodes.push_back(k.str());
        EXPECT_EQ(nodes, want[i].nodes);
        ASSERT_EQ(got[i].hops.size(), want[i].hops.size());
        for (std::size_t h = 0; h < got[i].hops.size(); ++h) {
          std::vector<std::pair<std::string, bool>> hop;
          for (const auto& e : got[i].hops[h]) hop.emplace_back(e.predicate, e.forward);
          EXPECT_EQ(hop, want[i].hops[h]);
        }
      }
    }
  }
}

// ---- integration ----

TEST(IntegrationProperty, EveryRecordIsAccountedFor) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed + 7000);
    // Independent cross-walk: per (SAB, code), the CUI with more conso rows
    // wins, then the smaller CUI.
    struct Row {
      std::string cui, sab, code;
    };
    std::vector<Row> rows;
    const std::size_t concepts = rng.between(5, 40);
    for (std::size_t i = 0; i < concepts; ++i)
      for (const char* sab : {"GO", "DOID", "MSH"})
        for (std::size_t k = 0, n = rng.below(3); k < n; ++k)
          rows.push_back({test::cui_for(i + 1), sab, std::to_string(rng.below(60))});
    rows.push_back({test::cui_for(9999), "GO", "9999"});

    std::string conso;
    std::map<std::string, std::size_t> row_count;
    for (const auto& r : rows) {
      conso += r.cui + "\t" + r.sab + "\t" + r.code + "\tterm " + r.cui + "\tY\n";
      ++row_count[r.cui];
    }
    std::map<std::pair<std::string, std::string>, std::string> crosswalk;
    for (const auto& r : rows) {
      auto [it, fresh] = crosswalk.try_emplace({r.sab, r.code}, r.cui);
      if (fresh) continue;
      const auto a = row_count[r.cui], b = row_count[it->second];
      if (a > b || (a == b && r.cui < it->second)) it->second = r.cui;
    }
    const auto table = integration::MappingTable::parse(conso, "");

    std::vector<RelationRecord> records;
    const std::vector<std::string> vocabs = {"GO", "doid", "MSH", "UMLS", "PMID", "HPO"};
    auto endpoint = [&] {
      const auto& v = rng.pick(vocabs);
      std::string code = v == "UMLS" ? (rng.chance(0.8) ? test::cui_for(rng.below(60)) : "junk")
                                     : std::to_string(rng.below(60));
      if (v == "GO" && rng.chance(0.3)) code = "GO:" + code;
      return Endpoint{v, code, "label", {}};
    };
    const auto n = rng.between(1, 300);
    for (std::size_t i = 0; i < n; ++i)
      records.push_back(RelationRecord{endpoint(), "is a", endpoint(), "src", json::object()});

    const auto res = integration::resolve_relations(records, table);
    EXPECT_EQ(res.relations.size() + res.unmapped.size(), records.size()) << "seed " << seed;

    auto expected_key = [&](const Endpoint& e) -> std::optional<std::string> {
      if (e.vocab == "PMID") return "PMID:" + e.code;
      if (e.vocab == "UMLS") return e.code == "junk" ? std::nullopt : std::optional(e.code);
      std::string code = e.code;
      if (code.starts_with("GO:")) code = code.substr(3);
      auto it = crosswalk.find({to_upper_ascii(e.vocab), code});
      return it == crosswalk.end() ? std::nullopt : std::optional(it->second);
    };
    std::vector<std::pair<std::string, std::string>> want;
    for (const auto& r : records) {
      const auto s = expected_key(r.subject);
      const auto o = expected_key(r.object);
      if (s && o && (*s != *o || s->starts_with("PMID:"))) want.emplace_back(*s, *o);
    }
    std::vector<std::pair<std::string, std::string>> got;
    for (const auto& r : res.relations)
      got.emplace_back(r.subject.kind == NodeKind::Article ? "PMID:" + r.subject.id : r.subject.id,
                       r.object.kind == NodeKind::Article ? "PMID:" + r.object.id : r.object.id);
    EXPECT_EQ(got, want) << "seed " << seed;

    std::vector<RelationRecord> replay;
    for (const auto& r : res.relations) replay.push_back(to_relation_record(r));
    const auto again = integration::resolve_relations(replay, table);
    EXPECT_TRUE(again.unmapped.empty());
    EXPECT_EQ(again.relations, res.relations);
  }
}

// ---- text analysis ----

// Leftmost-longest search by trying every start and every lexicon term.
std::vector<std::pair<std::size_t, std::size_t>> naive_scan(const std::vector<std::string>& lexicon,
                                                            const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t best = 0;
    if (i == 0 || !is_word_byte(text[i - 1])) {
      for (const auto& term : lexicon) {
        if (i + term.size() > text.size() || term.size() <= best) continue;
        if (to_lower_ascii(text.substr(i, term.size())) != term) continue;
        const auto end = i + term.size();
        if (end < text.size() && is_word_byte(text[end]) && is_word_byte(text[end - 1])) continue;
        best = term.size();
      }
    }
    if (best > 0) {
      out.emplace_back(i, i + best);
      i += best;
    } else {
      ++i;
    }
  }
  return out;
}

TEST(TextProperty, TaggerMatchesNaiveSearch) {
  const std::vector<std::string> words = {"a", "ab", "abc", "b", "bc", "cab", "ca"};
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed + 8000);
    std::vector<std::string> lexicon;
    std::unordered_map<std::string, std::string> dict;
    for (std::size_t i = 0, n = rng.between(1, 6); i < n; ++i) {
      std::string term = rng.pick(words);
      if (rng.chance(0.4)) term += " " + rng.pick(words);
      if (dict.emplace(term, test::cui_for(i + 1)).second) lexicon.push_back(term);
    }
    std::string text;
    for (std::size_t i = 0, n = rng.between(1, 25); i < n; ++i) {
      if (!text.empty()) text += rng.chance(0.2) ? ", " : " ";
      std::string w = rng.pick(words);
      if (rng.chance(0.2)) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      text += w;
    }
    const analysis::DictionaryTagger tagger(dict);
    std::vector<std::pair<std::size_t, std::size_t>> got;
    for (const auto& m : tagger.scan(text)) got.emplace_back(m.span.begin, m.span.end);
    EXPECT_EQ(got, naive_scan(lexicon, text)) << "text: " << text;
  }
}

TEST(TextProperty, SentenceSpansCoverText) {
  const std::vector<std::string> words = {"Alpha", "beta", "e.g.", "Fig.", "gamma.", "Delta?", "et", "al.", "x!"};
  const auto& abbr = resources::abbreviations();
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed + 9000);
    std::string text;
    for (std::size_t i = 0, n = rng.between(1, 40); i < n; ++i) {
      if (!text.empty()) text += ' ';
      text += rng.pick(words);
    }
    const auto sentences = analysis::split_sentences(text, abbr);
    ASSERT_FALSE(sentences.empty());
    std::string rebuilt;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const auto& s = sentences[i];
      EXPECT_EQ(s.index, i);
      EXPECT_EQ(text.substr(s.span.begin, s.span.end - s.span.begin), s.text);
      if (i > 0) EXPECT_EQ(s.span.begin, sentences[i - 1].span.end + 1);
      if (!rebuilt.empty()) rebuilt += ' ';
      rebuilt += s.text;
    }
    EXPECT_EQ(rebuilt, text);
  }
}

TEST(RecordProperty, RelationJsonRoundTrip) {
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    Rng rng(seed + 10000);
    for (const auto& r : test::random_relations(rng, {})) {
      const auto back = integrated_from_json(json::parse(to_json(r).dump()));
      EXPECT_EQ(back, r);
      const auto rec = to_relation_record(r);
      EXPECT_EQ(relation_from_json(json::parse(to_json(rec).dump())), rec);
    }
  }
}

}  // namespace
}  // namespace odg

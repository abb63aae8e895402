#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "odg/error.hpp"
#include "odg/query/format.hpp"
#include "odg/query/queries.hpp"

namespace odg::query {
namespace {

using graph::Graph;
using graph::NodeKey;
using test::article_ref;
using test::concept_ref;

const NodeRef kPlants = concept_ref("C0000001", "plants", {"Plant"});
const NodeRef kAloe = concept_ref("C0000002", "aloe", {"Plant"});
const NodeRef kBark = concept_ref("C0000003", "bark", {"Plant"});
const NodeRef kKinase = concept_ref("C0000004", "kinase", {"Enzyme"});
const NodeRef kDrug = concept_ref("C0000005", "drug", {"Pharmacologic Substance"});
const NodeRef kOrphan = concept_ref("C0000006", "orphan", {"Enzyme"});

// Small hand-built graph; expected query answers are worked out in each test.
Graph sample() {
  const auto a1 = article_ref("1"), a2 = article_ref("2"), a3 = article_ref("3");
  const std::vector<IntegratedRelation> rels{
      test::mention_relation(kPlants, a1, 2, {0, 1}),
      test::mention_relation(kPlants, a2, 1, {0}),
      test::mention_relation(kAloe, a1, 1, {2}),
      test::mention_relation(kAloe, a2, 1, {1}),
      test::mention_relation(kBark, a2, 1, {3}),
      test::mention_relation(kKinase, a3, 1, {0}),
      test::mention_relation(kDrug, a1, 1, {1}),
      test::mention_relation(kDrug, a3, 2, {0, 1}),
      test::has_mesh_relation(a1, kPlants),
      test::has_mesh_relation(a3, kPlants),
      test::structured_relation(kAloe, "is a", kPlants, "DO"),
      test::structured_relation(kBark, "is a", kAloe, "DO"),
      test::structured_relation(kPlants, "location of", kKinase, "SN"),
      test::structured_relation(kKinase, "interacts with", kPlants, "DrugBank"),
      test::literature_relation(kDrug, "INTERACTS_WITH", kPlants, "1", 0),
      test::structured_relation(kDrug, "interacts with", kPlants, "DRUGBANK"),
      test::structured_relation(kOrphan, "interacts with", kPlants, "CTD"),
  };
  Graph g;
  g.merge_increment(rels, "t");
  return g;
}

TEST(Ranking, CountsMentionedConceptsPerType) {
  const auto r = rank_semantic_types(sample());
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0], (RankingRow{"Plant", 3, 1}));
  EXPECT_EQ(r.rows[1], (RankingRow{"Enzyme", 1, 2}));  // the orphan enzyme has no mentions
  EXPECT_EQ(r.rows[2], (RankingRow{"Pharmacologic Substance", 1, 3}));
  EXPECT_EQ(r.rank_of("Enzyme"), 2u);
  EXPECT_FALSE(r.rank_of("Bacterium"));
}

TEST(Ranking, EmptyGraphHasNoRows) { EXPECT_TRUE(rank_semantic_types(Graph{}).rows.empty()); }

TEST(Ranking, SampleStdev) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_NEAR(sample_stdev(v), std::sqrt(5.0 / 3.0), 1e-12);
  const std::vector<double> one{1};
  EXPECT_THROW(sample_stdev(one), ContractViolation);
}

TEST(Ranking, PlantRowFromPublishedRanks) {
  const std::vector<double> ranks{23, 22, 79};
  EXPECT_EQ(format_stdv(sample_stdev(ranks)), "32.62");
}

TEST(Ranking, CompareKeepsTypesPresentEverywhere) {
  const std::vector<std::string> a{"A", "B", "C", "D"};
  const std::vector<std::string> b{"D", "C", "B"};
  const std::vector<std::string> c{"B", "D", "C", "A"};
  const std::vector<SemanticTypeRanking> rankings{SemanticTypeRanking::from_order(a),
                                                  SemanticTypeRanking::from_order(b),
                                                  SemanticTypeRanking::from_order(c)};
  const auto rows = compare_rankings(rankings);
  ASSERT_EQ(rows.size(), 3u);
  // D: 4,1,2  B: 2,3,1  C: 3,2,3
  EXPECT_EQ(rows[0].semantic_type, "D");
  EXPECT_EQ(rows[0].ranks, (std::vector<std::size_t>{4, 1, 2}));
  EXPECT_NEAR(rows[0].stdv, std::sqrt(7.0 / 3.0), 1e-12);
  EXPECT_EQ(rows[1].semantic_type, "B");
  EXPECT_EQ(rows[2].semantic_type, "C");
  EXPECT_NEAR(rows[2].stdv, std::sqrt(1.0 / 3.0), 1e-12);
}

TEST(Ranking, CompareTiesBreakByName) {
  const std::vector<std::string> a{"X", "Y"};
  const std::vector<std::string> b{"Y", "X"};
  const std::vector<SemanticTypeRanking> rankings{SemanticTypeRanking::from_order(a),
                                                  SemanticTypeRanking::from_order(b)};
  const auto rows = compare_rankings(rankings);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].semantic_type, "X");
  EXPECT_EQ(rows[1].semantic_type, "Y");
}

TEST(Ranking, CompareNeedsTwoRankings) {
  const std::vector<SemanticTypeRanking> one{rank_semantic_types(sample())};
  EXPECT_THROW(compare_rankings(one), ContractViolation);
  EXPECT_THROW(compare_rankings({}), ContractViolation);
}

TEST(Profile, CountsForHub) {
  const auto p = concept_profile(sample(), "C0000001");
  EXPECT_EQ(p, (ConceptProfile{"C0000001", "plants", 3, 2, 2, 5, 3, 4}));
}

TEST(Profile, CountsForLeaf) {
  const auto p = concept_profile(sample(), "C0000003");
  EXPECT_EQ(p, (ConceptProfile{"C0000003", "bark", 1, 1, 0, 1, 1, 1}));
}

TEST(Profile, UnknownConcept) {
  EXPECT_THROW(concept_profile(sample(), "C0000099"), NotFoundError);
  EXPECT_THROW(concept_profile(sample(), "1"), NotFoundError);
}

TEST(Cooccurring, DescendantsSharingArticles) {
  const auto g = sample();
  EXPECT_EQ(cooccurring_descendants(g, "C0000005", "C0000001"),
            (std::vector<CooccurringConcept>{{"C0000002", "aloe", 1}}));
  EXPECT_EQ(cooccurring_descendants(g, "C0000001", "C0000001"),
            (std::vector<CooccurringConcept>{{"C0000002", "aloe", 2}, {"C0000003", "bark", 1}}));
}

TEST(Cooccurring, DepthLimitsDescent) {
  const auto g = sample();
  EXPECT_EQ(cooccurring_descendants(g, "C0000001", "C0000001", 1),
            (std::vector<CooccurringConcept>{{"C0000002", "aloe", 2}}));
  EXPECT_TRUE(cooccurring_descendants(g, "C0000001", "C0000001", 0).empty());
}

TEST(Cooccurring, AnchorIsExcluded) {
  const auto g = sample();
  const auto rows = cooccurring_descendants(g, "C0000002", "C0000001");
  EXPECT_EQ(rows, (std::vector<CooccurringConcept>{{"C0000003", "bark", 1}}));
  EXPECT_THROW(cooccurring_descendants(g, "C0000002", "C0000099"), NotFoundError);
}

TEST(Enrichment, UnfilteredAndFiltered) {
  const auto g = sample();
  EXPECT_EQ(interaction_enrichment(g, "C0000001"), (Enrichment{3, 3, 2, 2}));
  EXPECT_EQ(interaction_enrichment(g, "C0000001", "drugbank"), (Enrichment{3, 2, 2, 1}));
  EXPECT_EQ(interaction_enrichment(g, "C0000001", "CTD"), (Enrichment{3, 1, 2, 1}));
  EXPECT_EQ(interaction_enrichment(g, "C0000001", "semrep"), (Enrichment{3, 0, 2, 0}));
  EXPECT_EQ(interaction_enrichment(g, "C0000003"), (Enrichment{0, 0, 0, 0}));
}

TEST(Paths, AllShortestInKeyOrder) {
  const auto g = sample();
  const auto paths = shortest_paths(g, NodeKey::for_concept("C0000002"), NodeKey::for_concept("C0000005"), {});
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].nodes, (std::vector<NodeKey>{NodeKey::for_concept("C0000002"), NodeKey::for_article("1"),
                                                  NodeKey::for_concept("C0000005")}));
  EXPECT_EQ(paths[0].hops, (std::vector<std::vector<HopEdge>>{{{"MENTIONED_IN", true}}, {{"MENTIONED_IN", false}}}));
  EXPECT_EQ(paths[1].nodes, (std::vector<NodeKey>{NodeKey::for_concept("C0000002"), NodeKey::for_concept("C0000001"),
                                                  NodeKey::for_concept("C0000005")}));
  EXPECT_EQ(paths[1].hops, (std::vector<std::vector<HopEdge>>{{{"ISA", true}}, {{"INTERACTS_WITH", false}}}));
  EXPECT_EQ(format_path(paths[1]), "UMLS:C0000002 -[ISA>]- UMLS:C0000001 -[<INTERACTS_WITH]- UMLS:C0000005");
}

TEST(Paths, ParallelEdgesShareAHop) {
  const auto g = sample();
  const auto paths = shortest_paths(g, NodeKey::for_concept("C0000001"), NodeKey::for_concept("C0000004"), {});
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].hops[0], (std::vector<HopEdge>{{"INTERACTS_WITH", false}, {"LOCATION_OF", true}}));
}

TEST(Paths, ConceptOnlySkipsArticleEdges) {
  const auto g = sample();
  PathOptions opt;
  opt.concept_only = true;
  const auto paths = shortest_paths(g, NodeKey::for_concept("C0000002"), NodeKey::for_concept("C0000005"), opt);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].nodes[1], NodeKey::for_concept("C0000001"));
}

TEST(Paths, LimitsAndEdgeCases) {
  const auto g = sample();
  const auto aloe = NodeKey::for_concept("C0000002");
  const auto drug = NodeKey::for_concept("C0000005");
  PathOptions opt;
  opt.max_hops = 1;
  EXPECT_TRUE(shortest_paths(g, aloe, drug, opt).empty());
  opt.max_hops = 0;
  EXPECT_THROW(shortest_paths(g, aloe, drug, opt), ContractViolation);
  opt.max_hops = 3;
  opt.max_paths = 1;
  EXPECT_EQ(shortest_paths(g, aloe, drug, opt).size(), 1u);

  const auto self = shortest_paths(g, aloe, aloe, {});
  ASSERT_EQ(self.size(), 1u);
  EXPECT_EQ(self[0].length(), 0u);
  EXPECT_EQ(self[0].nodes, std::vector<NodeKey>{aloe});

  EXPECT_THROW(shortest_paths(g, aloe, NodeKey::for_article("404"), {}), NotFoundError);
  EXPECT_THROW(shortest_paths(g, NodeKey::for_concept("C0000404"), aloe, {}), NotFoundError);
}

TEST(Paths, DisconnectedNodesHaveNoPath) {
  Graph g;
  g.upsert_concept({"C0000001", "a", {}, {}, false});
  g.upsert_concept({"C0000002", "b", {}, {}, false});
  EXPECT_TRUE(shortest_paths(g, NodeKey::for_concept("C0000001"), NodeKey::for_concept("C0000002"), {}).empty());
}

TEST(Paths, QueriesDoNotMutate) {
  const auto g = sample();
  const auto before = g.content_hash();
  rank_semantic_types(g);
  concept_profile(g, "C0000001");
  cooccurring_descendants(g, "C0000001", "C0000001");
  interaction_enrichment(g, "C0000001", "CTD");
  shortest_paths(g, NodeKey::for_concept("C0000002"), NodeKey::for_concept("C0000005"), {});
  EXPECT_EQ(g.content_hash(), before);
}

// ---- formatting ----

TEST(Format, StdvHasTwoDecimals) {
  EXPECT_EQ(format_stdv(25.78), "25.78");
  EXPECT_EQ(format_stdv(1.0 / 3.0), "0.33");
  EXPECT_EQ(format_stdv(0), "0.00");
}

TEST(Format, TableAlignsColumns) {
  EXPECT_EQ(render_table({"a", "long"}, {{"xyz", "1"}, {"q", "22"}}),
            "a    long\n"
            "---  ----\n"
            "xyz  1\n"
            "q    22\n");
}

TEST(Format, RankingTableAndJson) {
  const auto r = rank_semantic_types(sample());
  EXPECT_EQ(to_table(r),
            "rank  semantic_type            concepts\n"
            "----  -----------------------  --------\n"
            "1     Plant                    3\n"
            "2     Enzyme                   1\n"
            "3     Pharmacologic Substance  1\n");
  EXPECT_EQ(to_json(r).dump(),
            R"([{"rank":1,"semantic_type":"Plant","concept_count":3},{"rank":2,"semantic_type":"Enzyme","concept_count":1},)"
            R"({"rank":3,"semantic_type":"Pharmacologic Substance","concept_count":1}])");
}

TEST(Format, ProfileJson) {
  EXPECT_EQ(to_json(concept_profile(sample(), "C0000003")).dump(),
            R"({"cui":"C0000003","name":"bark","mention_total":1,"article_count":1,"topic_article_count":0,)"
            R"("relation_edge_count":1,"relation_type_count":1,"neighbor_concept_count":1})");
}

TEST(Format, EnrichmentTableNamesFilter) {
  const auto e = interaction_enrichment(sample(), "C0000001", "CTD");
  const auto table = to_table(e, "CTD");
  EXPECT_NE(table.find("interacting_concepts[CTD]  1"), std::string::npos) << table;
  const auto j = to_json(e, std::nullopt);
  EXPECT_TRUE(j["filter_source"].is_null());
  EXPECT_EQ(j["interacting_concept_count"], 3);
}

TEST(Format, ComparisonAndPathJson) {
  const std::vector<std::string> a{"X", "Y"};
  const std::vector<std::string> b{"Y", "X"};
  const std::vector<SemanticTypeRanking> rankings{SemanticTypeRanking::from_order(a),
                                                  SemanticTypeRanking::from_order(b)};
  const auto rows = compare_rankings(rankings);
  const auto j = to_json(rows, {"g1", "g2"});
  EXPECT_EQ(j["graphs"], nlohmann::ordered_json({"g1", "g2"}));
  EXPECT_EQ(j["rows"][0]["ranks"], nlohmann::ordered_json({1, 2}));
  EXPECT_NE(to_table(rows, {"g1", "g2"}).find("0.71"), std::string::npos);

  const auto g = sample();
  const auto paths = shortest_paths(g, NodeKey::for_concept("C0000001"), NodeKey::for_concept("C0000004"), {});
  EXPECT_EQ(to_json(paths).dump(),
            R"([{"length":1,"nodes":[{"key":"UMLS:C0000001","kind":"concept"},{"key":"UMLS:C0000004","kind":"concept"}],)"
            R"("hops":[[{"predicate":"INTERACTS_WITH","forward":false},{"predicate":"LOCATION_OF","forward":true}]]}])");
}

}  // namespace
}  // namespace odg::query

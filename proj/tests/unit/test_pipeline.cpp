#include <gtest/gtest.h>

#include "fixture_entrez.hpp"
#include "odg/error.hpp"
#include "odg/graph/snapshot.hpp"
#include "odg/pipeline/pipeline.hpp"
#include "support.hpp"

namespace odg::pipeline {
namespace {

namespace fs = std::filesystem;

json corpus_config_json(const std::string& run_date) {
  const auto corpus = test::fixture("corpus");
  return json{
      {"disease", {{"mesh_descriptor", "Lymphatic Abnormalities"}, {"mesh_ui", "D000010"}}},
      {"endpoints", {{"entrez_base_url", "http://127.0.0.1:9/eutils"}}},
      {"rate_limit", 1000.0},
      {"resources",
       {{"obo", {{{"path", (corpus / "ontology.obo").string()}, {"source", "DO"}}}},
        {"drugbank", {{{"path", (corpus / "drugbank.xml").string()}, {"source", "DrugBank"}}}},
        {"conso", (corpus / "conso.tsv").string()},
        {"sty", (corpus / "sty.tsv").string()},
        {"semrep", {(corpus / "semrep.txt").string()}}}},
      {"output_dir", "out"},
      {"run_date", run_date},
  };
}

fs::path write_config(const test::TempDir& dir, const std::string& name, const json& j) {
  const auto path = dir / name;
  write_file_atomic(path, j.dump(2));
  return path;
}

RunOptions fixture_options(test::FixtureEntrez& entrez) {
  RunOptions o;
  o.transport = &entrez;
  o.sleep = [](auto) {};
  return o;
}

std::size_t line_count(const fs::path& p) {
  std::size_t n = 0;
  for (const auto& l : read_lines(p)) n += !trim(l).empty();
  return n;
}

TEST(Config, ParsesAndResolvesRelativePaths) {
  test::TempDir dir;
  auto j = corpus_config_json("2024/01/15");
  j["resources"]["conso"] = "maps/conso.tsv";
  j["fulltext_cap"] = 7;
  j["api_key"] = "k";
  const auto path = write_config(dir, "c.json", j);
  const auto c = load_pipeline_config(path);
  EXPECT_EQ(c.config_path, fs::absolute(path));
  EXPECT_EQ(c.conso, fs::absolute(dir.path()) / "maps/conso.tsv");
  EXPECT_EQ(c.output_dir, fs::absolute(dir.path()) / "out");
  EXPECT_EQ(c.fulltext_cap, 7u);
  EXPECT_EQ(c.api_credentials->api_key, "k");
  ASSERT_EQ(c.structured.size(), 2u);
  EXPECT_EQ(c.structured[0].format, StructuredFormat::Obo);
  EXPECT_EQ(c.structured[0].source, "DO");
  EXPECT_EQ(c.structured[1].format, StructuredFormat::DrugBank);
  EXPECT_EQ(c.run_date, (Date{2024, 1, 15}));
  EXPECT_FALSE(c.last_update_date);
}

TEST(Config, RejectsBadInput) {
  test::TempDir dir;
  EXPECT_THROW(load_pipeline_config(dir / "missing.json"), ValidationError);
  write_file_atomic(dir / "bad.json", "{not json");
  EXPECT_THROW(load_pipeline_config(dir / "bad.json"), ValidationError);
  auto j = corpus_config_json("2024/01/15");
  j["fulltext_cap"] = -1;
  EXPECT_THROW(parse_pipeline_config(j, dir.path()), ValidationError);
  j = corpus_config_json("not a date");
  EXPECT_THROW(parse_pipeline_config(j, dir.path()), ValidationError);
  j = corpus_config_json("2024/01/15");
  j["rate_limit"] = "fast";
  EXPECT_THROW(parse_pipeline_config(j, dir.path()), ValidationError);
  EXPECT_THROW(parse_structured_format("xml"), ValidationError);
  EXPECT_EQ(parse_structured_format("mesh-xml"), StructuredFormat::MeshXml);
}

TEST(Config, ValidateListsEveryProblem) {
  test::TempDir dir;
  auto j = corpus_config_json("2024/01/15");
  j["disease"] = json::object();
  j["endpoints"]["entrez_base_url"] = "ftp://x";
  j["resources"]["sty"] = "nope.tsv";
  const auto c = parse_pipeline_config(j, dir.path());
  try {
    c.validate();
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("entrez_base_url"), std::string::npos) << msg;
    EXPECT_NE(msg.find("resources.sty not found"), std::string::npos) << msg;
    EXPECT_NE(msg.find("descriptor"), std::string::npos) << msg;
  }
}

TEST(Config, HashIgnoresDates) {
  test::TempDir dir;
  auto a = parse_pipeline_config(corpus_config_json("2024/01/15"), dir.path());
  auto b = parse_pipeline_config(corpus_config_json("2025/02/02"), dir.path());
  b.last_update_date = Date{2024, 1, 1};
  EXPECT_EQ(a.hash(), b.hash());
  b.fulltext_cap = 1;
  EXPECT_NE(a.hash(), b.hash());
}

TEST(Config, StoreLastUpdateDateKeepsOtherKeys) {
  test::TempDir dir;
  const auto path = write_config(dir, "c.json", corpus_config_json("2024/01/15"));
  store_last_update_date(path, Date{2024, 3, 4});
  const auto j = json::parse(read_file(path));
  EXPECT_EQ(j["last_update_date"], "2024/03/04");
  EXPECT_EQ(j["run_date"], "2024/01/15");
  EXPECT_EQ(load_pipeline_config(path).last_update_date, (Date{2024, 3, 4}));
}

TEST(RunFull, BuildsCorpusGraph) {
  test::TempDir dir;
  const auto path = write_config(dir, "c.json", corpus_config_json("2024/01/15"));
  auto entrez = test::FixtureEntrez::from_corpus(test::fixture("corpus"));
  const auto m = run_full(load_pipeline_config(path), fixture_options(*entrez));

  ASSERT_TRUE(m.ok()) << m.to_json().dump(2);
  EXPECT_EQ(m.mode, "full");
  EXPECT_EQ(m.run_date, "2024-01-15");
  ASSERT_EQ(m.stages.size(), 5u);
  EXPECT_EQ(m.stages[0].name, "harvest-literature");
  EXPECT_EQ(m.stages[4].name, "build");
  EXPECT_EQ(m.node_count, 12u);
  EXPECT_EQ(m.edge_count, 30u);
  EXPECT_EQ(m.stages[0].counts.at("articles"), 3u);
  EXPECT_EQ(m.stages[0].counts.at("fulltext_fetched"), 1u);
  EXPECT_EQ(m.stages[3].counts.at("unmapped"), 3u);

  const auto out = dir / "out";
  EXPECT_EQ(line_count(out / kArticlesFile), 3u);
  EXPECT_EQ(line_count(out / kStructuredFile), 8u);
  EXPECT_EQ(line_count(out / kUnmappedFile), 3u);
  EXPECT_TRUE(fs::exists(out / kRunManifestFile));
  const auto loaded = graph::load_snapshot(out / kGraphDir);
  EXPECT_EQ(loaded.graph.content_hash(), m.graph_content_hash);
  EXPECT_EQ(loaded.manifest.created_at, "2024-01-15");

  // The full run becomes the baseline for updates.
  EXPECT_EQ(load_pipeline_config(path).last_update_date, (Date{2024, 1, 15}));
}

TEST(RunFull, ArticleNodesCarryHarvestedFields) {
  test::TempDir dir;
  const auto path = write_config(dir, "c.json", corpus_config_json("2024/01/15"));
  auto entrez = test::FixtureEntrez::from_corpus(test::fixture("corpus"));
  run_full(load_pipeline_config(path), fixture_options(*entrez));
  const auto g = graph::load_snapshot(dir / "out" / kGraphDir).graph;
  const auto& a = g.node(*g.find(graph::NodeKey::for_article("1001")));
  EXPECT_FALSE(a.stub);
  EXPECT_TRUE(a.has_abstract);
  EXPECT_TRUE(a.has_fulltext);
  EXPECT_EQ(a.name, "Sirolimus for lymphatic malformation.");
  const auto& c = g.node(*g.find_concept("C0000010"));
  EXPECT_EQ(c.name, "sirolimus");
  EXPECT_EQ(c.semantic_types, (std::set<std::string>{"Organic Chemical", "Pharmacologic Substance"}));
}

TEST(RunFull, RepeatedRunsAreByteIdentical) {
  test::TempDir dir;
  auto j1 = corpus_config_json("2024/01/15");
  auto j2 = j1;
  j2["output_dir"] = "out2";
  const auto p1 = write_config(dir, "a.json", j1);
  const auto p2 = write_config(dir, "b.json", j2);
  auto e1 = test::FixtureEntrez::from_corpus(test::fixture("corpus"));
  auto e2 = test::FixtureEntrez::from_corpus(test::fixture("corpus"));
  const auto m1 = run_full(load_pipeline_config(p1), fixture_options(*e1));
  const auto m2 = run_full(load_pipeline_config(p2), fixture_options(*e2));
  EXPECT_EQ(m1.graph_content_hash, m2.graph_content_hash);
  for (const char* f : {graph::kNodesFile, graph::kEdgesFile, graph::kManifestFile})
    EXPECT_EQ(read_file(dir / "out" / kGraphDir / f), read_file(dir / "out2" / kGraphDir / f)) << f;
  for (const char* f : {kArticlesFile, kStructuredFile, kLiteratureFile, kIntegratedFile, kUnmappedFile})
    EXPECT_EQ(read_file(dir / "out" / f), read_file(dir / "out2" / f)) << f;
}

TEST(RunFull, InvalidConfigMakesNoRequests) {
  test::TempDir dir;
  auto j = corpus_config_json("2024/01/15");
  j["resources"]["conso"] = "missing.tsv";
  const auto path = write_config(dir, "c.json", j);
  auto entrez = test::FixtureEntrez::from_corpus(test::fixture("corpus"));
  EXPECT_THROW(run_full(load_pipeline_config(path), fixture_options(*entrez)), ValidationError);
  EXPECT_EQ(entrez->request_count(), 0u);
  EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(RunFull, StageFailureIsRecorded) {
  test::TempDir dir;
  const auto path = write_config(dir, "c.json", corpus_config_json("2024/01/15"));
  auto entrez = test::FixtureEntrez::from_corpus(test::fixture("corpus"));
  entrez->fail_next("esearch.fcgi", 100, 400);
  const auto m = run_full(load_pipeline_config(path), fixture_options(*entrez));
  EXPECT_FALSE(m.ok());
  EXPECT_EQ(m.failed_stage(), "harvest-literature");
  ASSERT_EQ(m.stages.size(), 5u);
  EXPECT_EQ(m.stages[0].status, StageStatus::Failed);
  EXPECT_FALSE(m.stages[0].error.empty());
  for (std::size_t i = 1; i < 5; ++i) EXPECT_EQ(m.stages[i].status, StageStatus::NotRun);
  const auto written = json::parse(read_file(dir / "out" / kRunManifestFile));
  EXPECT_EQ(written["status"], "failed");
  EXPECT_EQ(written["failed_stage"], "harvest-literature");
  EXPECT_FALSE(graph::snapshot_exists(dir / "out" / kGraphDir));
  EXPECT_FALSE(load_pipeline_config(path).last_update_date);
}

TEST(RunUpdate, EqualsFullRunOverUnion) {
  test::TempDir dir;
  // Set A is visible up to the baseline date; B (pmid 1003) arrives later.
  auto ja = corpus_config_json("2020/01/01");
  const auto pa = write_config(dir, "a.json", ja);
  auto entrez = test::FixtureEntrez::from_corpus(test::fixture("corpus"));
  entrez->set_visible_until(Date{2020, 1, 1});
  const auto first = run_full(load_pipeline_config(pa), fixture_options(*entrez));
  ASSERT_TRUE(first.ok());
  EXPECT_EQ(first.stages[0].counts.at("articles"), 2u);
  EXPECT_EQ(first.node_count, 10u);
  EXPECT_EQ(first.edge_count, 24u);

  entrez->set_visible_until(std::nullopt);
  entrez->clear_requests();
  const auto update = run_update(load_pipeline_config(pa), fixture_options(*entrez));
  ASSERT_TRUE(update.ok()) << update.to_json().dump(2);
  EXPECT_EQ(update.mode, "update");
  EXPECT_EQ(update.date_floor, "2020/01/01");
  EXPECT_EQ(update.stages[0].counts.at("articles"), 1u);
  for (const auto& r : entrez->requests())
    if (r.endpoint == "esearch.fcgi") EXPECT_EQ(r.param("mindate"), "2020/01/01");
  ASSERT_TRUE(update.structured_merge);
  EXPECT_EQ(update.structured_merge->nodes_added, 0u);
  EXPECT_EQ(update.structured_merge->edges_added, 0u);
  EXPECT_EQ(update.structured_merge->duplicates_skipped, 6u);
  ASSERT_TRUE(update.literature_merge);
  EXPECT_GT(update.literature_merge->edges_added, 0u);

  auto ju = corpus_config_json("2020/01/01");
  ju["output_dir"] = "union";
  const auto pu = write_config(dir, "u.json", ju);
  auto all = test::FixtureEntrez::from_corpus(test::fixture("corpus"));
  const auto full = run_full(load_pipeline_config(pu), fixture_options(*all));
  ASSERT_TRUE(full.ok());

  EXPECT_EQ(update.graph_content_hash, full.graph_content_hash);
  const auto a = graph::load_snapshot(dir / "out" / kGraphDir).graph;
  const auto u = graph::load_snapshot(dir / "union" / kGraphDir).graph;
  EXPECT_EQ(a, u);
  EXPECT_EQ(a.node_count(), 12u);
  EXPECT_EQ(a.edge_count(), 30u);
}

TEST(RunUpdate, NothingNewLeavesGraphUnchanged) {
  test::TempDir dir;
  const auto path = write_config(dir, "c.json", corpus_config_json("2024/01/15"));
  auto entrez = test::FixtureEntrez::from_corpus(test::fixture("corpus"));
  const auto first = run_full(load_pipeline_config(path), fixture_options(*entrez));
  ASSERT_TRUE(first.ok());
  auto j = json::parse(read_file(path));
  j["run_date"] = "2024/02/01";
  write_file_atomic(path, j.dump());

  const auto m = run_update(load_pipeline_config(path), fixture_options(*entrez));
  ASSERT_TRUE(m.ok()) << m.to_json().dump(2);
  EXPECT_EQ(m.stages[0].counts.at("articles"), 0u);
  EXPECT_EQ(*m.literature_merge, graph::MergeStats{});
  EXPECT_EQ(m.structured_merge->edges_added, 0u);
  EXPECT_EQ(m.graph_content_hash, first.graph_content_hash);
  EXPECT_TRUE(fs::exists(dir / "out" / "updates" / "2024-02-01" / kRunManifestFile));
  EXPECT_EQ(load_pipeline_config(path).last_update_date, (Date{2024, 2, 1}));
  const auto written = json::parse(read_file(dir / "out" / kRunManifestFile));
  EXPECT_EQ(written["mode"], "update");
}

TEST(RunUpdate, RequiresBaseline) {
  test::TempDir dir;
  const auto path = write_config(dir, "c.json", corpus_config_json("2024/01/15"));
  auto entrez = test::FixtureEntrez::from_corpus(test::fixture("corpus"));
  EXPECT_THROW(run_update(load_pipeline_config(path), fixture_options(*entrez)), ValidationError);
  store_last_update_date(path, Date{2020, 1, 1});
  EXPECT_THROW(run_update(load_pipeline_config(path), fixture_options(*entrez)), ValidationError);
  EXPECT_EQ(entrez->request_count(), 0u);
}

TEST(HarvestStructured, DispatchesOnFormat) {
  const auto corpus = test::fixture("corpus");
  EXPECT_EQ(harvest_structured({StructuredFormat::Obo, corpus / "ontology.obo", "DO"}).size(), 5u);
  EXPECT_EQ(harvest_structured({StructuredFormat::DrugBank, corpus / "drugbank.xml", "DrugBank"}).size(), 3u);
  const auto mesh = harvest_structured({StructuredFormat::MeshXml, test::fixture("parsers/mesh_20.xml"), "MeSH"});
  ASSERT_FALSE(mesh.empty());
  EXPECT_EQ(mesh[0].subject.vocab, "MSH");
  EXPECT_EQ(mesh[0].source, "MeSH");
}

}  // namespace
}  // namespace odg::pipeline

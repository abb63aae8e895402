// odg: command-line front end for the open data graph pipeline.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "odg/analysis/relations.hpp"
#include "odg/error.hpp"
#include "odg/graph/snapshot.hpp"
#include "odg/harvest/entrez.hpp"
#include "odg/integration/mapping.hpp"
#include "odg/pipeline/pipeline.hpp"
#include "odg/query/format.hpp"

namespace fs = std::filesystem;
using namespace odg;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitStageFailure = 3;

std::optional<Date> parse_date_arg(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  auto d = Date::parse(text);
  if (!d) throw ValidationError(std::string(flag) + ": not a date: '" + text + "'");
  return d;
}

std::vector<RelationRecord> read_all_relations(const std::vector<std::string>& files) {
  std::vector<RelationRecord> out;
  for (const auto& f : files) {
    auto rs = read_relations(f);
    out.insert(out.end(), rs.begin(), rs.end());
  }
  return out;
}

std::vector<IntegratedRelation> read_all_integrated(const std::vector<std::string>& files) {
  std::vector<IntegratedRelation> out;
  for (const auto& f : files) {
    auto rs = read_integrated(f);
    out.insert(out.end(), rs.begin(), rs.end());
  }
  return out;
}

nlohmann::ordered_json merge_stats_json(const graph::MergeStats& s) {
  return {{"nodes_added", s.nodes_added},
          {"edges_added", s.edges_added},
          {"provenance_appended", s.provenance_appended},
          {"duplicates_skipped", s.duplicates_skipped}};
}

void upsert_articles(graph::Graph& g, const std::string& file) {
  if (file.empty()) return;
  for (const auto& a : read_articles(file))
    g.upsert_article(graph::ArticleNode{a.pmid, a.title, a.abstract_text.has_value(), a.fulltext_body.has_value(),
                                        a.pub_date, false});
}

int report_run(const pipeline::RunManifest& m) {
  std::cout << m.to_json().dump(2) << "\n";
  if (!m.ok()) {
    std::cerr << "odg: stage '" << m.failed_stage() << "' failed\n";
    return kExitStageFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disease-specific open data graph: harvest, analyze, integrate, build and query."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pipeline::kToolVersion));
  std::function<int()> action;

  // harvest-literature
  struct {
    std::string config, descriptor, mesh_ui, base_url = std::string(harvest::kDefaultEntrezBaseUrl), date_floor,
                                             api_key, email, out, skips;
    std::size_t fulltext_cap = 10000;
    double rate_limit = 3.0;
  } hl;
  auto* cmd_hl = app.add_subcommand("harvest-literature", "Search PubMed by MeSH descriptor and fetch articles");
  cmd_hl->add_option("--config", hl.config, "Pipeline config supplying disease, endpoint and limits");
  cmd_hl->add_option("--descriptor", hl.descriptor, "MeSH descriptor name");
  cmd_hl->add_option("--mesh-ui", hl.mesh_ui, "MeSH descriptor UI, e.g. D020388");
  cmd_hl->add_option("--base-url", hl.base_url, "E-utilities base URL");
  cmd_hl->add_option("--date-floor", hl.date_floor, "Only entries on or after YYYY/MM/DD");
  cmd_hl->add_option("--fulltext-cap", hl.fulltext_cap, "Maximum PMC full texts to fetch");
  cmd_hl->add_option("--rate-limit", hl.rate_limit, "Requests per second");
  cmd_hl->add_option("--api-key", hl.api_key, "E-utilities API key");
  cmd_hl->add_option("--email", hl.email, "Contact email sent with requests");
  cmd_hl->add_option("--out", hl.out, "Article records JSONL")->required();
  cmd_hl->add_option("--skips", hl.skips, "Skipped-document report JSONL");
  cmd_hl->callback([&] {
    action = [&] {
      harvest::HarvestConfig hc;
      if (!hl.config.empty()) {
        auto pc = pipeline::load_pipeline_config(hl.config);
        hc = pc.harvest_config(pc.last_update_date);
      }
      if (!hl.descriptor.empty()) hc.disease_mesh_descriptor = hl.descriptor;
      if (!hl.mesh_ui.empty()) hc.disease_mesh_ui = hl.mesh_ui;
      if (hl.config.empty() || cmd_hl->count("--base-url")) hc.base_url = hl.base_url;
      if (auto d = parse_date_arg(hl.date_floor, "--date-floor")) hc.date_floor = d;
      if (hl.config.empty() || cmd_hl->count("--fulltext-cap")) hc.fulltext_cap = hl.fulltext_cap;
      if (hl.config.empty() || cmd_hl->count("--rate-limit")) hc.rate_limit = hl.rate_limit;
      if (!hl.api_key.empty() || !hl.email.empty()) hc.api_credentials = harvest::ApiCredentials{hl.api_key, hl.email};
      hc.validate();
      auto transport = harvest::make_http_transport(hc.base_url);
      harvest::EntrezClient client(hc, *transport);
      auto h = harvest::harvest_literature(client);
      write_jsonl<ArticleRecord>(hl.out, h.articles);
      if (!hl.skips.empty()) {
        std::string text;
        for (const auto& s : h.skipped) text += nlohmann::ordered_json{{"pmid", s.pmid}, {"reason", s.reason}}.dump() + "\n";
        write_file_atomic(hl.skips, text);
      }
      std::cerr << "searched " << h.searched_pmids.size() << ", wrote " << h.articles.size() << " articles, skipped "
                << h.skipped.size() << ", full texts " << h.fulltext.fetched << "\n";
      return 0;
    };
  });

  // harvest-structured
  struct {
    std::string format, in, source, out;
  } hs;
  auto* cmd_hs = app.add_subcommand("harvest-structured", "Extract relations from an OBO, MeSH XML or DrugBank file");
  cmd_hs->add_option("--format", hs.format, "obo | mesh-xml | drugbank")->required();
  cmd_hs->add_option("--in", hs.in, "Input file")->required()->check(CLI::ExistingFile);
  cmd_hs->add_option("--source", hs.source, "Provenance name recorded on each relation")->required();
  cmd_hs->add_option("--out", hs.out, "Relation records JSONL")->required();
  cmd_hs->callback([&] {
    action = [&] {
      const auto rels = pipeline::harvest_structured({pipeline::parse_structured_format(hs.format), hs.in, hs.source});
      write_jsonl<RelationRecord>(hs.out, rels);
      std::cerr << "wrote " << rels.size() << " relations\n";
      return 0;
    };
  });

  // analyze
  struct {
    std::string articles, lexicon, conso, sty, columns, out;
    std::vector<std::string> semrep;
  } an;
  auto* cmd_an = app.add_subcommand("analyze", "Tag articles and ingest SemRep output into relation records");
  cmd_an->add_option("--articles", an.articles, "Article records JSONL")->required()->check(CLI::ExistingFile);
  cmd_an->add_option("--semrep", an.semrep, "SemRep fielded output (repeatable)")->check(CLI::ExistingFile);
  cmd_an->add_option("--semrep-columns", an.columns, "Column map JSON for SemRep output")->check(CLI::ExistingFile);
  cmd_an->add_option("--lexicon", an.lexicon, "Tagger lexicon in conso TSV layout")->check(CLI::ExistingFile);
  cmd_an->add_option("--conso", an.conso, "Mapping conso TSV, used as lexicon")->check(CLI::ExistingFile);
  cmd_an->add_option("--sty", an.sty, "Mapping sty TSV")->check(CLI::ExistingFile);
  cmd_an->add_option("--out", an.out, "Relation records JSONL")->required();
  cmd_an->callback([&] {
    action = [&] {
      const auto articles = read_articles(an.articles);
      std::optional<integration::MappingTable> table;
      if (!an.lexicon.empty()) table = integration::MappingTable::parse(read_file(an.lexicon), "");
      else if (!an.conso.empty()) table = integration::MappingTable::parse(read_file(an.conso), an.sty.empty() ? "" : read_file(an.sty));
      std::optional<analysis::DictionaryTagger> tagger;
      if (table) tagger.emplace(table->term_to_cui());
      if (!tagger && an.semrep.empty()) throw ValidationError("analyze needs --lexicon/--conso or at least one --semrep");
      std::vector<std::string> texts;
      for (const auto& f : an.semrep) texts.push_back(read_file(f));
      const auto columns = an.columns.empty() ? analysis::SemRepColumns::defaults()
                                              : analysis::SemRepColumns::from_json(json::parse(read_file(an.columns)));
      auto result = analysis::analyze_corpus(articles, tagger ? &*tagger : nullptr, texts, columns);
      write_jsonl<RelationRecord>(an.out, result.relations);
      for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << "\n";
      for (const auto& p : result.report.semrep.problems) std::cerr << "semrep: " << p << "\n";
      std::cerr << "articles " << result.report.articles << ", sentences " << result.report.sentences
                << ", tagger mentions " << result.report.tagger_mentions << ", predications "
                << result.report.predications << ", dropped " << result.report.semrep.dropped << ", relations "
                << result.relations.size() << "\n";
      return 0;
    };
  });

  // integrate
  struct {
    std::vector<std::string> relations;
    std::string conso, sty, out, unmapped;
  } in;
  auto* cmd_in = app.add_subcommand("integrate", "Resolve relation endpoints to UMLS concepts");
  cmd_in->add_option("--relations", in.relations, "Relation records JSONL (repeatable)")->required()->check(CLI::ExistingFile);
  cmd_in->add_option("--conso", in.conso, "conso TSV: CUI SAB CODE STR ISPREF")->required();
  cmd_in->add_option("--sty", in.sty, "sty TSV: CUI STY")->required();
  cmd_in->add_option("--out", in.out, "Integrated relations JSONL")->required();
  cmd_in->add_option("--unmapped-report", in.unmapped, "Unmapped relations JSONL")->required();
  cmd_in->callback([&] {
    action = [&] {
      const auto table = integration::MappingTable::load(in.conso, in.sty);
      for (const auto& p : table.stats().problems) std::cerr << "mapping: " << p << "\n";
      const auto records = read_all_relations(in.relations);
      const auto res = integration::resolve_relations(records, table);
      write_jsonl<IntegratedRelation>(in.out, res.relations);
      write_jsonl<integration::UnmappedEntry>(in.unmapped, res.unmapped);
      std::cerr << "input " << records.size() << ", integrated " << res.relations.size() << ", unmapped "
                << res.unmapped.size() << "\n";
      return 0;
    };
  });

  // build
  struct {
    std::vector<std::string> relations;
    std::string out, articles, run_date;
  } bd;
  auto* cmd_bd = app.add_subcommand("build", "Build a graph snapshot from integrated relations");
  cmd_bd->add_option("--relations", bd.relations, "Integrated relations JSONL (repeatable)")->required()->check(CLI::ExistingFile);
  cmd_bd->add_option("--out", bd.out, "Graph directory")->required();
  cmd_bd->add_option("--articles", bd.articles, "Article records JSONL for article node details")->check(CLI::ExistingFile);
  cmd_bd->add_option("--run-date", bd.run_date, "Date stamped on provenance and the snapshot");
  cmd_bd->callback([&] {
    action = [&] {
      const auto date = parse_date_arg(bd.run_date, "--run-date").value_or(Date::today_utc()).iso();
      graph::Graph g;
      std::map<std::string, std::string> hashes;
      for (const auto& f : bd.relations) hashes[fs::path(f).filename().string()] = sha256_hex(read_file(f));
      const auto stats = g.merge_increment(read_all_integrated(bd.relations), date);
      upsert_articles(g, bd.articles);
      const auto m = graph::save_snapshot(g, bd.out, date, {}, hashes);
      std::cout << m.to_json().dump(2) << "\n";
      std::cerr << "merge: " << merge_stats_json(stats).dump() << "\n";
      return 0;
    };
  });

  // update
  struct {
    std::string graph, config, articles, run_date;
    std::vector<std::string> relations;
  } up;
  auto* cmd_up = app.add_subcommand("update", "Merge new relations into a graph, or run an incremental pipeline");
  cmd_up->add_option("--graph", up.graph, "Graph directory to merge into");
  cmd_up->add_option("--relations", up.relations, "Integrated relations JSONL (repeatable)")->check(CLI::ExistingFile);
  cmd_up->add_option("--articles", up.articles, "Article records JSONL")->check(CLI::ExistingFile);
  cmd_up->add_option("--config", up.config, "Pipeline config with last_update_date");
  cmd_up->add_option("--run-date", up.run_date, "Date stamped on new provenance");
  cmd_up->callback([&] {
    action = [&] {
      if (!up.config.empty() && (!up.graph.empty() || !up.relations.empty()))
        throw ValidationError("update takes either --config FILE or --graph DIR with --relations, not both");
      if (!up.config.empty()) {
        auto config = pipeline::load_pipeline_config(up.config);
        if (auto d = parse_date_arg(up.run_date, "--run-date")) config.run_date = d;
        return report_run(pipeline::run_update(config));
      }
      if (up.graph.empty() || up.relations.empty())
        throw ValidationError("update needs --config FILE, or --graph DIR with --relations FILE...");
      if (!graph::snapshot_exists(up.graph))
        throw ValidationError("no graph at " + up.graph + "; build one first (odg build)");
      auto loaded = graph::load_snapshot(up.graph);
      const auto date = parse_date_arg(up.run_date, "--run-date").value_or(Date::today_utc()).iso();
      auto stats = loaded.graph.merge_increment(read_all_integrated(up.relations), date);
      const auto after_relations = loaded.graph.node_count();
      upsert_articles(loaded.graph, up.articles);
      stats.nodes_added += loaded.graph.node_count() - after_relations;
      auto hashes = loaded.manifest.source_hashes;
      for (const auto& f : up.relations) hashes[fs::path(f).filename().string()] = sha256_hex(read_file(f));
      graph::save_snapshot(loaded.graph, up.graph, loaded.manifest.created_at, loaded.manifest.config_hash, hashes);
      std::cout << merge_stats_json(stats).dump(2) << "\n";
      return 0;
    };
  });

  // run
  struct {
    std::string config, run_date, out, base_url;
  } rn;
  auto* cmd_rn = app.add_subcommand("run", "Run the full pipeline from a config file");
  cmd_rn->add_option("--config", rn.config, "Pipeline config JSON")->required();
  cmd_rn->add_option("--run-date", rn.run_date, "Override run_date");
  cmd_rn->add_option("--out", rn.out, "Override output_dir");
  cmd_rn->add_option("--base-url", rn.base_url, "Override endpoints.entrez_base_url");
  cmd_rn->callback([&] {
    action = [&] {
      auto config = pipeline::load_pipeline_config(rn.config);
      if (auto d = parse_date_arg(rn.run_date, "--run-date")) config.run_date = d;
      if (!rn.out.empty()) config.output_dir = rn.out;
      if (!rn.base_url.empty()) config.entrez_base_url = rn.base_url;
      return report_run(pipeline::run_full(config));
    };
  });

  // query
  struct {
    std::string graph_dir;
    bool json = false;
    std::vector<std::string> graphs;
    std::string cui, anchor, ancestor, source, from, to;
    std::size_t depth = query::kDefaultIsaDepth;
    std::size_t max_hops = 3;
    std::size_t max_paths = 10000;
    bool concept_only = false;
  } q;
  auto* cmd_q = app.add_subcommand("query", "Read-only queries over a graph snapshot");
  cmd_q->add_option("graph-dir", q.graph_dir, "Graph directory")->required();
  cmd_q->add_flag("--json", q.json, "Emit JSON instead of a table");
  cmd_q->require_subcommand(1);
  cmd_q->fallthrough();

  auto emit = [&](const std::string& table, const nlohmann::ordered_json& j) {
    if (q.json) std::cout << j.dump(2) << "\n";
    else std::cout << table;
  };
  auto load_graph = [&](const std::string& dir) { return graph::load_snapshot(dir).graph; };
  auto parse_node = [](const std::string& text) {
    return text.find(':') == std::string::npos ? graph::NodeKey::for_concept(text) : graph::NodeKey::parse(text);
  };

  auto* q_rank = cmd_q->add_subcommand("rank-types", "Semantic types ranked by mentioned concepts");
  q_rank->callback([&] {
    action = [&] {
      const auto r = query::rank_semantic_types(load_graph(q.graph_dir));
      emit(query::to_table(r), query::to_json(r));
      return 0;
    };
  });

  auto* q_cmp = cmd_q->add_subcommand("compare", "Compare semantic-type ranks across graphs");
  q_cmp->add_option("--graphs", q.graphs, "Further graph directories")->required();
  q_cmp->callback([&] {
    action = [&] {
      std::vector<query::SemanticTypeRanking> rankings;
      std::vector<std::string> names;
      std::vector<std::string> dirs{q.graph_dir};
      dirs.insert(dirs.end(), q.graphs.begin(), q.graphs.end());
      for (const auto& dir : dirs) {
        rankings.push_back(query::rank_semantic_types(load_graph(dir)));
        names.push_back(fs::path(dir).lexically_normal().filename().string());
      }
      const auto rows = query::compare_rankings(rankings);
      emit(query::to_table(rows, names), query::to_json(rows, names));
      return 0;
    };
  });

  auto* q_prof = cmd_q->add_subcommand("profile", "Mention, topic and relation counts for a concept");
  q_prof->add_option("--cui", q.cui, "Concept CUI")->required();
  q_prof->callback([&] {
    action = [&] {
      const auto p = query::concept_profile(load_graph(q.graph_dir), q.cui);
      emit(query::to_table(p), query::to_json(p));
      return 0;
    };
  });

  auto* q_desc = cmd_q->add_subcommand("descendants-cooccur", "ISA descendants of an ancestor co-occurring with an anchor");
  q_desc->add_option("--anchor", q.anchor, "Anchor CUI")->required();
  q_desc->add_option("--ancestor", q.ancestor, "Ancestor CUI")->required();
  q_desc->add_option("--depth", q.depth, "Maximum ISA hops");
  q_desc->callback([&] {
    action = [&] {
      const auto rows = query::cooccurring_descendants(load_graph(q.graph_dir), q.anchor, q.ancestor, q.depth);
      emit(query::to_table(rows), query::to_json(rows));
      return 0;
    };
  });

  auto* q_enr = cmd_q->add_subcommand("enrich", "Interacting concepts and enzymes");
  q_enr->add_option("--cui", q.cui, "Concept CUI")->required();
  q_enr->add_option("--source", q.source, "Only interactions with provenance from this resource");
  q_enr->callback([&] {
    action = [&] {
      const std::optional<std::string> filter = q.source.empty() ? std::nullopt : std::optional(q.source);
      const auto e = query::interaction_enrichment(load_graph(q.graph_dir), q.cui, filter);
      emit(query::to_table(e, filter), query::to_json(e, filter));
      return 0;
    };
  });

  auto* q_paths = cmd_q->add_subcommand("paths", "Shortest paths between two nodes");
  q_paths->add_option("--from", q.from, "CUI or PMID:<id>")->required();
  q_paths->add_option("--to", q.to, "CUI or PMID:<id>")->required();
  q_paths->add_option("--max-hops", q.max_hops, "Longest path considered")->check(CLI::PositiveNumber);
  q_paths->add_option("--max-paths", q.max_paths, "Stop after this many paths");
  q_paths->add_flag("--concept-only", q.concept_only, "Ignore MENTIONED_IN and HAS_MESH edges");
  q_paths->callback([&] {
    action = [&] {
      const auto paths = query::shortest_paths(load_graph(q.graph_dir), parse_node(q.from), parse_node(q.to),
                                               {q.max_hops, q.concept_only, q.max_paths});
      emit(query::to_table(paths), query::to_json(paths));
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    return action ? action() : 0;
  } catch (const ValidationError& e) {
    std::cerr << "odg: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "odg: parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ContractViolation& e) {
    std::cerr << "odg: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NotFoundError& e) {
    std::cerr << "odg: not found: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CorruptionError& e) {
    std::cerr << "odg: corrupt graph: " << e.what() << "\n";
    return kExitStageFailure;
  } catch (const std::exception& e) {
    std::cerr << "odg: " << e.what() << "\n";
    return kExitStageFailure;
  }
}

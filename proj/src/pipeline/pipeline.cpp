#include "odg/pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include "odg/error.hpp"
#include "odg/graph/snapshot.hpp"
#include "odg/harvest/structured.hpp"

namespace odg::pipeline {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string_view to_string(StageStatus s) {
  switch (s) {
    case StageStatus::Ok: return "ok";
    case StageStatus::Failed: return "failed";
    case StageStatus::NotRun: return "not_run";
  }
  return "not_run";
}

ojson merge_json(const graph::MergeStats& s) {
  return ojson{{"nodes_added", s.nodes_added},
               {"edges_added", s.edges_added},
               {"provenance_appended", s.provenance_appended},
               {"duplicates_skipped", s.duplicates_skipped}};
}

std::string file_hash(const fs::path& p) { return sha256_hex(read_file(p)); }

// Runs stages in order, recording each one and rewriting the manifest after
// every stage so a crash still leaves an accurate partial record.
class StageRunner {
 public:
  StageRunner(RunManifest& manifest, std::vector<fs::path> manifest_paths)
      : manifest_(manifest), paths_(std::move(manifest_paths)) {}

  template <typename Body>
  bool run(std::string name, Body&& body) {
    if (failed_) {
      StageRecord skipped;
      skipped.name = std::move(name);
      manifest_.stages.push_back(std::move(skipped));
      return false;
    }
    StageRecord rec;
    rec.name = std::move(name);
    const auto start = std::chrono::steady_clock::now();
    try {
      body(rec);
      rec.status = StageStatus::Ok;
    } catch (const std::exception& e) {
      rec.status = StageStatus::Failed;
      rec.error = e.what();
      failed_ = true;
    }
    rec.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    manifest_.stages.push_back(std::move(rec));
    write();
    return !failed_;
  }

  bool ok() const { return !failed_; }

  void write() const {
    const auto text = manifest_.to_json().dump(2) + "\n";
    for (const auto& p : paths_) write_file_atomic(p, text);
  }

 private:
  RunManifest& manifest_;
  std::vector<fs::path> paths_;
  bool failed_ = false;
};

std::vector<ArticleRecord> harvest_stage(const PipelineConfig& config, const RunOptions& options,
                                         std::optional<Date> floor, const fs::path& dir, StageRecord& rec) {
  std::unique_ptr<harvest::Transport> owned;
  harvest::Transport* transport = options.transport;
  if (!transport) {
    owned = harvest::make_http_transport(config.entrez_base_url);
    transport = owned.get();
  }
  harvest::EntrezClient client(config.harvest_config(floor), *transport, options.retry, options.sleep);
  auto h = harvest::harvest_literature(client);
  std::sort(h.articles.begin(), h.articles.end(),
            [](const ArticleRecord& a, const ArticleRecord& b) { return a.pmid < b.pmid; });

  write_jsonl<ArticleRecord>(dir / kArticlesFile, h.articles);
  std::string skips;
  for (const auto& s : h.skipped) skips += ojson{{"pmid", s.pmid}, {"reason", s.reason}}.dump() + "\n";
  write_file_atomic(dir / kHarvestSkipsFile, skips);

  rec.outputs[kArticlesFile] = file_hash(dir / kArticlesFile);
  rec.counts["searched"] = h.searched_pmids.size();
  rec.counts["articles"] = h.articles.size();
  rec.counts["skipped"] = h.skipped.size();
  rec.counts["failed_batches"] = h.failed_batches;
  rec.counts["fulltext_fetched"] = h.fulltext.fetched;
  rec.counts["fulltext_skipped_due_to_cap"] = h.fulltext.skipped_due_to_cap;
  rec.counts["requests"] = client.requests_made();
  rec.warnings = h.fulltext.warnings;
  return std::move(h.articles);
}

std::vector<RelationRecord> structured_stage(const PipelineConfig& config, const fs::path& dir, StageRecord& rec) {
  std::vector<RelationRecord> out;
  for (const auto& s : config.structured) {
    auto rels = harvest_structured(s);
    rec.inputs[s.path.filename().string()] = file_hash(s.path);
    rec.counts["relations." + s.source] += rels.size();
    for (auto& r : rels) out.push_back(std::move(r));
  }
  write_jsonl<RelationRecord>(dir / kStructuredFile, out);
  rec.outputs[kStructuredFile] = file_hash(dir / kStructuredFile);
  rec.counts["relations"] = out.size();
  return out;
}

std::vector<RelationRecord> analyze_stage(const PipelineConfig& config, const integration::MappingTable& table,
                                          std::span<const ArticleRecord> articles, const fs::path& dir,
                                          StageRecord& rec) {
  std::optional<analysis::DictionaryTagger> tagger;
  if (config.dictionary_tagger) tagger.emplace(table.term_to_cui());
  std::vector<std::string> semrep;
  for (const auto& p : config.semrep) {
    semrep.push_back(read_file(p));
    rec.inputs[p.filename().string()] = sha256_hex(semrep.back());
  }
  const auto columns = config.semrep_columns
                           ? analysis::SemRepColumns::from_json(json::parse(read_file(*config.semrep_columns)))
                           : analysis::SemRepColumns::defaults();
  auto result = analysis::analyze_corpus(articles, tagger ? &*tagger : nullptr, semrep, columns);
  write_jsonl<RelationRecord>(dir / kLiteratureFile, result.relations);

  const auto& r = result.report;
  rec.outputs[kLiteratureFile] = file_hash(dir / kLiteratureFile);
  rec.counts["articles"] = r.articles;
  rec.counts["sentences"] = r.sentences;
  rec.counts["tagger_mentions"] = r.tagger_mentions;
  rec.counts["semrep_mentions"] = r.semrep_mentions;
  rec.counts["predications"] = r.predications;
  rec.counts["semrep_malformed"] = r.semrep.malformed;
  rec.counts["semrep_dropped"] = r.semrep.dropped;
  rec.counts["relations"] = result.relations.size();
  rec.warnings = r.warnings;
  return std::move(result.relations);
}

struct Integrated {
  std::vector<IntegratedRelation> structured;
  std::vector<IntegratedRelation> literature;
};

Integrated integrate_stage(const integration::MappingTable& table, std::span<const RelationRecord> structured,
                           std::span<const RelationRecord> literature, const fs::path& dir, StageRecord& rec) {
  auto s = integration::resolve_relations(structured, table);
  auto l = integration::resolve_relations(literature, table);

  std::vector<IntegratedRelation> all = s.relations;
  all.insert(all.end(), l.relations.begin(), l.relations.end());
  write_jsonl<IntegratedRelation>(dir / kIntegratedFile, all);
  std::vector<integration::UnmappedEntry> unmapped = s.unmapped;
  unmapped.insert(unmapped.end(), l.unmapped.begin(), l.unmapped.end());
  write_jsonl<integration::UnmappedEntry>(dir / kUnmappedFile, unmapped);

  rec.outputs[kIntegratedFile] = file_hash(dir / kIntegratedFile);
  rec.outputs[kUnmappedFile] = file_hash(dir / kUnmappedFile);
  rec.counts["input_relations"] = structured.size() + literature.size();
  rec.counts["integrated"] = all.size();
  rec.counts["unmapped"] = unmapped.size();
  return Integrated{std::move(s.relations), std::move(l.relations)};
}

graph::ArticleNode article_node(const ArticleRecord& a) {
  return graph::ArticleNode{a.pmid, a.title, a.abstract_text.has_value(), a.fulltext_body.has_value(), a.pub_date,
                            false};
}

std::map<std::string, std::string> source_hashes(const RunManifest& m) {
  std::map<std::string, std::string> out;
  for (const auto& s : m.stages)
    for (const auto& [name, hash] : s.inputs) out.emplace(name, hash);
  return out;
}

integration::MappingTable load_table(const PipelineConfig& config, StageRecord& rec) {
  auto table = integration::MappingTable::load(config.conso, config.sty);
  rec.inputs[config.conso.filename().string()] = file_hash(config.conso);
  rec.inputs[config.sty.filename().string()] = file_hash(config.sty);
  rec.counts["mapping_concepts"] = table.concept_count();
  rec.counts["mapping_rows_skipped"] = table.stats().conso_skipped + table.stats().sty_skipped +
                                       table.stats().sty_unknown_type + table.stats().sty_orphan;
  return table;
}

void finish(RunManifest& m, const graph::Graph& g) {
  m.node_count = g.node_count();
  m.edge_count = g.edge_count();
  m.graph_content_hash = g.content_hash();
}

}  // namespace

bool RunManifest::ok() const {
  return std::none_of(stages.begin(), stages.end(), [](const StageRecord& s) { return s.status != StageStatus::Ok; });
}

std::string RunManifest::failed_stage() const {
  for (const auto& s : stages)
    if (s.status == StageStatus::Failed) return s.name;
  return {};
}

ojson RunManifest::to_json() const {
  ojson j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["mode"] = mode;
  j["config_hash"] = config_hash;
  j["run_date"] = run_date;
  j["date_floor"] = date_floor ? ojson(*date_floor) : ojson(nullptr);
  j["status"] = ok() ? "ok" : "failed";
  const auto failed = failed_stage();
  j["failed_stage"] = failed.empty() ? ojson(nullptr) : ojson(failed);
  auto& stages_json = j["stages"] = ojson::array();
  for (const auto& s : stages) {
    ojson st;
    st["name"] = s.name;
    st["status"] = to_string(s.status);
    st["duration_ms"] = s.duration_ms;
    st["inputs"] = s.inputs;
    st["outputs"] = s.outputs;
    st["counts"] = s.counts;
    st["warnings"] = s.warnings;
    st["error"] = s.error.empty() ? ojson(nullptr) : ojson(s.error);
    stages_json.push_back(std::move(st));
  }
  if (structured_merge) j["structured_merge"] = merge_json(*structured_merge);
  if (literature_merge) j["literature_merge"] = merge_json(*literature_merge);
  j["graph"] = {{"node_count", node_count}, {"edge_count", edge_count}, {"content_hash", graph_content_hash}};
  return j;
}

std::vector<RelationRecord> harvest_structured(const StructuredSource& source) {
  const auto text = read_file(source.path);
  switch (source.format) {
    case StructuredFormat::Obo: return harvest::obo_to_relations(harvest::parse_obo(text), source.source);
    case StructuredFormat::MeshXml:
      return harvest::obo_to_relations(harvest::parse_obo(harvest::mesh_xml_to_obo(text)), source.source);
    case StructuredFormat::DrugBank: return harvest::parse_drugbank_interactions(text, source.source);
  }
  return {};
}

RunManifest run_full(const PipelineConfig& config, const RunOptions& options) {
  config.validate();
  const auto dir = config.output_dir;
  fs::create_directories(dir);
  const auto run_date = config.effective_run_date();

  RunManifest m;
  m.mode = "full";
  m.config_hash = config.hash();
  m.run_date = run_date.iso();
  StageRunner runner(m, {dir / kRunManifestFile});

  std::vector<ArticleRecord> articles;
  std::vector<RelationRecord> structured, literature;
  std::optional<integration::MappingTable> table;
  Integrated integrated;
  graph::Graph g;

  runner.run("harvest-literature", [&](StageRecord& rec) {
    articles = harvest_stage(config, options, std::nullopt, dir, rec);
  });
  runner.run("harvest-structured", [&](StageRecord& rec) { structured = structured_stage(config, dir, rec); });
  runner.run("analyze", [&](StageRecord& rec) {
    table.emplace(load_table(config, rec));
    rec.inputs[kArticlesFile] = file_hash(dir / kArticlesFile);
    literature = analyze_stage(config, *table, articles, dir, rec);
  });
  runner.run("integrate", [&](StageRecord& rec) {
    integrated = integrate_stage(*table, structured, literature, dir, rec);
  });
  runner.run("build", [&](StageRecord& rec) {
    const auto ts = run_date.iso();
    g.merge_increment(integrated.structured, ts);
    g.merge_increment(integrated.literature, ts);
    for (const auto& a : articles) g.upsert_article(article_node(a));
    graph::save_snapshot(g, dir / kGraphDir, run_date.iso(), m.config_hash, source_hashes(m));
    rec.inputs[kIntegratedFile] = file_hash(dir / kIntegratedFile);
    rec.counts["nodes"] = g.node_count();
    rec.counts["edges"] = g.edge_count();
    finish(m, g);
  });
  runner.write();
  const bool ok = runner.ok();
  // A full run is the baseline for the next update.
  if (ok && !config.config_path.empty()) store_last_update_date(config.config_path, run_date);
  return m;
}

RunManifest run_update(const PipelineConfig& config, const RunOptions& options) {
  config.validate();
  if (!config.last_update_date)
    throw ValidationError("update needs last_update_date in the config; run a full run first");
  const auto graph_dir = config.output_dir / kGraphDir;
  if (!graph::snapshot_exists(graph_dir))
    throw ValidationError("no graph at " + graph_dir.string() + "; run a full run (odg run --config FILE) first");

  const auto run_date = config.effective_run_date();
  const auto dir = config.output_dir / "updates" / run_date.iso();
  fs::create_directories(dir);

  RunManifest m;
  m.mode = "update";
  m.config_hash = config.hash();
  m.run_date = run_date.iso();
  m.date_floor = config.last_update_date->entrez();
  StageRunner runner(m, {dir / kRunManifestFile, config.output_dir / kRunManifestFile});

  std::vector<ArticleRecord> articles;
  std::vector<RelationRecord> structured, literature;
  std::optional<integration::MappingTable> table;
  Integrated integrated;

  runner.run("harvest-literature", [&](StageRecord& rec) {
    articles = harvest_stage(config, options, config.last_update_date, dir, rec);
  });
  runner.run("harvest-structured", [&](StageRecord& rec) { structured = structured_stage(config, dir, rec); });
  runner.run("analyze", [&](StageRecord& rec) {
    table.emplace(load_table(config, rec));
    rec.inputs[kArticlesFile] = file_hash(dir / kArticlesFile);
    literature = analyze_stage(config, *table, articles, dir, rec);
  });
  runner.run("integrate", [&](StageRecord& rec) {
    integrated = integrate_stage(*table, structured, literature, dir, rec);
  });
  runner.run("merge", [&](StageRecord& rec) {
    auto loaded = graph::load_snapshot(graph_dir);
    auto& g = loaded.graph;
    const auto ts = run_date.iso();
    m.structured_merge = g.merge_increment(integrated.structured, ts);
    auto lit = g.merge_increment(integrated.literature, ts);
    for (const auto& a : articles) {
      const auto before = g.node_count();
      g.upsert_article(article_node(a));
      lit.nodes_added += g.node_count() - before;
    }
    m.literature_merge = lit;
    auto hashes = loaded.manifest.source_hashes;
    for (auto& [k, v] : source_hashes(m)) hashes[k] = v;
    graph::save_snapshot(g, graph_dir, loaded.manifest.created_at, m.config_hash, std::move(hashes));
    rec.counts["nodes"] = g.node_count();
    rec.counts["edges"] = g.edge_count();
    finish(m, g);
  });
  runner.write();
  const bool ok = runner.ok();
  if (ok && !config.config_path.empty()) store_last_update_date(config.config_path, run_date);
  return m;
}

}  // namespace odg::pipeline

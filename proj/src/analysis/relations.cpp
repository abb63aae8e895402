#include "odg/analysis/relations.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>
#include <tuple>

namespace odg::analysis {

namespace {

Endpoint concept_endpoint(std::string cui, std::string label) {
  return Endpoint{std::string(vocab::kUmls), std::move(cui), std::move(label), {}};
}

Endpoint article_endpoint(std::string pmid, std::string title) {
  return Endpoint{std::string(vocab::kPmid), std::move(pmid), std::move(title), {}};
}

}  // namespace

std::vector<RelationRecord> mentions_to_relations(std::span<const ConceptMention> mentions,
                                                  std::span<const Predication> predications,
                                                  std::span<const ArticleRecord> articles,
                                                  std::string_view source_name) {
  std::map<std::string_view, std::string_view> titles;
  for (const auto& a : articles) titles.emplace(a.pmid, a.title);
  auto title_of = [&](std::string_view pmid) {
    auto it = titles.find(pmid);
    return it == titles.end() ? std::string{} : std::string(it->second);
  };

  std::vector<const ConceptMention*> sorted;
  sorted.reserve(mentions.size());
  for (const auto& m : mentions) sorted.push_back(&m);
  std::sort(sorted.begin(), sorted.end(), [](const ConceptMention* a, const ConceptMention* b) {
    return std::tie(a->pmid, a->sentence_index, a->char_span, a->cui, a->matched_text) <
           std::tie(b->pmid, b->sentence_index, b->char_span, b->cui, b->matched_text);
  });

  struct Group {
    std::string label;
    std::size_t count = 0;
    std::set<std::size_t> sentences;
  };
  std::map<std::pair<std::string_view, std::string_view>, Group> groups;  // (pmid, cui)
  for (const auto* m : sorted) {
    auto& g = groups[{m->pmid, m->cui}];
    if (g.count == 0) g.label = m->matched_text;
    ++g.count;
    g.sentences.insert(m->sentence_index);
  }

  std::vector<RelationRecord> out;
  for (const auto& [key, g] : groups) {
    json attrs = json::object();
    attrs["count"] = g.count;
    attrs["sentences"] = std::vector<std::size_t>(g.sentences.begin(), g.sentences.end());
    out.push_back(RelationRecord{concept_endpoint(std::string(key.second), g.label),
                                 std::string(predicate::kMentionedIn),
                                 article_endpoint(std::string(key.first), title_of(key.first)),
                                 std::string(source_name), std::move(attrs)});
  }

  std::vector<Predication> preds(predications.begin(), predications.end());
  std::sort(preds.begin(), preds.end(), [](const Predication& a, const Predication& b) {
    return std::tie(a.pmid, a.sentence_index, a.subject_cui, a.predicate, a.object_cui, a.negated) <
           std::tie(b.pmid, b.sentence_index, b.subject_cui, b.predicate, b.object_cui, b.negated);
  });
  preds.erase(std::unique(preds.begin(), preds.end(),
                          [](const Predication& a, const Predication& b) {
                            return std::tie(a.pmid, a.sentence_index, a.subject_cui, a.predicate, a.object_cui,
                                            a.negated) ==
                                   std::tie(b.pmid, b.sentence_index, b.subject_cui, b.predicate, b.object_cui,
                                            b.negated);
                          }),
              preds.end());
  for (const auto& p : preds) {
    json attrs = json::object();
    attrs["negated"] = p.negated;
    attrs["article_pmid"] = p.pmid;
    attrs["sentence_index"] = p.sentence_index;
    out.push_back(RelationRecord{concept_endpoint(p.subject_cui, p.subject_name), p.predicate,
                                 concept_endpoint(p.object_cui, p.object_name), std::string(source_name),
                                 std::move(attrs)});
  }

  std::vector<const ArticleRecord*> by_pmid;
  for (const auto& a : articles) by_pmid.push_back(&a);
  std::sort(by_pmid.begin(), by_pmid.end(), [](auto* a, auto* b) { return a->pmid < b->pmid; });
  for (const auto* a : by_pmid) {
    const std::set<std::string> headings(a->mesh_headings.begin(), a->mesh_headings.end());
    for (const auto& ui : headings) {
      out.push_back(RelationRecord{article_endpoint(a->pmid, a->title), std::string(predicate::kHasMesh),
                                   Endpoint{std::string(vocab::kMesh), ui, {}, {}}, std::string(source_name),
                                   json::object()});
    }
  }
  return out;
}

AnalysisResult analyze_corpus(std::span<const ArticleRecord> articles, const DictionaryTagger* tagger,
                              std::span<const std::string> semrep_texts, const SemRepColumns& columns,
                              unsigned workers) {
  AnalysisResult result;
  auto& report = result.report;
  report.articles = articles.size();

  std::vector<std::vector<ConceptMention>> per_article(articles.size());
  std::vector<std::size_t> sentence_counts(articles.size(), 0);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, std::max<std::size_t>(1, articles.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < articles.size(); i = next++) {
      const auto clean = preprocess_text(articles[i]);
      sentence_counts[i] = clean.sentences.size();
      if (tagger) per_article[i] = tagger->tag(clean);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  std::vector<ConceptMention> tagged;
  for (std::size_t i = 0; i < articles.size(); ++i) {
    report.sentences += sentence_counts[i];
    for (auto& m : per_article[i]) tagged.push_back(std::move(m));
  }
  report.tagger_mentions = tagged.size();

  // HAS_MESH comes with the tagger batch so it is emitted exactly once.
  result.relations = mentions_to_relations(tagged, {}, articles, kTaggerSource);

  if (!semrep_texts.empty()) {
    std::set<std::string, std::less<>> allow;
    for (const auto& a : articles) allow.insert(a.pmid);
    std::vector<ConceptMention> mentions;
    std::vector<Predication> predications;
    for (const auto& text : semrep_texts) {
      auto parsed = ingest_semrep_output(text, allow, columns);
      for (auto& m : parsed.mentions) mentions.push_back(std::move(m));
      for (auto& p : parsed.predications) predications.push_back(std::move(p));
      auto& s = report.semrep;
      s.total_lines += parsed.stats.total_lines;
      s.other_records += parsed.stats.other_records;
      s.malformed += parsed.stats.malformed;
      s.dropped += parsed.stats.dropped;
      s.parsed += parsed.stats.parsed;
      for (auto& p : parsed.stats.problems) s.problems.push_back(std::move(p));
      for (auto& w : parsed.warnings) report.warnings.push_back("semrep: " + w);
    }
    report.semrep_mentions = mentions.size();
    report.predications = predications.size();
    auto semrep_relations = mentions_to_relations(mentions, predications, {}, kSemRepSource);
    for (auto& r : semrep_relations) result.relations.push_back(std::move(r));
  }
  return result;
}

}  // namespace odg::analysis

#ifndef ODG_ANALYSIS_RELATIONS_HPP
#define ODG_ANALYSIS_RELATIONS_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odg/analysis/semrep.hpp"
#include "odg/analysis/tagger.hpp"
#include "odg/records.hpp"

namespace odg::analysis {

/// Emits, in this order and each group sorted:
///  - one MENTIONED_IN record per distinct (cui, pmid) with attributes
///    {count, sentences};
///  - one record per distinct predication with attributes
///    {negated, article_pmid, sentence_index};
///  - one HAS_MESH record per distinct MeSH heading of each article.
/// Concept endpoints use vocabulary UMLS, articles PMID, headings MSH.
std::vector<RelationRecord> mentions_to_relations(std::span<const ConceptMention> mentions,
                                                  std::span<const Predication> predications,
                                                  std::span<const ArticleRecord> articles,
                                                  std::string_view source_name);

struct AnalysisReport {
  std::size_t articles = 0;
  std::size_t sentences = 0;
  std::size_t tagger_mentions = 0;
  std::size_t semrep_mentions = 0;
  std::size_t predications = 0;
  SemRepStats semrep;  // summed over all inputs
  std::vector<std::string> warnings;
};

struct AnalysisResult {
  std::vector<RelationRecord> relations;
  AnalysisReport report;
};

inline constexpr std::string_view kTaggerSource = "dictionary-tagger";
inline constexpr std::string_view kSemRepSource = "semrep";

/// Runs the tagger (if given) over every article and ingests each SemRep
/// output text, restricted to the articles' pmids. Article processing is
/// spread over `workers` threads; the result does not depend on it.
AnalysisResult analyze_corpus(std::span<const ArticleRecord> articles, const DictionaryTagger* tagger,
                              std::span<const std::string> semrep_texts,
                              const SemRepColumns& columns = SemRepColumns::defaults(), unsigned workers = 0);

}  // namespace odg::analysis

#endif

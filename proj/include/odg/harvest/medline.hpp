#ifndef ODG_HARVEST_MEDLINE_HPP
#define ODG_HARVEST_MEDLINE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odg/records.hpp"

namespace odg::harvest {

/// One citation's raw XML as returned by the literature service.
struct RawDocument {
  std::string pmid;
  std::string xml;
};

/// Extracts pmid, title, abstract, MeSH descriptor UIs, publication date and
/// PMC id from one PubmedArticle (or bare MedlineCitation) document.
/// Abstract sections are joined with single spaces in document order; a
/// section's Label attribute is kept as a "Label: " prefix.
/// Throws ParseError when the PMID is missing or a descriptor UI is invalid.
ArticleRecord parse_medline_xml(std::string_view xml);

/// Splits a PubmedArticleSet response into per-article documents keyed by
/// their PMID. Throws ParseError if the response is not an article set.
std::vector<RawDocument> split_pubmed_article_set(std::string_view xml);

/// Paragraph text of a PMC article body, one paragraph per line. Tables,
/// figures (with their captions), formulas and reference lists are left out.
/// Returns nullopt when the document has no body or the body has no text.
std::optional<std::string> parse_pmc_body(std::string_view xml);

}  // namespace odg::harvest

#endif

#include "odg/harvest/medline.hpp"

#include <array>
#include <cctype>

#include "odg/error.hpp"
#include "odg/xml.hpp"

namespace odg::harvest {

namespace {

std::optional<int> month_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (std::isdigit(static_cast<unsigned char>(text.front()))) {
    int m = 0;
    for (char c : text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      m = m * 10 + (c - '0');
    }
    return (m >= 1 && m <= 12) ? std::optional<int>(m) : std::nullopt;
  }
  static constexpr std::array<std::string_view, 12> names = {"jan", "feb", "mar", "apr", "may", "jun",
                                                             "jul", "aug", "sep", "oct", "nov", "dec"};
  const auto lower = to_lower_ascii(text.substr(0, 3));
  for (std::size_t i = 0; i < names.size(); ++i)
    if (lower == names[i]) return static_cast<int>(i + 1);
  return std::nullopt;
}

// Year/Month/Day children as used by PubDate, ArticleDate and DateCompleted.
std::optional<Date> date_from_parts(const xml::Element& e) {
  if (!e) return std::nullopt;
  const auto year_text = trim(e.child("Year").text());
  Date d;
  if (year_text.size() == 4) {
    d.year = std::stoi(std::string(year_text));
    if (auto m = month_number(e.child("Month").text())) {
      d.month = *m;
      const auto day_text = std::string(trim(e.child("Day").text()));
      if (!day_text.empty() && std::isdigit(static_cast<unsigned char>(day_text[0]))) d.day = std::stoi(day_text);
    }
  } else {
    // MedlineDate, e.g. "1998 Dec-1999 Jan" or "2000 Spring".
    const std::string medline = collapse_whitespace(e.child("MedlineDate").text());
    if (medline.size() < 4) return std::nullopt;
    for (int i = 0; i < 4; ++i)
      if (!std::isdigit(static_cast<unsigned char>(medline[i]))) return std::nullopt;
    d.year = std::stoi(medline.substr(0, 4));
    if (medline.size() > 5) {
      if (auto m = month_number(std::string_view(medline).substr(5, 3))) d.month = *m;
    }
  }
  if (!d.valid()) return std::nullopt;
  return d;
}

xml::Element citation_of(const xml::Element& root) {
  if (root.name() == "MedlineCitation") return root;
  return root.child("MedlineCitation");
}

}  // namespace

ArticleRecord parse_medline_xml(std::string_view text) {
  xml::Document doc{std::string(text)};
  xml::Element article = doc.root();
  if (article.name() == "PubmedArticleSet") article = article.child("PubmedArticle");
  const xml::Element citation = citation_of(article);
  if (!citation) throw ParseError("MEDLINE document has no MedlineCitation element");

  ArticleRecord rec;
  rec.pmid = std::string(trim(citation.child("PMID").text()));
  if (rec.pmid.empty()) throw ParseError("MEDLINE citation is missing its PMID element");

  const auto art = citation.child("Article");
  rec.title = collapse_whitespace(art.child("ArticleTitle").text());

  if (const auto abstract = art.child("Abstract")) {
    std::string joined;
    for (const auto& section : abstract.children("AbstractText")) {
      std::string part = collapse_whitespace(section.text());
      if (auto label = section.attribute("Label"); label && !label->empty()) {
        part = part.empty() ? std::string(*label) + ":" : std::string(*label) + ": " + part;
      }
      if (part.empty()) continue;
      if (!joined.empty()) joined += ' ';
      joined += part;
    }
    if (!joined.empty()) rec.abstract_text = std::move(joined);
  }

  for (const auto& heading : citation.path("MeshHeadingList").children("MeshHeading")) {
    const auto descriptor = heading.child("DescriptorName");
    const auto ui = descriptor.attribute("UI");
    if (!ui || !is_mesh_ui(*ui))
      throw ParseError("PMID " + rec.pmid + ": invalid MeSH descriptor UI '" + std::string(ui.value_or("")) + "'");
    rec.mesh_headings.emplace_back(*ui);
  }

  rec.pub_date = date_from_parts(art.path("Journal/JournalIssue/PubDate"));
  if (!rec.pub_date) rec.pub_date = date_from_parts(art.child("ArticleDate"));
  if (!rec.pub_date) rec.pub_date = date_from_parts(citation.child("DateCompleted"));

  for (const auto& id : article.path("PubmedData/ArticleIdList").children("ArticleId")) {
    if (id.attribute("IdType") == std::optional<std::string_view>("pmc")) {
      auto value = std::string(trim(id.text()));
      if (!value.empty()) rec.pmcid = std::move(value);
      break;
    }
  }
  return rec;
}

std::vector<RawDocument> split_pubmed_article_set(std::string_view text) {
  // Cheap check on the document element before scanning.
  bool is_set = false;
  {
    std::size_t i = 0;
    while ((i = text.find('<', i)) != std::string_view::npos) {
      const auto rest = text.substr(i);
      if (rest.starts_with("<?") || rest.starts_with("<!")) {
        ++i;
        continue;
      }
      is_set = rest.starts_with("<PubmedArticleSet");
      break;
    }
  }
  if (!is_set) throw ParseError("efetch response is not a PubmedArticleSet");

  std::vector<RawDocument> docs;
  xml::for_each_top_level_element(text, "PubmedArticle", [&](std::string_view element) {
    xml::Document doc{std::string(element)};
    auto pmid = std::string(trim(doc.root().path("MedlineCitation/PMID").text()));
    if (pmid.empty()) return;
    docs.push_back(RawDocument{std::move(pmid), std::string(element)});
  });
  return docs;
}

std::optional<std::string> parse_pmc_body(std::string_view text) {
  xml::Document doc{std::string(text)};
  xml::Element article = doc.root();
  if (article.name() != "article") article = article.child("article");
  const auto body = article.child("body");
  if (!body) return std::nullopt;

  using namespace std::string_view_literals;
  static constexpr std::array excluded = {"table-wrap"sv, "table-wrap-group"sv, "table"sv,
                                          "fig"sv,        "fig-group"sv,        "caption"sv,
                                          "ref-list"sv,   "disp-formula"sv,     "supplementary-material"sv};
  std::string out;
  for (const auto& p : body.descendants("p", excluded)) {
    const auto para = collapse_whitespace(p.text_excluding(excluded));
    if (para.empty()) continue;
    if (!out.empty()) out += '\n';
    out += para;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace odg::harvest

#include "odg/analysis/tagger.hpp"

#include <cctype>

namespace odg::analysis {

namespace {

unsigned char fold(char c) { return static_cast<unsigned char>(std::tolower(static_cast<unsigned char>(c))); }

}  // namespace

DictionaryTagger::DictionaryTagger(const std::unordered_map<std::string, std::string>& term_to_cui) {
  terminal_.push_back(kNoTerm);
  std::unordered_map<std::string, std::uint32_t> cui_index;
  for (const auto& [raw_term, cui] : term_to_cui) {
    const auto term = collapse_whitespace(raw_term);
    if (term.empty()) continue;
    std::uint32_t node = 0;
    for (char c : term) {
      const auto key = (static_cast<std::uint64_t>(node) << 8) | fold(c);
      auto [it, inserted] = edges_.try_emplace(key, static_cast<std::uint32_t>(terminal_.size()));
      if (inserted) terminal_.push_back(kNoTerm);
      node = it->second;
    }
    auto [ci, fresh] = cui_index.try_emplace(cui, static_cast<std::uint32_t>(cuis_.size()));
    if (fresh) cuis_.push_back(cui);
    // Two raw terms can fold to the same key; keep the smaller CUI so the
    // result does not depend on hash-map iteration order.
    auto& slot = terminal_[node];
    if (slot == kNoTerm) {
      ++term_count_;
      slot = ci->second;
    } else if (cuis_[ci->second] < cuis_[slot]) {
      slot = ci->second;
    }
  }
}

std::uint32_t DictionaryTagger::child(std::uint32_t node, unsigned char byte) const {
  auto it = edges_.find((static_cast<std::uint64_t>(node) << 8) | byte);
  return it == edges_.end() ? kNoTerm : it->second;
}

std::vector<DictionaryTagger::Match> DictionaryTagger::scan(std::string_view text) const {
  std::vector<Match> out;
  const auto n = text.size();
  auto word = [&](std::size_t i) { return is_word_byte(static_cast<unsigned char>(text[i])); };
  std::size_t i = 0;
  while (i < n) {
    if (i > 0 && word(i - 1) && word(i)) {
      ++i;
      continue;
    }
    std::uint32_t node = 0;
    std::size_t best_end = 0;
    std::uint32_t best_term = kNoTerm;
    for (std::size_t j = i; j < n; ++j) {
      unsigned char c = fold(text[j]);
      if (std::isspace(c)) {
        // Collapse whitespace runs in the text to the single space in terms.
        while (j + 1 < n && std::isspace(static_cast<unsigned char>(text[j + 1]))) ++j;
        c = ' ';
      }
      node = child(node, c);
      if (node == kNoTerm) break;
      const auto end = j + 1;
      if (terminal_[node] != kNoTerm && (end == n || !word(end) || !word(end - 1))) {
        best_end = end;
        best_term = terminal_[node];
      }
    }
    if (best_term == kNoTerm) {
      ++i;
      continue;
    }
    out.push_back(Match{Span{i, best_end}, cuis_[best_term]});
    i = best_end;
  }
  return out;
}

std::vector<ConceptMention> DictionaryTagger::tag(const CleanText& clean) const {
  std::vector<ConceptMention> out;
  for (const auto& s : clean.sentences) {
    for (const auto& m : scan(s.text)) {
      out.push_back(ConceptMention{std::string(m.cui), s.text.substr(m.span.begin, m.span.end - m.span.begin),
                                   clean.pmid, s.index,
                                   Span{s.span.begin + m.span.begin, s.span.begin + m.span.end}});
    }
  }
  return out;
}

}  // namespace odg::analysis

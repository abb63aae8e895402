#ifndef ODG_ANALYSIS_TAGGER_HPP
#define ODG_ANALYSIS_TAGGER_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "odg/analysis/text.hpp"

namespace odg::analysis {

struct ConceptMention {
  std::string cui;
  std::string matched_text;
  std::string pmid;
  std::size_t sentence_index = 0;
  Span char_span;

  bool operator==(const ConceptMention&) const = default;
};

/// Case-insensitive leftmost-longest dictionary matcher over a term trie.
/// Matches must start and end on word boundaries.
class DictionaryTagger {
 public:
  /// `term_to_cui` keys are matched ASCII-case-insensitively; runs of
  /// whitespace inside a term match a single space.
  explicit DictionaryTagger(const std::unordered_map<std::string, std::string>& term_to_cui);

  struct Match {
    Span span;  // relative to the scanned text
    std::string_view cui;
  };
  std::vector<Match> scan(std::string_view text) const;

  /// Mentions for every sentence of `clean`, spans relative to clean.joined().
  std::vector<ConceptMention> tag(const CleanText& clean) const;

  std::size_t term_count() const { return term_count_; }

 private:
  static constexpr std::uint32_t kNoTerm = UINT32_MAX;
  std::uint32_t child(std::uint32_t node, unsigned char byte) const;

  std::unordered_map<std::uint64_t, std::uint32_t> edges_;  // (node << 8 | byte) -> node
  std::vector<std::uint32_t> terminal_;                     // node -> index into cuis_
  std::vector<std::string> cuis_;
  std::size_t term_count_ = 0;
};

}  // namespace odg::analysis

#endif

#ifndef ODG_ANALYSIS_TEXT_HPP
#define ODG_ANALYSIS_TEXT_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odg/records.hpp"

namespace odg::analysis {

enum class SegmentKind { Abstract, Fulltext };

struct Segment {
  SegmentKind kind;
  std::string text;
};

/// Half-open byte range.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

struct Sentence {
  std::size_t index = 0;
  Span span;  // into CleanText::joined()
  std::string text;
};

/// Cleaned article text. Sentences never cross segment boundaries.
struct CleanText {
  std::string pmid;
  std::vector<Segment> segments;
  std::vector<Sentence> sentences;

  /// Segment texts joined by single spaces; sentence spans index into this.
  std::string joined() const;
};

/// Removes `$...$` / `$$...$$` spans and `\command[opt]{arg}...` sequences.
std::string strip_latex(std::string_view text);

/// Drops lines where more than half of the non-blank characters are digits
/// or column separators (| & , ; . - + % / tab), i.e. residual table rows.
std::string drop_table_rows(std::string_view text);

/// LaTeX and table-row removal followed by whitespace normalisation.
std::string clean_segment(std::string_view text);

/// Splits at '.', '?' or '!' (optionally followed by closing quotes or
/// brackets) when whitespace and an upper-case letter follow, unless the
/// token ending at a '.' is in `abbreviations`. Offsets are shifted by
/// `base_offset` and indices start at `first_index`.
std::vector<Sentence> split_sentences(std::string_view text, std::span<const std::string> abbreviations,
                                      std::size_t base_offset = 0, std::size_t first_index = 0);

/// Cleans the abstract and full text of a record and splits them into
/// sentences using the shipped abbreviation list. A record with neither
/// yields an empty CleanText.
CleanText preprocess_text(const ArticleRecord& record);

}  // namespace odg::analysis

#endif

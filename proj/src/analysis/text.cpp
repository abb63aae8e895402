#include "odg/analysis/text.hpp"

#include <cctype>

#include "odg/resources.hpp"

namespace odg::analysis {

std::string CleanText::joined() const {
  std::string out;
  for (const auto& s : segments) {
    if (!out.empty()) out += ' ';
    out += s.text;
  }
  return out;
}

namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

// Index just past a balanced group opened at `open_pos`, or npos.
std::size_t skip_group(std::string_view text, std::size_t open_pos, char open, char close) {
  int depth = 0;
  for (std::size_t i = open_pos; i < text.size(); ++i) {
    if (text[i] == '\\') {
      ++i;
      continue;
    }
    if (text[i] == open) ++depth;
    if (text[i] == close && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

bool is_separator(unsigned char c) {
  switch (c) {
    case '|': case '&': case ',': case ';': case '.': case '-': case '+': case '%': case '/': case '\t':
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string strip_latex(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '$') {
      const bool display = i + 1 < text.size() && text[i + 1] == '$';
      const std::string_view closing = display ? "$$" : "$";
      const auto end = text.find(closing, i + closing.size());
      if (end != std::string_view::npos) {
        out += ' ';
        i = end + closing.size();
        continue;
      }
    } else if (c == '\\' && i + 1 < text.size()) {
      std::size_t j = i + 1;
      if (is_letter(text[j])) {
        while (j < text.size() && is_letter(text[j])) ++j;
        // Optional [..] then any number of {..} arguments.
        if (j < text.size() && text[j] == '[') {
          if (auto e = skip_group(text, j, '[', ']'); e != std::string_view::npos) j = e;
        }
        while (j < text.size() && text[j] == '{') {
          const auto e = skip_group(text, j, '{', '}');
          if (e == std::string_view::npos) break;
          j = e;
        }
      } else {
        ++j;  // control symbol such as \\ or \%
      }
      out += ' ';
      i = j;
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

std::string drop_table_rows(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (auto line : split(text, '\n')) {
    std::size_t total = 0;
    std::size_t tabular = 0;
    for (unsigned char c : line) {
      if (c == '\t') {
        ++total;
        ++tabular;
        continue;
      }
      if (std::isspace(c)) continue;
      ++total;
      if (std::isdigit(c) || is_separator(c)) ++tabular;
    }
    if (total > 0 && tabular * 2 > total) continue;
    if (!out.empty()) out += '\n';
    out += line;
  }
  return out;
}

std::string clean_segment(std::string_view text) { return collapse_whitespace(drop_table_rows(strip_latex(text))); }

std::vector<Sentence> split_sentences(std::string_view text, std::span<const std::string> abbreviations,
                                      std::size_t base_offset, std::size_t first_index) {
  std::vector<Sentence> out;
  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (begin == end) return;
    out.push_back(Sentence{first_index + out.size(), Span{base_offset + begin, base_offset + end},
                           std::string(text.substr(begin, end - begin))});
  };
  auto is_abbreviation = [&](std::size_t dot) {
    const auto head = text.substr(0, dot + 1);
    for (const auto& a : abbreviations) {
      if (!head.ends_with(a)) continue;
      const auto start = head.size() - a.size();
      if (start == 0 || std::isspace(static_cast<unsigned char>(head[start - 1])) || head[start - 1] == '(')
        return true;
    }
    return false;
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '?' && c != '!') continue;
    std::size_t j = i + 1;
    while (j < text.size() && (text[j] == ')' || text[j] == ']' || text[j] == '"' || text[j] == '\'')) ++j;
    if (j >= text.size() || !std::isspace(static_cast<unsigned char>(text[j]))) continue;
    std::size_t k = j;
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k >= text.size() || !std::isupper(static_cast<unsigned char>(text[k]))) continue;
    if (c == '.' && is_abbreviation(i)) continue;
    emit(start, j);
    start = j;
    i = j - 1;
  }
  emit(start, text.size());
  return out;
}

CleanText preprocess_text(const ArticleRecord& record) {
  CleanText clean;
  clean.pmid = record.pmid;
  if (record.abstract_text) clean.segments.push_back(Segment{SegmentKind::Abstract, clean_segment(*record.abstract_text)});
  if (record.fulltext_body) clean.segments.push_back(Segment{SegmentKind::Fulltext, clean_segment(*record.fulltext_body)});
  std::erase_if(clean.segments, [](const Segment& s) { return s.text.empty(); });

  const auto& abbreviations = resources::abbreviations();
  std::size_t offset = 0;
  for (const auto& seg : clean.segments) {
    auto sentences = split_sentences(seg.text, abbreviations, offset, clean.sentences.size());
    for (auto& s : sentences) clean.sentences.push_back(std::move(s));
    offset += seg.text.size() + 1;
  }
  return clean;
}

}  // namespace odg::analysis

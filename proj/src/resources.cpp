#include "odg/resources.hpp"

#include <stdexcept>

#include "odg/common.hpp"

namespace odg::detail {
const std::map<std::string, std::string_view>& embedded_data_files();
}

namespace odg::resources {

namespace {

// Non-empty lines that are not '#' comments.
std::vector<std::string_view> content_lines(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

struct SemanticTypes {
  std::set<std::string, std::less<>> names;
  std::map<std::string, std::string, std::less<>> by_tui;
};

const SemanticTypes& semantic_types() {
  static const SemanticTypes types = [] {
    SemanticTypes t;
    for (auto line : content_lines(data_file("semantic_types.tsv"))) {
      auto cols = split(line, '\t');
      if (cols.size() != 2) throw std::logic_error("bad semantic_types.tsv row");
      t.names.emplace(cols[1]);
      t.by_tui.emplace(std::string(cols[0]), std::string(cols[1]));
    }
    return t;
  }();
  return types;
}

const std::map<std::string, std::string, std::less<>>& predicate_map() {
  static const auto map = [] {
    std::map<std::string, std::string, std::less<>> m;
    for (auto line : content_lines(data_file("predicate_labels.tsv"))) {
      auto cols = split(line, '\t');
      if (cols.size() != 2) throw std::logic_error("bad predicate_labels.tsv row");
      m.emplace(to_lower_ascii(cols[0]), std::string(cols[1]));
    }
    return m;
  }();
  return map;
}

}  // namespace

std::string_view data_file(const std::string& name) {
  const auto& files = odg::detail::embedded_data_files();
  auto it = files.find(name);
  if (it == files.end()) throw std::out_of_range("no shipped data file " + name);
  return it->second;
}

const std::set<std::string, std::less<>>& semantic_type_names() { return semantic_types().names; }

std::string_view semantic_type_for_tui(std::string_view tui) {
  const auto& by_tui = semantic_types().by_tui;
  auto it = by_tui.find(tui);
  return it == by_tui.end() ? std::string_view{} : std::string_view(it->second);
}

const std::set<std::string, std::less<>>& relation_labels() {
  static const auto labels = [] {
    std::set<std::string, std::less<>> s;
    for (auto line : content_lines(data_file("relation_labels.txt"))) s.emplace(trim(line));
    return s;
  }();
  return labels;
}

const std::vector<std::string>& abbreviations() {
  static const auto list = [] {
    std::vector<std::string> v;
    for (auto line : content_lines(data_file("abbreviations.txt"))) v.emplace_back(trim(line));
    return v;
  }();
  return list;
}

std::string canonical_predicate(std::string_view label) {
  const auto& map = predicate_map();
  auto it = map.find(to_lower_ascii(trim(label)));
  if (it != map.end()) return it->second;
  std::string out = to_upper_ascii(trim(label));
  for (auto& c : out)
    if (c == ' ') c = '_';
  return out;
}

}  // namespace odg::resources

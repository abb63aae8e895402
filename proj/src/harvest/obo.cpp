#include <unordered_map>

#include "odg/error.hpp"
#include "odg/harvest/structured.hpp"

namespace odg::harvest {

namespace {

// Drops a trailing "! comment" and "{qualifier=...}" block from a tag value.
std::string_view strip_value(std::string_view value) {
  if (auto bang = value.find(" !"); bang != std::string_view::npos) value = value.substr(0, bang);
  if (value.starts_with("!")) value = {};
  if (auto brace = value.find('{'); brace != std::string_view::npos) value = value.substr(0, brace);
  return trim(value);
}

Endpoint term_endpoint(std::string_view term_id, const OboTerm* term) {
  const auto colon = term_id.find(':');
  const std::string prefix(colon == std::string_view::npos ? std::string_view{} : term_id.substr(0, colon));
  const std::string local(colon == std::string_view::npos ? term_id : term_id.substr(colon + 1));
  Endpoint e{prefix, local, term ? term->name : std::string{}, {}};
  if (term) {
    for (const auto& x : term->xrefs) {
      if ((x.vocabulary == "UMLS" || x.vocabulary == "UMLS_CUI") && is_cui(x.code)) {
        e.vocab = vocab::kUmls;
        e.code = x.code;
        e.origin_vocab = prefix;
        break;
      }
    }
  }
  return e;
}

}  // namespace

std::vector<OboTerm> parse_obo(std::string_view text) {
  std::vector<OboTerm> terms;
  enum class Stanza { None, Term, Other } stanza = Stanza::None;
  OboTerm current;
  std::size_t stanza_line = 0;

  auto finish = [&] {
    if (stanza != Stanza::Term) return;
    if (current.term_id.empty()) throw ParseError("[Term] stanza has no id", stanza_line);
    terms.push_back(std::move(current));
    current = OboTerm{};
  };

  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto stripped = trim(line);
    if (stripped.empty() || stripped.front() == '!') continue;
    if (stripped.front() == '[') {
      finish();
      stanza = stripped == "[Term]" ? Stanza::Term : Stanza::Other;
      stanza_line = line_no;
      continue;
    }
    if (stanza != Stanza::Term) continue;
    const auto colon = stripped.find(':');
    if (colon == std::string_view::npos) continue;
    const auto tag = trim(stripped.substr(0, colon));
    const auto value = trim(stripped.substr(colon + 1));
    if (tag == "id") {
      current.term_id = std::string(strip_value(value));
    } else if (tag == "name") {
      current.name = std::string(value);
    } else if (tag == "is_a") {
      const auto parent = strip_value(value);
      if (!parent.empty()) current.is_a_parents.emplace_back(parent);
    } else if (tag == "xref") {
      auto ref = strip_value(value);
      // Drop a quoted description: xref: UMLS:C0011849 "text"
      if (auto space = ref.find_first_of(" \t"); space != std::string_view::npos) ref = ref.substr(0, space);
      const auto split_at = ref.find(':');
      if (split_at == std::string_view::npos || split_at == 0) continue;
      current.xrefs.push_back(Xref{std::string(ref.substr(0, split_at)), std::string(ref.substr(split_at + 1))});
    } else if (tag == "is_obsolete") {
      current.is_obsolete = strip_value(value) == "true";
    }
  }
  finish();
  return terms;
}

std::string write_obo(std::span<const OboTerm> terms) {
  std::unordered_map<std::string_view, std::string_view> names;
  for (const auto& t : terms) names.emplace(t.term_id, t.name);
  std::string out = "format-version: 1.2\n";
  for (const auto& t : terms) {
    out += "\n[Term]\nid: " + t.term_id + "\n";
    if (!t.name.empty()) out += "name: " + t.name + "\n";
    for (const auto& x : t.xrefs) out += "xref: " + x.vocabulary + ":" + x.code + "\n";
    for (const auto& p : t.is_a_parents) {
      out += "is_a: " + p;
      if (auto it = names.find(p); it != names.end() && !it->second.empty()) out += " ! " + std::string(it->second);
      out += "\n";
    }
    if (t.is_obsolete) out += "is_obsolete: true\n";
  }
  return out;
}

std::vector<RelationRecord> obo_to_relations(std::span<const OboTerm> terms, std::string_view source_name) {
  std::unordered_map<std::string_view, const OboTerm*> by_id;
  for (const auto& t : terms) by_id.emplace(t.term_id, &t);
  auto lookup = [&](std::string_view id) -> const OboTerm* {
    auto it = by_id.find(id);
    return it == by_id.end() ? nullptr : it->second;
  };

  std::vector<RelationRecord> out;
  for (const auto& t : terms) {
    if (t.is_obsolete) continue;
    const auto child = term_endpoint(t.term_id, &t);
    for (const auto& parent_id : t.is_a_parents) {
      auto parent = term_endpoint(parent_id, lookup(parent_id));
      if (parent.vocab == child.vocab && parent.code == child.code) continue;
      out.push_back(RelationRecord{child, std::string(predicate::kIsA), std::move(parent), std::string(source_name),
                                   json::object()});
    }
  }
  return out;
}

}  // namespace odg::harvest

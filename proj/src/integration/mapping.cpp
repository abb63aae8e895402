#include "odg/integration/mapping.hpp"

#include <algorithm>

#include "odg/error.hpp"
#include "odg/resources.hpp"

namespace odg::integration {

namespace {

constexpr std::size_t kMaxProblems = 20;

bool truthy_flag(std::string_view v) {
  const auto s = to_lower_ascii(trim(v));
  return s == "y" || s == "1" || s == "true" || s == "yes";
}

template <typename Fn>
void for_each_row(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    fn(split(line, '\t'), line_no);
  }
}

}  // namespace

std::string MappingTable::normalize_vocab(std::string_view vocab) { return to_upper_ascii(trim(vocab)); }

std::string MappingTable::normalize_code(std::string_view vocab, std::string_view code) {
  code = trim(code);
  const auto v = normalize_vocab(vocab);
  if (code.size() > v.size() && code[v.size()] == ':' && to_upper_ascii(code.substr(0, v.size())) == v)
    code.remove_prefix(v.size() + 1);
  return std::string(code);
}

MappingTable MappingTable::load(const std::filesystem::path& conso, const std::filesystem::path& sty) {
  for (const auto& p : {conso, sty})
    if (!std::filesystem::is_regular_file(p)) throw ValidationError("mapping file not found: " + p.string());
  return parse(read_file(conso), read_file(sty));
}

MappingTable MappingTable::parse(std::string_view conso_text, std::string_view sty_text) {
  MappingTable t;
  auto& st = t.stats_;
  auto problem = [&](const char* file, std::size_t line, const std::string& why) {
    if (st.problems.size() < kMaxProblems)
      st.problems.push_back(std::string(file) + ":" + std::to_string(line) + ": " + why);
  };

  struct Row {
    std::string cui, sab, code, term;
    bool preferred;
  };
  std::vector<Row> rows;
  std::map<std::string, std::size_t, std::less<>> row_count;
  for_each_row(conso_text, [&](const std::vector<std::string_view>& cols, std::size_t line) {
    if (cols.size() != 5) {
      ++st.conso_skipped;
      problem("conso", line, "expected 5 columns, got " + std::to_string(cols.size()));
      return;
    }
    Row r{std::string(trim(cols[0])), normalize_vocab(cols[1]), normalize_code(cols[1], cols[2]),
          collapse_whitespace(cols[3]), truthy_flag(cols[4])};
    if (!is_cui(r.cui)) {
      ++st.conso_skipped;
      problem("conso", line, "malformed CUI '" + r.cui + "'");
      return;
    }
    ++st.conso_rows;
    ++row_count[r.cui];
    rows.push_back(std::move(r));
  });
  if (rows.empty()) throw ValidationError("mapping table: conso file has no usable rows");

  // Collision rule shared by codes and terms: more source rows wins, then the
  // smaller CUI. Total, so the result is independent of row order.
  auto better = [&](const std::string& candidate, const std::string& incumbent) {
    const auto a = row_count.at(candidate), b = row_count.at(incumbent);
    return a != b ? a > b : candidate < incumbent;
  };

  std::map<std::string, std::string, std::less<>> first_term;
  for (const auto& r : rows) {
    if (r.preferred && !t.names_.contains(r.cui)) t.names_.emplace(r.cui, r.term);
    auto [it, fresh] = first_term.try_emplace(r.cui, r.term);
    if (!fresh && r.term < it->second) it->second = r.term;

    if (!r.sab.empty() && !r.code.empty()) {
      auto [ci, inserted] = t.codes_.try_emplace({r.sab, r.code}, r.cui);
      if (!inserted && better(r.cui, ci->second)) ci->second = r.cui;
    }
    if (!r.term.empty()) {
      auto [ti, inserted] = t.terms_.try_emplace(to_lower_ascii(r.term), r.cui);
      if (!inserted && better(r.cui, ti->second)) ti->second = r.cui;
    }
  }
  for (const auto& [cui, term] : first_term) t.names_.try_emplace(cui, term);

  const auto& known = resources::semantic_type_names();
  for_each_row(sty_text, [&](const std::vector<std::string_view>& cols, std::size_t line) {
    if (cols.size() != 2) {
      ++st.sty_skipped;
      problem("sty", line, "expected 2 columns, got " + std::to_string(cols.size()));
      return;
    }
    const std::string cui(trim(cols[0]));
    if (!is_cui(cui)) {
      ++st.sty_skipped;
      problem("sty", line, "malformed CUI '" + cui + "'");
      return;
    }
    std::string type(trim(cols[1]));
    if (auto by_tui = resources::semantic_type_for_tui(type); !by_tui.empty()) type = by_tui;
    if (!known.contains(type)) {
      ++st.sty_unknown_type;
      problem("sty", line, "unknown semantic type '" + type + "'");
      return;
    }
    if (!t.names_.contains(cui)) {
      ++st.sty_orphan;
      problem("sty", line, "CUI " + cui + " has no conso rows");
      return;
    }
    ++st.sty_rows;
    t.types_[cui].insert(std::move(type));
  });
  return t;
}

std::optional<std::string_view> MappingTable::lookup(std::string_view vocab, std::string_view code) const {
  auto it = codes_.find(std::pair{normalize_vocab(vocab), normalize_code(vocab, code)});
  if (it == codes_.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::string_view MappingTable::preferred_name(std::string_view cui) const {
  auto it = names_.find(cui);
  return it == names_.end() ? std::string_view{} : std::string_view(it->second);
}

const std::set<std::string>& MappingTable::semantic_types(std::string_view cui) const {
  static const std::set<std::string> empty;
  auto it = types_.find(cui);
  return it == types_.end() ? empty : it->second;
}

nlohmann::ordered_json to_json(const UnmappedEntry& e) {
  nlohmann::ordered_json j;
  j["record"] = to_json(e.record);
  auto& list = j["unmapped_endpoints"] = nlohmann::ordered_json::array();
  for (const auto& ep : e.endpoints) list.push_back(to_json(ep));
  j["reason"] = e.reason;
  return j;
}

Resolution resolve_relations(std::span<const RelationRecord> records, const MappingTable& table) {
  Resolution out;
  auto resolve = [&](const Endpoint& e) -> std::optional<NodeRef> {
    const auto v = MappingTable::normalize_vocab(e.vocab);
    NodeRef n;
    if (v == vocab::kPmid) {
      if (!is_pmid(e.code)) return std::nullopt;
      n.kind = NodeKind::Article;
      n.id = e.code;
      n.name = e.label;
      return n;
    }
    n.kind = NodeKind::Concept;
    if (v == vocab::kUmls) {
      if (!is_cui(e.code)) return std::nullopt;
      n.id = e.code;
      n.origin_vocab = e.origin_vocab.empty() ? std::string(vocab::kUmls) : e.origin_vocab;
    } else {
      auto cui = table.lookup(v, e.code);
      if (!cui) return std::nullopt;
      n.id = std::string(*cui);
      n.origin_vocab = v;
    }
    const auto name = table.preferred_name(n.id);
    n.name = name.empty() ? e.label : std::string(name);
    n.semantic_types = table.semantic_types(n.id);
    return n;
  };

  for (const auto& r : records) {
    auto s = resolve(r.subject);
    auto o = resolve(r.object);
    if (!s || !o) {
      UnmappedEntry entry{r, {}, "no UMLS mapping"};
      if (!s) entry.endpoints.push_back(r.subject);
      if (!o) entry.endpoints.push_back(r.object);
      out.unmapped.push_back(std::move(entry));
      continue;
    }
    if (s->kind == NodeKind::Concept && o->kind == NodeKind::Concept && s->id == o->id) {
      out.unmapped.push_back(UnmappedEntry{r, {}, "both endpoints resolve to " + s->id});
      continue;
    }
    out.relations.push_back(IntegratedRelation{std::move(*s), r.predicate, std::move(*o), r.source, r.attributes});
  }
  return out;
}

}  // namespace odg::integration

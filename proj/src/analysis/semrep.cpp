#include "odg/analysis/semrep.hpp"

#include <charconv>

#include "odg/error.hpp"
#include "odg/resources.hpp"

namespace odg::analysis {

namespace {

std::size_t field_index(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_unsigned())
    throw ParseError("semrep column map: '" + where + key + "' must be a non-negative integer");
  return it->get<std::size_t>();
}

const json& section(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_object()) throw ParseError(std::string("semrep column map: '") + key + "' must be an object");
  return *it;
}

std::optional<std::size_t> to_index(std::string_view s) {
  s = trim(s);
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

struct Malformed {
  std::string reason;
};

}  // namespace

const SemRepColumns& SemRepColumns::defaults() {
  static const SemRepColumns cols = from_json(json::parse(resources::data_file("semrep_columns.json")));
  return cols;
}

SemRepColumns SemRepColumns::from_json(const json& j) {
  if (!j.is_object()) throw ParseError("semrep column map must be a JSON object");
  SemRepColumns c;
  if (auto d = j.find("delimiter"); d != j.end()) {
    if (!d->is_string() || d->get<std::string>().size() != 1)
      throw ParseError("semrep column map: 'delimiter' must be a one-character string");
    c.delimiter = d->get<std::string>()[0];
  }
  c.record_type = field_index(j, "record_type", "");
  c.pmid = field_index(j, "pmid", "");
  c.sentence_index = field_index(j, "sentence_index", "");
  const auto& e = section(j, "entity");
  c.entity.min_fields = field_index(e, "min_fields", "entity.");
  c.entity.cui = field_index(e, "cui", "entity.");
  c.entity.name = field_index(e, "name", "entity.");
  c.entity.semtypes = field_index(e, "semtypes", "entity.");
  c.entity.text = field_index(e, "text", "entity.");
  c.entity.start = field_index(e, "start", "entity.");
  c.entity.end = field_index(e, "end", "entity.");
  const auto& r = section(j, "relation");
  c.relation.min_fields = field_index(r, "min_fields", "relation.");
  c.relation.subject_cui = field_index(r, "subject_cui", "relation.");
  c.relation.subject_name = field_index(r, "subject_name", "relation.");
  c.relation.subject_semtype = field_index(r, "subject_semtype", "relation.");
  c.relation.indicator = field_index(r, "indicator", "relation.");
  c.relation.predicate = field_index(r, "predicate", "relation.");
  c.relation.negation = field_index(r, "negation", "relation.");
  c.relation.object_cui = field_index(r, "object_cui", "relation.");
  c.relation.object_name = field_index(r, "object_name", "relation.");
  c.relation.object_semtype = field_index(r, "object_semtype", "relation.");
  return c;
}

SemRepOutput ingest_semrep_output(std::string_view text,
                                  const std::optional<std::set<std::string, std::less<>>>& allowlist,
                                  const SemRepColumns& cols) {
  SemRepOutput out;
  auto& stats = out.stats;
  const auto& labels = resources::relation_labels();
  constexpr std::size_t kMaxProblems = 20;

  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    ++stats.total_lines;
    const auto f = split(line, cols.delimiter);
    auto at = [&](std::size_t i) { return i < f.size() ? trim(f[i]) : std::string_view{}; };

    try {
      const auto header_width = std::max({cols.record_type, cols.pmid, cols.sentence_index}) + 1;
      if (f.size() < header_width) throw Malformed{"too few fields"};
      const auto type = to_lower_ascii(at(cols.record_type));
      if (type != "entity" && type != "relation") {
        ++stats.other_records;
        continue;
      }
      const std::string pmid(at(cols.pmid));
      if (!is_pmid(pmid)) throw Malformed{"bad pmid '" + pmid + "'"};
      const auto sentence = to_index(at(cols.sentence_index));
      if (!sentence) throw Malformed{"bad sentence index"};

      if (type == "entity") {
        const auto& e = cols.entity;
        if (f.size() < e.min_fields) throw Malformed{"entity record has too few fields"};
        const std::string cui(at(e.cui));
        if (!is_cui(cui)) throw Malformed{"bad entity CUI '" + cui + "'"};
        const auto start = to_index(at(e.start));
        const auto end = to_index(at(e.end));
        if (!start || !end || *end < *start) throw Malformed{"bad entity span"};
        if (allowlist && !allowlist->contains(pmid)) {
          ++stats.dropped;
          continue;
        }
        auto matched = std::string(at(e.text));
        if (matched.empty()) matched = std::string(at(e.name));
        out.mentions.push_back(ConceptMention{cui, std::move(matched), pmid, *sentence, Span{*start, *end}});
      } else {
        const auto& r = cols.relation;
        if (f.size() < r.min_fields) throw Malformed{"relation record has too few fields"};
        Predication p;
        p.subject_cui = at(r.subject_cui);
        p.object_cui = at(r.object_cui);
        if (!is_cui(p.subject_cui)) throw Malformed{"bad subject CUI '" + p.subject_cui + "'"};
        if (!is_cui(p.object_cui)) throw Malformed{"bad object CUI '" + p.object_cui + "'"};
        if (p.subject_cui == p.object_cui) throw Malformed{"reflexive predication"};
        auto label = to_upper_ascii(at(r.predicate));
        if (label.starts_with("NEG_")) {
          p.negated = true;
          label.erase(0, 4);
        }
        if (!labels.contains(label)) throw Malformed{"unknown predicate '" + label + "'"};
        if (!at(r.negation).empty()) p.negated = true;
        if (allowlist && !allowlist->contains(pmid)) {
          ++stats.dropped;
          continue;
        }
        p.predicate = std::move(label);
        p.subject_name = at(r.subject_name);
        p.object_name = at(r.object_name);
        p.pmid = pmid;
        p.sentence_index = *sentence;
        out.predications.push_back(std::move(p));
      }
      ++stats.parsed;
    } catch (const Malformed& m) {
      ++stats.malformed;
      if (stats.problems.size() < kMaxProblems)
        stats.problems.push_back("line " + std::to_string(line_no) + ": " + m.reason);
    }
  }
  if (stats.parsed == 0) out.warnings.push_back("no valid entity or relation records found");
  if (stats.malformed > 0) out.warnings.push_back(std::to_string(stats.malformed) + " malformed line(s) skipped");
  return out;
}

}  // namespace odg::analysis

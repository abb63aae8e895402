#include "odg/pipeline/config.hpp"

#include "odg/error.hpp"

namespace odg::pipeline {

namespace fs = std::filesystem;

std::string_view to_string(StructuredFormat f) {
  switch (f) {
    case StructuredFormat::Obo: return "obo";
    case StructuredFormat::MeshXml: return "mesh-xml";
    case StructuredFormat::DrugBank: return "drugbank";
  }
  return "obo";
}

StructuredFormat parse_structured_format(std::string_view text) {
  if (text == "obo") return StructuredFormat::Obo;
  if (text == "mesh-xml" || text == "mesh") return StructuredFormat::MeshXml;
  if (text == "drugbank") return StructuredFormat::DrugBank;
  throw ValidationError("unknown structured format '" + std::string(text) + "' (expected obo, mesh-xml or drugbank)");
}

namespace {

class Reader {
 public:
  Reader(const json& j, fs::path base) : j_(j), base_(std::move(base)) {}

  template <typename T>
  std::optional<T> get(const json& obj, const std::string& key, const std::string& where) const {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    try {
      return it->get<T>();
    } catch (const json::exception&) {
      throw ValidationError("config: '" + where + key + "' has the wrong type");
    }
  }

  fs::path resolve(const std::string& p) const {
    fs::path path(p);
    return path.is_absolute() ? path : (base_ / path).lexically_normal();
  }

  std::optional<Date> date(const json& obj, const std::string& key) const {
    auto s = get<std::string>(obj, key, "");
    if (!s) return std::nullopt;
    auto d = Date::parse(*s);
    if (!d) throw ValidationError("config: '" + key + "' is not a date: '" + *s + "'");
    return d;
  }

  const json& root() const { return j_; }

 private:
  const json& j_;
  fs::path base_;
};

}  // namespace

PipelineConfig parse_pipeline_config(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ValidationError("config: top level must be a JSON object");
  Reader r(j, base_dir);
  PipelineConfig c;

  const json empty = json::object();
  const auto& disease = j.contains("disease") ? j.at("disease") : empty;
  c.mesh_descriptor = r.get<std::string>(disease, "mesh_descriptor", "disease.").value_or("");
  c.mesh_ui = r.get<std::string>(disease, "mesh_ui", "disease.").value_or("");
  const auto& endpoints = j.contains("endpoints") ? j.at("endpoints") : empty;
  if (auto url = r.get<std::string>(endpoints, "entrez_base_url", "endpoints.")) c.entrez_base_url = *url;

  if (auto cap = r.get<long long>(j, "fulltext_cap", "")) {
    if (*cap < 0) throw ValidationError("config: 'fulltext_cap' must be >= 0");
    c.fulltext_cap = static_cast<std::size_t>(*cap);
  }
  if (auto rate = r.get<double>(j, "rate_limit", "")) c.rate_limit = *rate;
  if (auto workers = r.get<std::size_t>(j, "fetch_workers", "")) c.fetch_workers = *workers;
  auto key = r.get<std::string>(j, "api_key", "");
  auto email = r.get<std::string>(j, "email", "");
  if (key || email) c.api_credentials = harvest::ApiCredentials{key.value_or(""), email.value_or("")};

  const auto& res = j.contains("resources") ? j.at("resources") : empty;
  auto add_sources = [&](const char* name, StructuredFormat format) {
    auto it = res.find(name);
    if (it == res.end()) return;
    if (!it->is_array()) throw ValidationError(std::string("config: 'resources.") + name + "' must be an array");
    for (const auto& item : *it) {
      StructuredSource s;
      s.format = format;
      if (item.is_string()) {
        s.path = r.resolve(item.get<std::string>());
        s.source = s.path.stem().string();
      } else {
        auto path = r.get<std::string>(item, "path", std::string("resources.") + name + "[].");
        if (!path) throw ValidationError(std::string("config: 'resources.") + name + "' entry lacks 'path'");
        s.path = r.resolve(*path);
        s.source = r.get<std::string>(item, "source", "").value_or(s.path.stem().string());
      }
      c.structured.push_back(std::move(s));
    }
  };
  add_sources("obo", StructuredFormat::Obo);
  add_sources("mesh_xml", StructuredFormat::MeshXml);
  add_sources("drugbank", StructuredFormat::DrugBank);
  if (auto p = r.get<std::string>(res, "conso", "resources.")) c.conso = r.resolve(*p);
  if (auto p = r.get<std::string>(res, "sty", "resources.")) c.sty = r.resolve(*p);
  if (auto list = r.get<std::vector<std::string>>(res, "semrep", "resources."))
    for (const auto& p : *list) c.semrep.push_back(r.resolve(p));
  if (auto p = r.get<std::string>(res, "semrep_columns", "resources.")) c.semrep_columns = r.resolve(*p);
  if (auto t = r.get<bool>(j, "dictionary_tagger", "")) c.dictionary_tagger = *t;

  c.output_dir = r.resolve(r.get<std::string>(j, "output_dir", "").value_or("odg-out"));
  c.last_update_date = r.date(j, "last_update_date");
  c.run_date = r.date(j, "run_date");
  return c;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ValidationError("config file not found: " + path.string());
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  auto c = parse_pipeline_config(j, fs::absolute(path).parent_path());
  c.config_path = fs::absolute(path);
  return c;
}

harvest::HarvestConfig PipelineConfig::harvest_config(std::optional<Date> date_floor) const {
  harvest::HarvestConfig h;
  h.disease_mesh_descriptor = mesh_descriptor;
  h.disease_mesh_ui = mesh_ui;
  h.date_floor = date_floor;
  h.fulltext_cap = fulltext_cap;
  h.rate_limit = rate_limit;
  h.api_credentials = api_credentials;
  h.base_url = entrez_base_url;
  h.fetch_workers = fetch_workers;
  return h;
}

void PipelineConfig::validate() const {
  std::vector<std::string> problems;
  try {
    harvest_config(last_update_date).validate();
  } catch (const ValidationError& e) {
    problems.emplace_back(e.what());
  }
  if (!entrez_base_url.starts_with("http://") && !entrez_base_url.starts_with("https://"))
    problems.push_back("endpoints.entrez_base_url must be an http(s) URL");
  auto must_exist = [&](const fs::path& p, const std::string& what) {
    if (p.empty()) problems.push_back(what + " path is not set");
    else if (!fs::is_regular_file(p)) problems.push_back(what + " not found: " + p.string());
  };
  must_exist(conso, "resources.conso");
  must_exist(sty, "resources.sty");
  for (const auto& s : structured) must_exist(s.path, "resources." + std::string(to_string(s.format)));
  for (const auto& s : semrep) must_exist(s, "resources.semrep");
  if (semrep_columns) must_exist(*semrep_columns, "resources.semrep_columns");
  if (output_dir.empty()) problems.push_back("output_dir is not set");
  if (problems.empty()) return;
  std::string msg = "invalid pipeline config:";
  for (const auto& p : problems) msg += "\n  - " + p;
  throw ValidationError(msg);
}

std::string PipelineConfig::hash() const {
  nlohmann::ordered_json j;
  j["mesh_descriptor"] = mesh_descriptor;
  j["mesh_ui"] = mesh_ui;
  j["fulltext_cap"] = fulltext_cap;
  auto& s = j["structured"] = nlohmann::ordered_json::array();
  for (const auto& src : structured)
    s.push_back({{"format", std::string(to_string(src.format))}, {"file", src.path.filename().string()}, {"source", src.source}});
  j["conso"] = conso.filename().string();
  j["sty"] = sty.filename().string();
  auto& sr = j["semrep"] = nlohmann::ordered_json::array();
  for (const auto& p : semrep) sr.push_back(p.filename().string());
  j["dictionary_tagger"] = dictionary_tagger;
  return sha256_hex(j.dump());
}

void store_last_update_date(const fs::path& config_path, const Date& date) {
  auto j = nlohmann::ordered_json::parse(read_file(config_path));
  j["last_update_date"] = date.entrez();
  write_file_atomic(config_path, j.dump(2) + "\n");
}

}  // namespace odg::pipeline

#ifndef ODG_PIPELINE_CONFIG_HPP
#define ODG_PIPELINE_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "odg/harvest/entrez.hpp"

namespace odg::pipeline {

enum class StructuredFormat { Obo, MeshXml, DrugBank };

std::string_view to_string(StructuredFormat f);
/// "obo", "mesh-xml" or "drugbank"; throws ValidationError otherwise.
StructuredFormat parse_structured_format(std::string_view text);

struct StructuredSource {
  StructuredFormat format = StructuredFormat::Obo;
  std::filesystem::path path;
  std::string source;  // provenance name, e.g. "GO" or "DrugBank"
};

/// One disease, one graph. Loaded from a JSON file; relative paths are
/// resolved against the file's directory.
struct PipelineConfig {
  std::filesystem::path config_path;  // empty when built in code

  std::string mesh_descriptor;
  std::string mesh_ui;
  std::string entrez_base_url = std::string(harvest::kDefaultEntrezBaseUrl);
  std::size_t fulltext_cap = 10000;
  double rate_limit = 3.0;
  std::optional<harvest::ApiCredentials> api_credentials;
  std::size_t fetch_workers = 1;

  std::vector<StructuredSource> structured;
  std::filesystem::path conso;
  std::filesystem::path sty;
  std::vector<std::filesystem::path> semrep;
  std::optional<std::filesystem::path> semrep_columns;
  bool dictionary_tagger = true;

  std::filesystem::path output_dir;
  std::optional<Date> last_update_date;
  /// Logical date stamped on provenance and snapshots. Defaults to today
  /// (UTC); fix it for reproducible output.
  std::optional<Date> run_date;

  /// Every problem found, in one ValidationError. Touches only the local
  /// file system.
  void validate() const;

  harvest::HarvestConfig harvest_config(std::optional<Date> date_floor) const;
  Date effective_run_date() const { return run_date.value_or(Date::today_utc()); }
  /// SHA-256 of the canonical JSON form, excluding last_update_date and
  /// run_date so that an update does not change it.
  std::string hash() const;
};

/// Throws ValidationError for unreadable files, bad JSON, or wrong types.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
PipelineConfig parse_pipeline_config(const json& j, const std::filesystem::path& base_dir);

/// Rewrites last_update_date in the config file, keeping all other keys.
void store_last_update_date(const std::filesystem::path& config_path, const Date& date);

}  // namespace odg::pipeline

#endif

#ifndef ODG_PIPELINE_PIPELINE_HPP
#define ODG_PIPELINE_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "odg/analysis/relations.hpp"
#include "odg/graph/graph.hpp"
#include "odg/harvest/entrez.hpp"
#include "odg/integration/mapping.hpp"
#include "odg/pipeline/config.hpp"

namespace odg::pipeline {

inline constexpr std::string_view kToolName = "odg";
inline constexpr std::string_view kToolVersion = "0.1.0";

// File names inside the output directory.
inline constexpr const char* kArticlesFile = "articles.jsonl";
inline constexpr const char* kHarvestSkipsFile = "harvest.skipped.jsonl";
inline constexpr const char* kStructuredFile = "structured.relations.jsonl";
inline constexpr const char* kLiteratureFile = "literature.relations.jsonl";
inline constexpr const char* kIntegratedFile = "integrated.relations.jsonl";
inline constexpr const char* kUnmappedFile = "unmapped.jsonl";
inline constexpr const char* kGraphDir = "graph";
inline constexpr const char* kRunManifestFile = "run-manifest.json";

enum class StageStatus { Ok, Failed, NotRun };

struct StageRecord {
  std::string name;
  StageStatus status = StageStatus::NotRun;
  double duration_ms = 0;
  std::map<std::string, std::string> inputs;   // file -> sha256
  std::map<std::string, std::string> outputs;  // file -> sha256
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> warnings;
  std::string error;
};

struct RunManifest {
  std::string mode;  // "full" or "update"
  std::string config_hash;
  std::string run_date;
  std::optional<std::string> date_floor;
  std::vector<StageRecord> stages;
  std::optional<graph::MergeStats> structured_merge;  // update only
  std::optional<graph::MergeStats> literature_merge;  // update only
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::string graph_content_hash;

  bool ok() const;
  /// First failed stage name, empty if none.
  std::string failed_stage() const;
  nlohmann::ordered_json to_json() const;
};

/// Hooks for tests and ad-hoc runs.
struct RunOptions {
  /// Used instead of an HTTP transport to the configured base URL.
  harvest::Transport* transport = nullptr;
  harvest::RetryPolicy retry;
  harvest::SleepFn sleep;
};

/// Relations from one structured resource file.
std::vector<RelationRecord> harvest_structured(const StructuredSource& source);

/// Validates, then runs harvest -> structured -> analyze -> integrate ->
/// build, persisting each stage's output under config.output_dir before the
/// next starts. Throws ValidationError before any network traffic. A stage
/// failure stops the run; the returned manifest (also written to
/// <output_dir>/run-manifest.json) marks the failed stage. On success the
/// run date is stored as last_update_date when the config came from a file.
RunManifest run_full(const PipelineConfig& config, const RunOptions& options = {});

/// Incremental run against an existing graph in <output_dir>/graph:
/// harvests articles entered on or after last_update_date, re-merges the
/// structured resources, and on success stores the run date as the new
/// last_update_date in the config file. Throws ValidationError when
/// last_update_date is unset or no graph exists yet.
RunManifest run_update(const PipelineConfig& config, const RunOptions& options = {});

}  // namespace odg::pipeline

#endif

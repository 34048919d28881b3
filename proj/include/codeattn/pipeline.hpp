#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codeattn/attention.hpp"
#include "codeattn/corpus.hpp"
#include "codeattn/gaze.hpp"
#include "codeattn/pathctx.hpp"
#include "codeattn/rocauc.hpp"
#include "codeattn/spatial_map.hpp"
#include "codeattn/syntax.hpp"

namespace codeattn {

const char* version();

/// Everything one run needs. Relative paths in a config file resolve against
/// that file's directory.
struct RunConfig {
  LayoutConfig layout;
  ExtractionLimits limits;
  std::string attention_source = "uniform";  // "uniform" or a file path
  int downsample = 1;
  std::optional<TimeRange> t_range;
  std::filesystem::path output_dir = "out";
  SelectionConfig selection;

  bool uniform() const { return attention_source == "uniform"; }
  /// Throws Error{Config}.
  void validate() const;
};

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& file);

/// Sorted-key JSON; the digest is computed over exactly this text.
std::string to_json_text(const RunConfig& cfg);
/// Hex SHA-256 of to_json_text(cfg).
std::string config_digest(const RunConfig& cfg);

/// `begin:end` in seconds. Throws Error{Config}.
TimeRange parse_time_range(std::string_view text);

struct MapRun {
  SyntaxTree tree;
  std::vector<PathContext> contexts;
  std::size_t attention_records = 0;
  NodeAttention attention;
  std::vector<TokenGeometry> geometry;
  ScalarField field;
  std::vector<std::string> warnings;
};

/// parse -> extract -> bind -> aggregate -> layout -> field. `attention`
/// absent means uniform weights over the extracted contexts.
MapRun run_map(const SourceSnippet& snippet, const RunConfig& cfg,
               std::optional<std::vector<PathAttention>> attention);

/// Resolves `cfg.attention_source` and reads the Java file.
MapRun run_map_file(const std::filesystem::path& java_file, const RunConfig& cfg);

std::string map_diagnostics_json(const MapRun& run, const RunConfig& cfg);

struct MapFiles {
  std::filesystem::path csv, pgm, diagnostics;
};
MapFiles write_map_outputs(const MapRun& run, const RunConfig& cfg, const std::string& stem);

/// The map's grid fixes the downsample factor; it must tile the clip side.
EvalReport run_eval(const ScalarField& field, const GazeLoad& gaze, const RunConfig& cfg,
                    std::string snippet_id);

std::string report_json(const EvalReport& report, const RunConfig& cfg);

struct EvalFiles {
  std::filesystem::path report, roc;
};
EvalFiles write_eval_outputs(const EvalReport& report, const RunConfig& cfg, const std::string& stem);

/// Reads and normalizes every manifest entry, then scores and selects.
std::vector<SnippetStats> run_corpus(std::span<const ManifestEntry> entries, const SelectionConfig& selection);

/// `{label: [selected ids...]}` in label order.
std::string selection_json(std::span<const SnippetStats> stats, const RunConfig& cfg);

}  // namespace codeattn

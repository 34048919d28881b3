#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace codeattn {

struct SourceSnippet;

/// Replaces every tab with two spaces.
std::string normalize_indent(std::string_view text);

/// How per-line code-point counts collapse into one CPL figure.
enum class CplStatistic { Mean, Median, Max };

/// "mean", "median" or "max". Throws Error{Config}.
CplStatistic parse_cpl_statistic(std::string_view name);
const char* to_string(CplStatistic stat);

struct SnippetStats {
  std::string id;
  std::string label;
  int loc = 0;
  double cpl_mean = 0.0;  // holds whichever CplStatistic was requested
  double deviation = 0.0;
  bool selected = false;
};

/// LOC counts every line, blank ones included; CPL summarizes the code-point
/// count per line without the line terminator.
SnippetStats compute_stats(const SourceSnippet& snippet, std::string label = {},
                           CplStatistic stat = CplStatistic::Mean);

struct SelectionConfig {
  int default_k = 6;
  CplStatistic cpl = CplStatistic::Mean;
  std::map<std::string, int, std::less<>> per_label;

  int k_for(std::string_view label) const;
};

/// Scores every snippet by sqrt(z_loc^2 + z_cpl^2) over the whole corpus
/// (population statistics; a zero spread contributes 0) and marks the k
/// lowest-scoring snippets of each label, ties by id. Returns all stats sorted
/// by (label, deviation, id). Throws Error{InsufficientSnippets}.
std::vector<SnippetStats> select_snippets(std::vector<SnippetStats> stats,
                                          const SelectionConfig& config);

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;
  std::string label;
};

/// JSON list of {id, path, label}; relative paths resolve against the
/// manifest's directory.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& file);

/// `id,label,loc,cpl_mean,deviation,selected`
std::string stats_to_csv(std::span<const SnippetStats> stats);

}  // namespace codeattn

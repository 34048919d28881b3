#include "codeattn/pipeline.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <nlohmann/json.hpp>

#include "codeattn/error.hpp"
#include "codeattn/io.hpp"
#include "text_util.hpp"

#ifndef CODEATTN_VERSION
#define CODEATTN_VERSION "0.0.0"
#endif

namespace codeattn {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, "config: " + msg); }

template <class T>
T field_as(const json& obj, const char* key, T fallback) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    config_error(std::string("field '") + key + "' has the wrong type");
  }
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      config_error("unknown field '" + key + "' in " + where);
    }
  }
}

json layout_json(const LayoutConfig& layout) { return json::parse(to_json_text(layout)); }

json stats_json(const GazeStats& s) {
  return {{"total", s.total},
          {"retained", s.retained},
          {"out_of_bounds", s.out_of_bounds},
          {"lost", s.lost},
          {"non_monotonic", s.non_monotonic},
          {"removed_fraction", s.removed_fraction}};
}

json provenance(const RunConfig& cfg) {
  return {{"tool", "codeattn"}, {"version", version()}, {"config_digest", config_digest(cfg)}};
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name) { return cfg.output_dir / name; }

}  // namespace

const char* version() { return CODEATTN_VERSION; }

void RunConfig::validate() const {
  layout.validate();
  limits.validate();
  if (downsample < 1 || layout.clip.side % downsample != 0) {
    throw Error(ErrorKind::Config, "config: downsample " + std::to_string(downsample) +
                                       " must divide the clip side " + std::to_string(layout.clip.side));
  }
  if (t_range && !(t_range->begin < t_range->end)) config_error("t_range must satisfy begin < end");
  if (selection.default_k < 0) config_error("selection.default_k must be >= 0");
  for (const auto& [label, k] : selection.per_label) {
    if (k < 0) config_error("selection k for '" + label + "' must be >= 0");
  }
  if (attention_source.empty()) config_error("attention must be \"uniform\" or a file path");
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("top level must be an object");
  reject_unknown(doc, {"layout", "limits", "attention", "downsample", "t_range", "output_dir", "selection"},
                 "config");

  RunConfig cfg;
  if (const auto it = doc.find("layout"); it != doc.end()) cfg.layout = parse_layout_config(it->dump());
  if (const auto it = doc.find("limits"); it != doc.end()) {
    if (!it->is_object()) config_error("'limits' must be an object");
    reject_unknown(*it, {"max_length", "max_width", "max_contexts"}, "limits");
    cfg.limits.max_length = field_as(*it, "max_length", cfg.limits.max_length);
    cfg.limits.max_width = field_as(*it, "max_width", cfg.limits.max_width);
    cfg.limits.max_contexts = field_as(*it, "max_contexts", cfg.limits.max_contexts);
  }
  cfg.attention_source = field_as(doc, "attention", cfg.attention_source);
  if (!cfg.uniform() && std::filesystem::path(cfg.attention_source).is_relative() && !base_dir.empty()) {
    cfg.attention_source = (base_dir / cfg.attention_source).string();
  }
  cfg.downsample = field_as(doc, "downsample", cfg.downsample);
  if (const auto it = doc.find("t_range"); it != doc.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
      config_error("'t_range' must be [begin, end]");
    }
    cfg.t_range = TimeRange{(*it)[0].get<double>(), (*it)[1].get<double>()};
  }
  const std::filesystem::path out = field_as(doc, "output_dir", cfg.output_dir.string());
  cfg.output_dir = out.is_relative() && !base_dir.empty() ? base_dir / out : out;
  if (const auto it = doc.find("selection"); it != doc.end()) {
    if (!it->is_object()) config_error("'selection' must be an object");
    reject_unknown(*it, {"default_k", "per_label", "cpl_statistic"}, "selection");
    cfg.selection.default_k = field_as(*it, "default_k", cfg.selection.default_k);
    cfg.selection.cpl = parse_cpl_statistic(field_as(*it, "cpl_statistic", std::string("mean")));
    if (const auto labels = it->find("per_label"); labels != it->end()) {
      if (!labels->is_object()) config_error("'selection.per_label' must be an object");
      for (const auto& [label, k] : labels->items()) {
        if (!k.is_number_integer()) config_error("selection k for '" + label + "' must be an integer");
        cfg.selection.per_label[label] = k.get<int>();
      }
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& file) {
  return parse_run_config(read_text_file(file), file.parent_path());
}

std::string to_json_text(const RunConfig& cfg) {
  json doc = {
      {"layout", layout_json(cfg.layout)},
      {"limits",
       {{"max_length", cfg.limits.max_length},
        {"max_width", cfg.limits.max_width},
        {"max_contexts", cfg.limits.max_contexts}}},
      {"attention", cfg.attention_source},
      {"downsample", cfg.downsample},
      {"t_range", cfg.t_range ? json::array({cfg.t_range->begin, cfg.t_range->end}) : json(nullptr)},
      {"output_dir", cfg.output_dir.string()},
      {"selection",
       {{"default_k", cfg.selection.default_k},
        {"per_label", cfg.selection.per_label},
        {"cpl_statistic", to_string(cfg.selection.cpl)}}},
  };
  return doc.dump();
}

std::string config_digest(const RunConfig& cfg) {
  const std::string text = to_json_text(cfg);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Config, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 0xF];
  }
  return hex;
}

TimeRange parse_time_range(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) config_error("time range must look like BEGIN:END");
  const auto begin = text::parse_double(text::trim(s.substr(0, colon)));
  const auto end = text::parse_double(text::trim(s.substr(colon + 1)));
  if (!begin || !end || !std::isfinite(*begin) || !std::isfinite(*end) || !(*begin < *end)) {
    config_error("time range must be two finite numbers with BEGIN < END");
  }
  return {*begin, *end};
}

MapRun run_map(const SourceSnippet& snippet, const RunConfig& cfg,
               std::optional<std::vector<PathAttention>> attention) {
  cfg.validate();
  MapRun run;
  run.tree = parse_source(snippet);
  run.contexts = extract_path_contexts(run.tree, cfg.limits);
  std::vector<PathAttention> records;
  if (attention) {
    records = std::move(*attention);
    if (records.empty()) run.warnings.emplace_back("attention file holds no records; the map is all zero");
  } else if (!run.contexts.empty()) {
    records = uniform_attention(run.tree, run.contexts);
  } else {
    run.warnings.emplace_back("snippet yields no path contexts; the map is all zero");
  }
  run.attention_records = records.size();
  run.attention = aggregate_node_attention(run.tree, run.contexts, records);
  if (run.attention.unmatched_contexts > 0 && !records.empty()) {
    run.warnings.push_back(std::to_string(run.attention.unmatched_contexts) + " of " +
                           std::to_string(run.contexts.size()) + " contexts have no attention record");
  }
  run.geometry = layout_tokens(run.tree, cfg.layout);
  run.field = generate_attention_map(run.geometry, run.attention, cfg.layout, cfg.downsample);
  return run;
}

MapRun run_map_file(const std::filesystem::path& java_file, const RunConfig& cfg) {
  SourceSnippet snippet = make_snippet(java_file.stem().string(), read_text_file(java_file));
  std::optional<std::vector<PathAttention>> attention;
  if (!cfg.uniform()) attention = load_attention(cfg.attention_source);
  return run_map(snippet, cfg, std::move(attention));
}

std::string map_diagnostics_json(const MapRun& run, const RunConfig& cfg) {
  json doc = provenance(cfg);
  doc["snippet_id"] = run.tree.snippet().id;
  doc["nodes"] = run.tree.size();
  doc["tokens"] = run.tree.tokens().size();
  doc["contexts"] = run.contexts.size();
  doc["attention_records"] = run.attention_records;
  doc["matched_contexts"] = run.attention.matched_contexts;
  doc["unmatched_contexts"] = run.attention.unmatched_contexts;
  doc["node_mass_total"] = run.attention.total_mass();
  doc["expected_mass"] = run.attention.expected_mass;
  doc["untokened_mass"] = untokened_mass(run.tree, run.attention);
  doc["field_width"] = run.field.width;
  doc["field_height"] = run.field.height;
  doc["field_max"] = field_max(run.field);
  doc["downsample"] = cfg.downsample;
  doc["warnings"] = run.warnings;
  return doc.dump(2) + "\n";
}

MapFiles write_map_outputs(const MapRun& run, const RunConfig& cfg, const std::string& stem) {
  MapFiles files{output_path(cfg, stem + ".csv"), output_path(cfg, stem + ".pgm"),
                 output_path(cfg, stem + ".diagnostics.json")};
  write_file_atomic(files.csv, field_to_csv(run.field));
  write_file_atomic(files.pgm, field_to_pgm(run.field));
  write_file_atomic(files.diagnostics, map_diagnostics_json(run, cfg));
  return files;
}

EvalReport run_eval(const ScalarField& field, const GazeLoad& gaze, const RunConfig& cfg, std::string snippet_id) {
  const int side = cfg.layout.clip.side;
  if (field.width != field.height || field.width < 1 || side % field.width != 0) {
    throw Error(ErrorKind::Config, "map grid " + std::to_string(field.width) + "x" + std::to_string(field.height) +
                                       " does not tile the clip side " + std::to_string(side));
  }
  const GazeHistogram hist = gaze_histogram(gaze.retained, side, side / field.width, gaze.stats.removed_fraction);
  return evaluate(field, hist, gaze.stats, std::move(snippet_id));
}

std::string report_json(const EvalReport& report, const RunConfig& cfg) {
  json doc = provenance(cfg);
  doc["snippet_id"] = report.snippet_id;
  doc["auc"] = report.auc;
  doc["n_thresholds"] = report.roc.n_thresholds;
  doc["roc_points"] = report.roc.points.size();
  doc["gaze_stats"] = stats_json(report.gaze_stats);
  return doc.dump(2) + "\n";
}

EvalFiles write_eval_outputs(const EvalReport& report, const RunConfig& cfg, const std::string& stem) {
  EvalFiles files{output_path(cfg, stem + ".report.json"), output_path(cfg, stem + ".roc.csv")};
  write_file_atomic(files.report, report_json(report, cfg));
  write_file_atomic(files.roc, roc_to_csv(report.roc.points));
  return files;
}

std::vector<SnippetStats> run_corpus(std::span<const ManifestEntry> entries, const SelectionConfig& selection) {
  std::vector<SnippetStats> stats;
  stats.reserve(entries.size());
  for (const auto& e : entries) {
    stats.push_back(compute_stats(make_snippet(e.id, read_text_file(e.path)), e.label, selection.cpl));
  }
  return select_snippets(std::move(stats), selection);
}

std::string selection_json(std::span<const SnippetStats> stats, const RunConfig& cfg) {
  json doc = provenance(cfg);
  json labels = json::object();
  std::size_t total = 0;
  for (const auto& s : stats) {
    if (!labels.contains(s.label)) labels[s.label] = json::array();
    if (s.selected) {
      labels[s.label].push_back(s.id);
      ++total;
    }
  }
  doc["selected"] = labels;
  doc["selected_total"] = total;
  return doc.dump(2) + "\n";
}

}  // namespace codeattn

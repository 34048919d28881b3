// codeattn: attention maps for Java snippets and their agreement with gaze.
//
// Exit codes: 0 ok, 1 usage or other failure, 2 parse/encoding error,
// 3 config error, 4 input format error, 5 degenerate or empty input, 6 I/O error.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "codeattn/error.hpp"
#include "codeattn/io.hpp"
#include "codeattn/pipeline.hpp"

namespace {

using namespace codeattn;

enum Exit : int { kOk = 0, kOther = 1, kParse = 2, kConfig = 3, kFormat = 4, kGaze = 5, kIo = 6 };

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse:
    case ErrorKind::Encoding:
      return kParse;
    case ErrorKind::Config:
    case ErrorKind::BadDownsample:
    case ErrorKind::LayoutOverflow:
    case ErrorKind::InsufficientSnippets:
      return kConfig;
    case ErrorKind::Format:
    case ErrorKind::Value:
      return kFormat;
    case ErrorKind::DegenerateGaze:
    case ErrorKind::EmptyInput:
      return kGaze;
    case ErrorKind::Io:
      return kIo;
    default:
      return kOther;
  }
}

struct Options {
  std::string config;
  std::optional<std::string> attention;
  bool uniform = false;
  std::optional<int> downsample;
  std::optional<std::string> t_range;
  std::optional<std::string> out;
};

RunConfig resolve(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (o.attention) cfg.attention_source = *o.attention;
  if (o.uniform) cfg.attention_source = "uniform";
  if (o.downsample) cfg.downsample = *o.downsample;
  if (o.t_range) cfg.t_range = parse_time_range(*o.t_range);
  if (o.out) cfg.output_dir = *o.out;
  cfg.validate();
  return cfg;
}

void warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial attention maps for Java source and ROC/AUC agreement with gaze"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "Output directory");

  std::string input, second;
  bool dump_ast_flag = false, dump_contexts_flag = false;
  std::optional<std::string> snippet_id;
  std::vector<std::string> k_overrides;
  std::optional<int> k_default;

  auto* contexts = app.add_subcommand("contexts", "Print canonical path contexts, one per line");
  contexts->add_option("java", input, "Java source file")->required()->check(CLI::ExistingFile);
  contexts->add_flag("--dump-ast", dump_ast_flag, "Print the syntax tree instead");

  auto* map = app.add_subcommand("map", "Render the attention map as CSV, PGM and diagnostics");
  map->add_option("java", input, "Java source file")->required()->check(CLI::ExistingFile);
  auto* attention_opt = map->add_option("--attention", o.attention, "Attention file (<context>\\t<value>)");
  map->add_flag("--uniform", o.uniform, "Weight every context 1/N")->excludes(attention_opt);
  map->add_option("--downsample", o.downsample, "Grid coarsening factor; must divide the clip side");
  map->add_flag("--dump-contexts", dump_contexts_flag, "Also print the canonical contexts to stdout");

  auto* eval = app.add_subcommand("eval", "Score a map against a gaze log");
  eval->add_option("map", input, "Map CSV written by `map`")->required()->check(CLI::ExistingFile);
  eval->add_option("gaze", second, "Gaze CSV (timestamp,x,y)")->required()->check(CLI::ExistingFile);
  eval->add_option("--t-range", o.t_range, "Keep samples with BEGIN <= t < END (seconds)");
  eval->add_option("--id", snippet_id, "Snippet id for the report (default: map file stem)");

  auto* corpus = app.add_subcommand("corpus", "Compute LOC/CPL statistics and select snippets");
  corpus->add_option("manifest", input, "JSON list of {id, path, label}")->required()->check(CLI::ExistingFile);
  corpus->add_option("--k", k_overrides, "Per-label count as LABEL=K (repeatable)");
  corpus->add_option("--k-default", k_default, "Count for labels without an override");
  std::optional<std::string> cpl_stat;
  corpus->add_option("--cpl", cpl_stat, "Per-line width statistic: mean, median or max");

  auto* normalize = app.add_subcommand("normalize", "Replace each tab with two spaces");
  normalize->add_option("file", input, "Text file")->required()->check(CLI::ExistingFile);
  std::optional<std::string> normalize_out;
  normalize->add_option("-o,--output", normalize_out, "Write here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (contexts->parsed()) {
      const RunConfig cfg = resolve(o);
      const SyntaxTree tree = parse_source(make_snippet(std::filesystem::path(input).stem().string(),
                                                        read_text_file(input)));
      std::cout << (dump_ast_flag ? dump_ast(tree) : dump_contexts(tree, extract_path_contexts(tree, cfg.limits)));
      return kOk;
    }
    if (map->parsed()) {
      const RunConfig cfg = resolve(o);
      const MapRun run = run_map_file(input, cfg);
      warn(run.warnings);
      if (dump_contexts_flag) std::cout << dump_contexts(run.tree, run.contexts);
      const MapFiles files = write_map_outputs(run, cfg, std::filesystem::path(input).stem().string());
      std::cerr << "wrote " << files.csv.string() << ", " << files.pgm.string() << ", "
                << files.diagnostics.string() << "\n";
      return kOk;
    }
    if (eval->parsed()) {
      const RunConfig cfg = resolve(o);
      const ScalarField field = read_field_csv(input);
      const GazeLoad gaze = load_gaze(second, cfg.layout, cfg.t_range);
      if (gaze.stats.non_monotonic > 0) {
        std::cerr << "warning: " << gaze.stats.non_monotonic << " timestamps go backwards\n";
      }
      const std::string id = snippet_id.value_or(std::filesystem::path(input).stem().string());
      const EvalReport report = run_eval(field, gaze, cfg, id);
      const EvalFiles files = write_eval_outputs(report, cfg, id);
      std::cout << report_json(report, cfg);
      std::cerr << "wrote " << files.report.string() << ", " << files.roc.string() << "\n";
      return kOk;
    }
    if (corpus->parsed()) {
      RunConfig cfg = resolve(o);
      if (k_default) cfg.selection.default_k = *k_default;
      if (cpl_stat) cfg.selection.cpl = parse_cpl_statistic(*cpl_stat);
      for (const auto& spec : k_overrides) {
        const auto eq = spec.rfind('=');
        int k = -1;
        if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::Config, "--k expects LABEL=K, got '" + spec + "'");
        try {
          std::size_t used = 0;
          k = std::stoi(spec.substr(eq + 1), &used);
          if (used != spec.size() - eq - 1) k = -1;
        } catch (const std::exception&) {
          k = -1;
        }
        if (k < 0) throw Error(ErrorKind::Config, "--k expects a non-negative count, got '" + spec + "'");
        cfg.selection.per_label[spec.substr(0, eq)] = k;
      }
      cfg.validate();
      const auto stats = run_corpus(load_manifest(input), cfg.selection);
      const auto csv_path = cfg.output_dir / "corpus_stats.csv";
      const auto sel_path = cfg.output_dir / "selection.json";
      write_file_atomic(csv_path, stats_to_csv(stats));
      write_file_atomic(sel_path, selection_json(stats, cfg));
      std::cout << stats_to_csv(stats);
      std::cerr << "wrote " << csv_path.string() << ", " << sel_path.string() << "\n";
      return kOk;
    }
    if (normalize->parsed()) {
      const std::string text = normalize_indent(read_text_file(input));
      if (normalize_out) {
        write_file_atomic(*normalize_out, text);
      } else {
        std::cout << text;
      }
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}

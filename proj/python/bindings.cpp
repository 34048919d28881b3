#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "codeattn/error.hpp"
#include "codeattn/pipeline.hpp"

namespace py = pybind11;
using namespace codeattn;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using CountArray = py::array_t<std::uint32_t, py::array::c_style | py::array::forcecast>;

ScalarField to_field(const DoubleArray& a) {
  if (a.ndim() != 2) throw py::value_error("field must be two-dimensional");
  ScalarField f(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), f.values.begin());
  return f;
}

GazeHistogram to_histogram(const CountArray& a) {
  if (a.ndim() != 2) throw py::value_error("counts must be two-dimensional");
  GazeHistogram g;
  g.counts = Grid<std::uint32_t>(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), g.counts.values.begin());
  return g;
}

DoubleArray to_array(const ScalarField& f) {
  DoubleArray out({f.height, f.width});
  std::copy(f.values.begin(), f.values.end(), out.mutable_data());
  return out;
}

RunConfig config_from(const std::optional<std::string>& json_text) {
  return json_text ? parse_run_config(*json_text) : RunConfig{};
}

std::optional<std::vector<PathAttention>> records_from(const std::optional<std::map<std::string, double>>& weights) {
  if (!weights) return std::nullopt;
  std::vector<PathAttention> out;
  for (const auto& [key, value] : *weights) out.push_back({key, value});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Attention maps over Java source and their ROC agreement with gaze";

  py::exception<Error>(m, "CodeattnError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // `kind` names the failure, e.g. "ParseError" or "BadDownsample"
      const py::object type = py::module_::import("codeattn._core").attr("CodeattnError");
      py::object exc = type(py::str(e.what()));
      exc.attr("kind") = py::str(to_string(e.kind()));
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  m.def("version", &version);

  m.def("normalize_indent", [](const std::string& text) { return normalize_indent(text); }, py::arg("text"));

  m.def(
      "dump_ast", [](const std::string& source) { return dump_ast(parse_source(make_snippet("snippet", source))); },
      py::arg("source"), "Tab-separated node table: id, type, 1-based span, token.");

  m.def(
      "path_contexts",
      [](const std::string& source, int max_length, int max_width, int max_contexts) {
        const SyntaxTree tree = parse_source(make_snippet("snippet", source));
        ExtractionLimits limits{max_length, max_width, max_contexts};
        std::vector<std::string> out;
        for (const auto& pc : extract_path_contexts(tree, limits)) out.push_back(canonical_string(tree, pc));
        return out;
      },
      py::arg("source"), py::arg("max_length") = 8, py::arg("max_width") = 2, py::arg("max_contexts") = 200,
      "Canonical path-context strings in source order.");

  m.def(
      "attention_map",
      [](const std::string& source, std::optional<std::map<std::string, double>> attention, int downsample,
         std::optional<std::string> config_json) {
        RunConfig cfg = config_from(config_json);
        cfg.downsample = downsample;
        const MapRun run = run_map(make_snippet("snippet", source), cfg, records_from(attention));
        py::dict info;
        info["contexts"] = run.contexts.size();
        info["matched_contexts"] = run.attention.matched_contexts;
        info["unmatched_contexts"] = run.attention.unmatched_contexts;
        info["warnings"] = run.warnings;
        return py::make_tuple(to_array(run.field), info);
      },
      py::arg("source"), py::arg("attention") = py::none(), py::arg("downsample") = 4,
      py::arg("config_json") = py::none(),
      "Returns (field, info). `attention` maps canonical strings to weights; None means uniform.");

  m.def(
      "gaze_histogram",
      [](const std::string& csv_text, int downsample, std::optional<std::string> config_json) {
        const RunConfig cfg = config_from(config_json);
        const GazeLoad load = parse_gaze(csv_text, cfg.layout, cfg.t_range, "gaze");
        const GazeHistogram h =
            gaze_histogram(load.retained, cfg.layout.clip.side, downsample, load.stats.removed_fraction);
        CountArray counts({h.counts.height, h.counts.width});
        std::copy(h.counts.values.begin(), h.counts.values.end(), counts.mutable_data());
        py::dict stats;
        stats["total"] = load.stats.total;
        stats["retained"] = load.stats.retained;
        stats["out_of_bounds"] = load.stats.out_of_bounds;
        stats["lost"] = load.stats.lost;
        stats["removed_fraction"] = load.stats.removed_fraction;
        return py::make_tuple(counts, stats);
      },
      py::arg("csv_text"), py::arg("downsample") = 4, py::arg("config_json") = py::none(),
      "Parses `timestamp,x,y` text and bins the retained samples. Returns (counts, stats).");

  m.def(
      "roc",
      [](const DoubleArray& field, const CountArray& counts) {
        const RocCurve curve = roc_curve(to_field(field), to_histogram(counts));
        std::vector<std::tuple<double, double, double>> points;
        for (const auto& p : curve.points) points.emplace_back(p.threshold, p.fpr, p.tpr);
        return py::make_tuple(points, auc(curve.points));
      },
      py::arg("field"), py::arg("counts"), "Returns ([(threshold, fpr, tpr), ...], auc).");
}

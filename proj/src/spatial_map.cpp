#include "codeattn/spatial_map.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "codeattn/error.hpp"
#include "codeattn/io.hpp"
#include "text_util.hpp"
#include "utf8.hpp"

namespace codeattn {

namespace {

using nlohmann::json;

void check_downsample(int side, int downsample) {
  if (downsample < 1 || side % downsample != 0) {
    throw Error(ErrorKind::BadDownsample, "downsample " + std::to_string(downsample) +
                                              " does not divide the clip side " + std::to_string(side));
  }
}

// exp(-(d^2) / (2 sigma^2)) for one axis
double axis_weight(double d, double sigma) { return std::exp(-(d * d) / (2.0 * sigma * sigma)); }

template <class T>
T take(const json& obj, const char* key, T fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Config, std::string("layout field '") + key + "' has the wrong type");
  }
}

}  // namespace

void LayoutConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, "layout: " + msg); };
  if (!(cell_w > 0.0) || !(cell_h > 0.0)) fail("cell sizes must be positive");
  if (!std::isfinite(margin_x) || !std::isfinite(margin_y)) fail("margins must be finite");
  if (!(sigma_divisor > 0.0) || !std::isfinite(sigma_divisor)) fail("sigma_divisor must be positive");
  if (stimulus_w < 1 || stimulus_h < 1) fail("stimulus must be non-empty");
  if (clip.side < 1) fail("clip side must be positive");
  if (clip.x0 < 0 || clip.y0 < 0 || clip.x0 + clip.side > stimulus_w || clip.y0 + clip.side > stimulus_h) {
    fail("clip square must lie inside the stimulus");
  }
}

LayoutConfig parse_layout_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("layout JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Config, "layout JSON must be an object");
  static constexpr const char* kKnown[] = {"cell_w",     "cell_h",     "margin_x", "margin_y",
                                           "stimulus_w", "stimulus_h", "clip",     "sigma_divisor"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char* k) { return key == k; }) ==
        std::end(kKnown)) {
      throw Error(ErrorKind::Config, "unknown layout field '" + key + "'");
    }
  }
  LayoutConfig cfg;
  cfg.cell_w = take(doc, "cell_w", cfg.cell_w);
  cfg.cell_h = take(doc, "cell_h", cfg.cell_h);
  cfg.margin_x = take(doc, "margin_x", cfg.margin_x);
  cfg.margin_y = take(doc, "margin_y", cfg.margin_y);
  cfg.stimulus_w = take(doc, "stimulus_w", cfg.stimulus_w);
  cfg.stimulus_h = take(doc, "stimulus_h", cfg.stimulus_h);
  cfg.sigma_divisor = take(doc, "sigma_divisor", cfg.sigma_divisor);
  if (const auto it = doc.find("clip"); it != doc.end()) {
    if (!it->is_object()) throw Error(ErrorKind::Config, "layout field 'clip' must be an object");
    for (const auto& [key, _] : it->items()) {
      if (key != "x0" && key != "y0" && key != "side") {
        throw Error(ErrorKind::Config, "unknown clip field '" + key + "'");
      }
    }
    cfg.clip.x0 = take(*it, "x0", cfg.clip.x0);
    cfg.clip.y0 = take(*it, "y0", cfg.clip.y0);
    cfg.clip.side = take(*it, "side", cfg.clip.side);
  }
  cfg.validate();
  return cfg;
}

LayoutConfig load_layout_config(const std::filesystem::path& file) {
  return parse_layout_config(read_text_file(file));
}

std::string to_json_text(const LayoutConfig& cfg) {
  const json doc = {
      {"cell_w", cfg.cell_w},
      {"cell_h", cfg.cell_h},
      {"margin_x", cfg.margin_x},
      {"margin_y", cfg.margin_y},
      {"stimulus_w", cfg.stimulus_w},
      {"stimulus_h", cfg.stimulus_h},
      {"clip", {{"x0", cfg.clip.x0}, {"y0", cfg.clip.y0}, {"side", cfg.clip.side}}},
      {"sigma_divisor", cfg.sigma_divisor},
  };
  return doc.dump(2);
}

std::vector<TokenGeometry> layout_tokens(const SyntaxTree& tree, const LayoutConfig& cfg) {
  cfg.validate();
  std::vector<TokenGeometry> out;
  out.reserve(tree.tokens().size());
  for (const Token& token : tree.tokens()) {
    const auto chars = static_cast<double>(utf8::count_code_points(token.text));
    const double left = cfg.margin_x + token.span.start_col * cfg.cell_w;
    const double top = cfg.margin_y + token.span.start_line * cfg.cell_h;
    const double right = left + chars * cfg.cell_w;
    const double bottom = top + cfg.cell_h;
    if (left < 0.0 || top < 0.0 || right > cfg.stimulus_w || bottom > cfg.stimulus_h) {
      throw Error(ErrorKind::LayoutOverflow,
                  "token '" + token.text + "' at line " + std::to_string(token.span.start_line + 1) +
                      ", column " + std::to_string(token.span.start_col + 1) + " falls outside the stimulus");
    }
    TokenGeometry g;
    g.token = token;
    g.width_px = chars * cfg.cell_w;
    g.height_px = cfg.cell_h;
    g.center_x = cfg.margin_x + (token.span.start_col + chars / 2.0) * cfg.cell_w - cfg.clip.x0;
    g.center_y = cfg.margin_y + (token.span.start_line + 0.5) * cfg.cell_h - cfg.clip.y0;
    g.sigma_x = g.width_px / cfg.sigma_divisor;
    g.sigma_y = g.height_px / cfg.sigma_divisor;
    out.push_back(std::move(g));
  }
  return out;
}

double attention_at(std::span<const TokenGeometry> geometry, const NodeAttention& attention, double x,
                    double y) {
  double sum = 0.0;
  for (const auto& g : geometry) {
    const double a = attention[g.token.owner];
    if (a == 0.0) continue;
    sum += a * axis_weight(y - g.center_y, g.sigma_y) * axis_weight(x - g.center_x, g.sigma_x);
  }
  return sum;
}

ScalarField generate_attention_map(std::span<const TokenGeometry> geometry,
                                   const NodeAttention& attention, const LayoutConfig& cfg,
                                   int downsample) {
  check_downsample(cfg.clip.side, downsample);
  const int n = cfg.clip.side / downsample;
  ScalarField field(n, n, 0.0);
  std::vector<double> wx(static_cast<std::size_t>(n));
  std::vector<double> wy(static_cast<std::size_t>(n));
  // Token-major accumulation in a fixed order keeps the output bit-identical
  // across runs.
  for (const auto& g : geometry) {
    const double a = attention[g.token.owner];
    if (a == 0.0) continue;
    for (int k = 0; k < n; ++k) {
      const double c = (k + 0.5) * downsample;
      wx[static_cast<std::size_t>(k)] = axis_weight(c - g.center_x, g.sigma_x);
      wy[static_cast<std::size_t>(k)] = axis_weight(c - g.center_y, g.sigma_y);
    }
    for (int y = 0; y < n; ++y) {
      const double ay = a * wy[static_cast<std::size_t>(y)];
      if (ay == 0.0) continue;
      for (int x = 0; x < n; ++x) field(x, y) += ay * wx[static_cast<std::size_t>(x)];
    }
  }
  return field;
}

double untokened_mass(const SyntaxTree& tree, const NodeAttention& attention) {
  double sum = 0.0;
  for (const auto& node : tree.nodes()) {
    if (tree.token_of(node.id) == nullptr) sum += attention[node.id];
  }
  return sum;
}

double field_max(const ScalarField& field) {
  if (field.values.empty()) return 0.0;
  return *std::max_element(field.values.begin(), field.values.end());
}

std::string field_to_csv(const ScalarField& field) {
  std::string out;
  out.reserve(field.size() * 12);
  out += std::to_string(field.width);
  out += ',';
  out += std::to_string(field.height);
  out += '\n';
  for (int y = 0; y < field.height; ++y) {
    for (int x = 0; x < field.width; ++x) {
      if (x > 0) out += ',';
      text::append_double(out, field(x, y));
    }
    out += '\n';
  }
  return out;
}

ScalarField field_from_csv(std::string_view csv, std::string_view source_name) {
  const std::string source(source_name);
  const auto lines = text::split_lines(csv);
  if (lines.empty()) throw FormatError(source, 1, "empty map file");
  const auto header = text::split(text::strip_cr(lines[0]), ',');
  if (header.size() != 2) throw FormatError(source, 1, "expected 'width,height'");
  const auto w = text::parse_int(text::trim(header[0]));
  const auto h = text::parse_int(text::trim(header[1]));
  if (!w || !h || *w < 1 || *h < 1 || *w > 1 << 16 || *h > 1 << 16) {
    throw FormatError(source, 1, "invalid map dimensions");
  }
  ScalarField field(static_cast<int>(*w), static_cast<int>(*h));
  std::size_t row = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line = text::strip_cr(lines[i]);
    const int line_no = static_cast<int>(i) + 1;
    if (text::trim(line).empty()) continue;
    if (row >= static_cast<std::size_t>(field.height)) throw FormatError(source, line_no, "too many rows");
    const auto cells = text::split(line, ',');
    if (cells.size() != static_cast<std::size_t>(field.width)) {
      throw FormatError(source, line_no, "expected " + std::to_string(field.width) + " values");
    }
    for (std::size_t x = 0; x < cells.size(); ++x) {
      const auto v = text::parse_double(text::trim(cells[x]));
      if (!v || !std::isfinite(*v) || *v < 0.0) {
        throw FormatError(source, line_no, "map values must be finite and non-negative");
      }
      field(static_cast<int>(x), static_cast<int>(row)) = *v;
    }
    ++row;
  }
  if (row != static_cast<std::size_t>(field.height)) {
    throw FormatError(source, static_cast<int>(lines.size()), "expected " + std::to_string(field.height) + " rows");
  }
  return field;
}

ScalarField read_field_csv(const std::filesystem::path& file) {
  return field_from_csv(read_text_file(file), file.string());
}

std::vector<std::uint8_t> normalized_pixels(const ScalarField& field) {
  std::vector<std::uint8_t> out(field.size(), 0);
  const double peak = field_max(field);
  if (!(peak > 0.0)) return out;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double scaled = std::floor(255.0 * field.values[i] / peak);
    out[i] = static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
  }
  return out;
}

std::string field_to_pgm(const ScalarField& field) {
  std::string out = "P5\n" + std::to_string(field.width) + " " + std::to_string(field.height) + "\n255\n";
  const auto pixels = normalized_pixels(field);
  out.append(pixels.begin(), pixels.end());
  return out;
}

void render_field(const ScalarField& field, const std::filesystem::path& base) {
  std::filesystem::path csv = base, pgm = base;
  csv += ".csv";
  pgm += ".pgm";
  write_file_atomic(csv, field_to_csv(field));
  write_file_atomic(pgm, field_to_pgm(field));
}

}  // namespace codeattn

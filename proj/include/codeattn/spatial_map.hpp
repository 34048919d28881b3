#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codeattn/attention.hpp"
#include "codeattn/field.hpp"
#include "codeattn/syntax.hpp"

namespace codeattn {

/// Analysis square inside the stimulus, in stimulus pixels.
struct ClipRect {
  int x0 = 540;
  int y0 = 120;
  int side = 840;

  /// Half-open membership: [x0, x0 + side) x [y0, y0 + side).
  bool contains(double x, double y) const {
    return x >= x0 && x < x0 + side && y >= y0 && y < y0 + side;
  }
};

/// Monospace text placement on the stimulus. Lengths are pixels; the text
/// origin (column 0, line 0) sits at (margin_x, margin_y) in stimulus
/// coordinates.
struct LayoutConfig {
  double cell_w = 16.0;
  double cell_h = 36.0;
  double margin_x = 580.0;
  double margin_y = 160.0;
  int stimulus_w = 1920;
  int stimulus_h = 1080;
  ClipRect clip;
  // Gaussian spread relative to the token box: sigma = size / sigma_divisor.
  double sigma_divisor = 4.0;

  /// Throws Error{Config} on non-positive cells or a clip outside the stimulus.
  void validate() const;
};

LayoutConfig parse_layout_config(std::string_view json_text);
LayoutConfig load_layout_config(const std::filesystem::path& file);
std::string to_json_text(const LayoutConfig& cfg);

struct TokenGeometry {
  Token token;
  double center_x = 0.0;  // clip-local pixels
  double center_y = 0.0;
  double width_px = 0.0;
  double height_px = 0.0;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
};

/// Geometry for every representative token. Throws Error{LayoutOverflow} if a
/// token's box leaves the stimulus.
std::vector<TokenGeometry> layout_tokens(const SyntaxTree& tree, const LayoutConfig& cfg);

/// Exact mixture value at a clip-local point, summing tokens in order.
double attention_at(std::span<const TokenGeometry> geometry, const NodeAttention& attention,
                    double x, double y);

/// Sum of token-centred Gaussians with peak height equal to the owner's node
/// attention, sampled at cell centres ((i + 0.5) * downsample). Throws
/// Error{BadDownsample} unless `downsample` divides the clip side.
ScalarField generate_attention_map(std::span<const TokenGeometry> geometry,
                                   const NodeAttention& attention, const LayoutConfig& cfg,
                                   int downsample = 1);

/// Attention on nodes that own no token and therefore place no Gaussian.
double untokened_mass(const SyntaxTree& tree, const NodeAttention& attention);

double field_max(const ScalarField& field);

/// `width,height` line followed by one comma-separated row per line.
std::string field_to_csv(const ScalarField& field);
ScalarField field_from_csv(std::string_view text, std::string_view source_name = "<csv>");
ScalarField read_field_csv(const std::filesystem::path& file);

/// Binary P5 bytes, floor(255 * v / max); an all-zero field maps to zeros.
std::string field_to_pgm(const ScalarField& field);
std::vector<std::uint8_t> normalized_pixels(const ScalarField& field);

/// Writes `<base>.csv` and `<base>.pgm`. Throws Error{Io}.
void render_field(const ScalarField& field, const std::filesystem::path& base);

}  // namespace codeattn

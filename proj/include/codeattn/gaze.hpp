#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "codeattn/field.hpp"
#include "codeattn/spatial_map.hpp"

namespace codeattn {

struct GazePoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// Half-open time window [begin, end) in seconds.
struct TimeRange {
  double begin = 0.0;
  double end = 0.0;
};

struct GazeStats {
  std::size_t total = 0;  // samples inside the time window
  std::size_t retained = 0;
  std::size_t out_of_bounds = 0;
  std::size_t lost = 0;  // non-finite or negative coordinates
  std::size_t non_monotonic = 0;  // timestamps that went backwards (warning only)
  double removed_fraction = 0.0;
};

struct GazeLoad {
  std::vector<GazePoint> retained;  // clip-local coordinates
  GazeStats stats;
};

/// Drops loss samples and points outside the clip, translating the rest to
/// clip-local coordinates. Does not require a non-empty result.
GazeLoad clip_gaze(std::span<const GazePoint> raw, const ClipRect& clip);

/// Parses the `timestamp,x,y` CSV. Throws FormatError, or Error{EmptyInput}
/// when nothing survives clipping.
GazeLoad parse_gaze(std::string_view text, const LayoutConfig& cfg,
                    std::optional<TimeRange> window = std::nullopt,
                    std::string_view source_name = "<gaze>");
GazeLoad load_gaze(const std::filesystem::path& file, const LayoutConfig& cfg,
                   std::optional<TimeRange> window = std::nullopt);

struct GazeHistogram {
  Grid<std::uint32_t> counts;
  double removed_fraction = 0.0;

  std::uint64_t total() const;
};

/// Counts points per cell of `side / downsample` cells, binning by
/// floor(coord / downsample). Throws Error{BadDownsample}.
GazeHistogram gaze_histogram(std::span<const GazePoint> points, int side, int downsample = 1,
                             double removed_fraction = 0.0);

/// 1 exactly where the histogram count is zero.
BinaryField negate_histogram(const GazeHistogram& g);

}  // namespace codeattn

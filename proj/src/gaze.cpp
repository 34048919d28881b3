#include "codeattn/gaze.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "codeattn/error.hpp"
#include "codeattn/io.hpp"
#include "text_util.hpp"

namespace codeattn {

namespace {

bool is_loss(double x, double y) { return !std::isfinite(x) || !std::isfinite(y) || x < 0.0 || y < 0.0; }

// Empty and NaN-like coordinate fields mark tracker loss; anything else must be numeric.
std::optional<double> coordinate(std::string_view field, const std::string& source, int line_no) {
  field = text::trim(field);
  if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto v = text::parse_double(field);
  if (!v) throw FormatError(source, line_no, "malformed coordinate '" + std::string(field) + "'");
  return v;
}

}  // namespace

GazeLoad clip_gaze(std::span<const GazePoint> raw, const ClipRect& clip) {
  GazeLoad load;
  load.stats.total = raw.size();
  for (const auto& p : raw) {
    if (is_loss(p.x, p.y)) {
      ++load.stats.lost;
    } else if (!clip.contains(p.x, p.y)) {
      ++load.stats.out_of_bounds;
    } else {
      load.retained.push_back({p.t, p.x - clip.x0, p.y - clip.y0});
    }
  }
  load.stats.retained = load.retained.size();
  if (load.stats.total > 0) {
    load.stats.removed_fraction = static_cast<double>(load.stats.lost + load.stats.out_of_bounds) /
                                  static_cast<double>(load.stats.total);
  }
  return load;
}

GazeLoad parse_gaze(std::string_view csv, const LayoutConfig& cfg, std::optional<TimeRange> window,
                    std::string_view source_name) {
  const std::string source(source_name);
  std::vector<GazePoint> raw;
  bool seen_header = false;
  std::size_t non_monotonic = 0;
  double last_t = -std::numeric_limits<double>::infinity();
  int line_no = 0;
  for (std::string_view line : text::split_lines(csv)) {
    ++line_no;
    line = text::strip_cr(line);
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto fields = text::split(line, ',');
    if (!seen_header) {
      if (fields.size() != 3 || text::trim(fields[0]) != "timestamp" || text::trim(fields[1]) != "x" ||
          text::trim(fields[2]) != "y") {
        throw FormatError(source, line_no, "expected header 'timestamp,x,y'");
      }
      seen_header = true;
      continue;
    }
    if (fields.size() != 3) throw FormatError(source, line_no, "expected 3 fields");
    const auto t = text::parse_double(text::trim(fields[0]));
    if (!t || !std::isfinite(*t)) throw FormatError(source, line_no, "malformed timestamp");
    if (*t < last_t) ++non_monotonic;
    last_t = *t;
    if (window && (*t < window->begin || *t >= window->end)) continue;
    raw.push_back({*t, *coordinate(fields[1], source, line_no), *coordinate(fields[2], source, line_no)});
  }
  if (!seen_header) throw FormatError(source, 1, "missing header 'timestamp,x,y'");

  GazeLoad load = clip_gaze(raw, cfg.clip);
  load.stats.non_monotonic = non_monotonic;
  if (load.retained.empty()) {
    throw Error(ErrorKind::EmptyInput, source + ": no gaze samples remain after clipping");
  }
  return load;
}

GazeLoad load_gaze(const std::filesystem::path& file, const LayoutConfig& cfg,
                   std::optional<TimeRange> window) {
  return parse_gaze(read_text_file(file), cfg, window, file.string());
}

std::uint64_t GazeHistogram::total() const {
  return std::accumulate(counts.values.begin(), counts.values.end(), std::uint64_t{0});
}

GazeHistogram gaze_histogram(std::span<const GazePoint> points, int side, int downsample,
                             double removed_fraction) {
  if (downsample < 1 || side < 1 || side % downsample != 0) {
    throw Error(ErrorKind::BadDownsample, "downsample " + std::to_string(downsample) +
                                              " does not divide the clip side " + std::to_string(side));
  }
  const int n = side / downsample;
  GazeHistogram h;
  h.counts = Grid<std::uint32_t>(n, n, 0);
  h.removed_fraction = removed_fraction;
  for (const auto& p : points) {
    if (!(p.x >= 0.0 && p.x < side && p.y >= 0.0 && p.y < side)) {
      throw Error(ErrorKind::Value, "gaze point outside the clip square; clip before binning");
    }
    const int bx = std::min(static_cast<int>(std::floor(p.x / downsample)), n - 1);
    const int by = std::min(static_cast<int>(std::floor(p.y / downsample)), n - 1);
    ++h.counts(bx, by);
  }
  return h;
}

BinaryField negate_histogram(const GazeHistogram& g) {
  BinaryField out(g.counts.width, g.counts.height, 0);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = g.counts.values[i] == 0 ? 1 : 0;
  return out;
}

}  // namespace codeattn

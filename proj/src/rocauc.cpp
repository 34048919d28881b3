#include "codeattn/rocauc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "codeattn/error.hpp"
#include "text_util.hpp"

namespace codeattn {

namespace {

void require_same_shape(int w, int h, int ow, int oh, const char* what) {
  if (w != ow || h != oh) {
    throw Error(ErrorKind::Value, std::string(what) + " shape " + std::to_string(ow) + "x" + std::to_string(oh) +
                                      " does not match " + std::to_string(w) + "x" + std::to_string(h));
  }
}

}  // namespace

BinaryField binarize(const ScalarField& field, double threshold) {
  BinaryField out(field.width, field.height, 0);
  for (std::size_t i = 0; i < field.size(); ++i) out.values[i] = field.values[i] > threshold ? 1 : 0;
  return out;
}

Rates tpr_fpr(const GazeHistogram& gplus, const BinaryField& gminus, const BinaryField& cbin) {
  require_same_shape(cbin.width, cbin.height, gplus.counts.width, gplus.counts.height, "gaze histogram");
  require_same_shape(cbin.width, cbin.height, gminus.width, gminus.height, "negative mask");
  std::uint64_t pos = 0, pos_hit = 0, neg = 0, neg_hit = 0;
  for (std::size_t i = 0; i < cbin.size(); ++i) {
    pos += gplus.counts.values[i];
    neg += gminus.values[i];
    if (cbin.values[i] != 0) {
      pos_hit += gplus.counts.values[i];
      neg_hit += gminus.values[i];
    }
  }
  if (pos == 0 || neg == 0) {
    throw Error(ErrorKind::DegenerateGaze, pos == 0 ? "no gaze samples in the histogram"
                                                    : "gaze covers every cell; no negatives remain");
  }
  return {static_cast<double>(pos_hit) / static_cast<double>(pos),
          static_cast<double>(neg_hit) / static_cast<double>(neg)};
}

RocCurve roc_curve(const ScalarField& field, const GazeHistogram& gplus) {
  require_same_shape(field.width, field.height, gplus.counts.width, gplus.counts.height, "gaze histogram");
  if (field.size() == 0) throw Error(ErrorKind::EmptyInput, "empty attention map");
  for (double v : field.values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Value, "attention map holds a non-finite value");
  }
  std::uint64_t pos = 0, neg = 0;
  for (std::uint32_t c : gplus.counts.values) {
    pos += c;
    neg += c == 0 ? 1 : 0;
  }
  if (pos == 0 || neg == 0) {
    throw Error(ErrorKind::DegenerateGaze, pos == 0 ? "no gaze samples in the histogram"
                                                    : "gaze covers every cell; no negatives remain");
  }

  std::vector<std::size_t> order(field.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return field.values[a] > field.values[b] || (field.values[a] == field.values[b] && a < b);
  });

  const double hi = field.values[order.front()];
  const double lo = field.values[order.back()];
  RocCurve curve;
  curve.points.push_back({std::nextafter(hi, std::numeric_limits<double>::infinity()), 0.0, 0.0});
  std::size_t distinct = 0;
  std::uint64_t pos_hit = 0, neg_hit = 0;
  const auto emit = [&](double threshold) {
    RocPoint p{threshold, static_cast<double>(neg_hit) / static_cast<double>(neg),
               static_cast<double>(pos_hit) / static_cast<double>(pos)};
    // Thresholds fall monotonically, so a repeat can only match the previous point.
    if (p.fpr != curve.points.back().fpr || p.tpr != curve.points.back().tpr) curve.points.push_back(p);
  };
  // Threshold v binarizes cells strictly above v: the cells of every earlier group.
  for (std::size_t i = 0; i < order.size();) {
    const double v = field.values[order[i]];
    ++distinct;
    emit(v);
    for (; i < order.size() && field.values[order[i]] == v; ++i) {
      const std::uint32_t c = gplus.counts.values[order[i]];
      pos_hit += c;
      neg_hit += c == 0 ? 1 : 0;
    }
  }
  emit(std::nextafter(lo, -std::numeric_limits<double>::infinity()));
  curve.n_thresholds = distinct + 2;
  return curve;
}

double auc(std::span<const RocPoint> roc) {
  if (roc.size() < 2) throw Error(ErrorKind::MalformedCurve, "ROC curve needs at least two points");
  if (roc.front().fpr != 0.0 || roc.front().tpr != 0.0 || roc.back().fpr != 1.0 || roc.back().tpr != 1.0) {
    throw Error(ErrorKind::MalformedCurve, "ROC curve must run from (0,0) to (1,1)");
  }
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    const RocPoint& a = roc[i - 1];
    const RocPoint& b = roc[i];
    if (b.fpr < a.fpr || (b.fpr == a.fpr && b.tpr < a.tpr)) {
      throw Error(ErrorKind::MalformedCurve, "ROC points are not sorted by (fpr, tpr)");
    }
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

EvalReport evaluate(const ScalarField& field, const GazeHistogram& gplus, const GazeStats& stats,
                    std::string snippet_id) {
  EvalReport report;
  report.snippet_id = std::move(snippet_id);
  report.roc = roc_curve(field, gplus);
  report.auc = auc(report.roc.points);
  report.gaze_stats = stats;
  return report;
}

std::string roc_to_csv(std::span<const RocPoint> roc) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : roc) {
    text::append_double(out, p.threshold);
    out += ',';
    text::append_double(out, p.fpr);
    out += ',';
    text::append_double(out, p.tpr);
    out += '\n';
  }
  return out;
}

}  // namespace codeattn

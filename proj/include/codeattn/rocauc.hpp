#pragma once

#include <span>
#include <string>
#include <vector>

#include "codeattn/field.hpp"
#include "codeattn/gaze.hpp"

namespace codeattn {

/// 1 where C > threshold (strict), else 0.
BinaryField binarize(const ScalarField& field, double threshold);

struct Rates {
  double tpr = 0.0;
  double fpr = 0.0;
};

/// TPR = sum(G+ o Cbin) / sum(G+), FPR = sum(G- o Cbin) / sum(G-). G+ holds
/// counts, so TPR is gaze-weighted. Throws Error{DegenerateGaze} when either
/// denominator is zero.
Rates tpr_fpr(const GazeHistogram& gplus, const BinaryField& gminus, const BinaryField& cbin);

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // fpr ascending, ties by tpr ascending
  std::size_t n_thresholds = 0;
};

/// Sweeps every distinct field value plus one sentinel above the maximum and
/// one below the minimum. Duplicate (fpr, tpr) points are merged, keeping the
/// largest threshold.
RocCurve roc_curve(const ScalarField& field, const GazeHistogram& gplus);

/// Trapezoidal area over fpr. Throws Error{MalformedCurve} if points are
/// unsorted or the (0,0)/(1,1) endpoints are missing.
double auc(std::span<const RocPoint> roc);

struct EvalReport {
  std::string snippet_id;
  double auc = 0.0;
  RocCurve roc;
  GazeStats gaze_stats;
};

EvalReport evaluate(const ScalarField& field, const GazeHistogram& gplus, const GazeStats& stats,
                    std::string snippet_id);

/// `threshold,fpr,tpr` header plus one row per point.
std::string roc_to_csv(std::span<const RocPoint> roc);

}  // namespace codeattn

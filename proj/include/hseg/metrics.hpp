#ifndef HSEG_METRICS_HPP
#define HSEG_METRICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "hseg/hierarchy.hpp"
#include "hseg/inference.hpp"

namespace hseg {

// Ground-truth entries with this value are excluded from every metric.
inline constexpr int kIgnoreLabel = -1;

// Per-leaf-class counters. Superclass predictions count as FN of the true
// class and, when the prediction is a true ancestor, additionally as TS at
// the prediction's level; they never charge FP to any class.
// Tallies merge by counter addition: tally(a ++ b) == tally(a) + tally(b).
struct HierTally {
  int height = 0;
  int leaf_count = 0;
  std::vector<long long> tp, fp, fn;       // [leaf_count]
  std::vector<std::vector<long long>> ts;  // [height][leaf_count]; row 0 unused
  long long total_points = 0;

  HierTally() = default;
  HierTally(int height, int leaf_count);
  HierTally& operator+=(const HierTally& other);
  friend HierTally operator+(HierTally a, const HierTally& b) { return a += b; }
};

// Folds predictions (node ids at any level) against leaf ground truth.
// Ignore-labelled points are skipped. OpenMP over points; per-thread
// tallies merge by addition, so the result is exact for any thread count.
HierTally tally(std::span<const int> pred_nodes, std::span<const int> gt_leaves,
                const LabelHierarchy& h, int threads = 0);
HierTally tally(std::span<const HierPrediction> preds, std::span<const int> gt_leaves,
                const LabelHierarchy& h, int threads = 0);

// Per-class score plus the mean over classes with a nonzero denominator.
// Excluded classes carry NaN in per_class.
struct PerClassScore {
  std::vector<double> per_class;
  double mean = 0.0;
  int included = 0;
};

// hIoU_s = (TP + sum_l alpha^l * TS(l)) / (TP + FP + FN), alpha in [0,1].
PerClassScore hiou(const HierTally& t, double alpha);

// Plain per-class IoU from the same counters (equals hiou at alpha = 0).
PerClassScore miou(const HierTally& t);

// Fraction of points whose prediction asserts a tier-level membership that
// contradicts the ground truth's ancestor at that tier. Predictions above
// the tier assert nothing. Requires 1 <= tier <= height-2.
double cer(std::span<const int> pred_nodes, std::span<const int> gt_leaves,
           const LabelHierarchy& h, int tier, int threads = 0);
double cer(std::span<const HierPrediction> preds, std::span<const int> gt_leaves,
           const LabelHierarchy& h, int tier, int threads = 0);

struct ReliabilityBin {
  double center = 0.0;
  double accuracy = 0.0;
  double confidence = 0.0;
  long long count = 0;
};

struct EceResult {
  double value = 0.0;
  std::vector<ReliabilityBin> bins;  // empty bins omitted
};

// Equal-width binning on confidence; ECE = sum |b|/N * |acc(b) - conf(b)|.
EceResult ece(std::span<const double> confidences, std::span<const std::uint8_t> correct,
              int bins = 15);

struct SparsificationResult {
  double value = 0.0;  // area between model and oracle curves
  std::vector<double> fractions;
  std::vector<double> model_error;
  std::vector<double> oracle_error;
};

// Model curve removes the lowest-confidence fraction f and reports the mean
// per-point error of the remainder; the oracle removes highest-error points
// first. Ties keep input order. The empty set at f = 1 scores 0.
SparsificationResult ause_brier(std::span<const double> confidences,
                                std::span<const double> brier,
                                std::span<const double> fractions);

// Same protocol with 1 - mIoU of the retained set as the curve value and the
// pointwise-incorrect indicator as the oracle's removal key.
SparsificationResult ause_miou(std::span<const double> confidences,
                               std::span<const int> leaf_preds,
                               std::span<const int> gt_leaves, int leaf_count,
                               std::span<const double> fractions);

struct UiouResult {
  double value = 0.0;
  std::vector<double> thetas;
  std::vector<double> per_theta;
};

// At each theta, points with confidence < theta become invalid: wrong ones
// drop out entirely, right ones turn into FN of their class. The final value
// averages the per-theta class-mean IoU over the grid.
UiouResult uiou(std::span<const int> leaf_preds, std::span<const double> confidences,
                std::span<const int> gt_leaves, int leaf_count,
                std::span<const double> thetas);

// Inclusive grid start..stop at the given step (endpoints within 1e-12).
std::vector<double> make_grid(double start, double stop, double step);

}  // namespace hseg

#endif

#ifndef HSEG_EVALUATE_HPP
#define HSEG_EVALUATE_HPP

#include <optional>
#include <string>

#include "hseg/io.hpp"
#include "hseg/metrics.hpp"

#include <json.hpp>

namespace hseg {

struct EvalOptions {
  std::vector<double> alpha_grid;   // empty -> 0..1 step 0.1
  int ece_bins = 15;
  double sparsification_step = 0.05;
  double theta_step = 0.05;
  int cer_tier = 2;
  // unset -> stored confidences when present, else entropy
  std::optional<ConfidenceKind> confidence;
  bool renormalize_leaves = true;
  bool lift = false;  // flat dumps only: apply the threshold lift rule
  int threads = 0;
};

// Everything the eval surface reports, with the grids that produced it.
struct MetricReport {
  long long points = 0;
  std::string model_kind;        // "hierarchical" | "flat" | "flat+lift"
  std::string confidence_kind;   // "entropy" | "maxprob" | "stored"

  PerClassScore miou_score;
  std::vector<double> alpha_grid;
  std::vector<PerClassScore> hiou_scores;  // one per alpha

  double cer_value = 0.0;
  int cer_tier = 2;

  EceResult ece_result;
  int ece_bins = 15;

  SparsificationResult ause_bs;
  SparsificationResult ause_miou_result;

  UiouResult uiou_result;

  nlohmann::json to_json(const LabelHierarchy& h) const;
};

// Full pipeline: decode (hierarchical or flat by column count, optional
// lift), drop ignore-labelled points, then every metric. Throws when the
// dump's column count matches neither the full class set nor the leaf set,
// or when a ground-truth id is out of range.
MetricReport evaluate(const PredictionDump& dump, const LabelHierarchy& h,
                      const EvalOptions& opts);

// Curve exports, one CSV per curve.
void write_reliability_csv(const std::string& path, const EceResult& r);
void write_sparsification_csv(const std::string& path, const SparsificationResult& r);
void write_uiou_csv(const std::string& path, const UiouResult& r);

}  // namespace hseg

#endif

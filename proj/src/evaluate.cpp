#include "hseg/evaluate.hpp"

#include <cmath>
#include <fstream>

#include "hseg/error.hpp"
#include "hseg/objective.hpp"
#include "hseg/parallel.hpp"

namespace hseg {

namespace {

// Per-point Brier score over leaf probabilities, scaled by 1/2 so the value
// (and the AUSE built on it) stays within [0,1]. For hierarchical rows the
// leaf slice is renormalized first.
std::vector<double> brier_batch(const float* logits, std::size_t rows, std::size_t dim,
                                const LabelHierarchy& h, bool hierarchical,
                                std::span<const int> gt, int threads) {
  std::vector<double> out(rows, 0.0);
  const std::size_t leaves = h.leaf_count();
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (long long i = 0; i < static_cast<long long>(rows); ++i) {
    if (gt[i] == kIgnoreLabel) continue;
    const float* row = logits + static_cast<std::size_t>(i) * dim;
    std::vector<double> x(dim);
    for (std::size_t c = 0; c < dim; ++c) x[c] = static_cast<double>(row[c]);
    std::vector<double> p = softmax_full(x);
    double mass = 1.0;
    if (hierarchical) {
      mass = 0.0;
      for (std::size_t c = 0; c < leaves; ++c) mass += p[c];
    }
    double bs = 0.0;
    for (std::size_t c = 0; c < leaves; ++c) {
      const double q = p[c] / mass;
      const double y = static_cast<int>(c) == gt[i] ? 1.0 : 0.0;
      bs += (q - y) * (q - y);
    }
    out[i] = 0.5 * bs;
  }
  return out;
}

}  // namespace

MetricReport evaluate(const PredictionDump& dump, const LabelHierarchy& h,
                      const EvalOptions& opts) {
  if (!dump.has_logits()) throw Error("eval: dump carries no logits");
  const std::size_t n = dump.points();
  if (n == 0) throw Error("eval: dump is empty");

  const bool hierarchical = dump.logit_cols == static_cast<std::uint32_t>(h.size());
  if (!hierarchical && dump.logit_cols != static_cast<std::uint32_t>(h.leaf_count()))
    throw Error("eval: dump has " + std::to_string(dump.logit_cols) +
                " logit columns; hierarchy expects " + std::to_string(h.size()) +
                " (full) or " + std::to_string(h.leaf_count()) + " (flat)");
  if (hierarchical && opts.lift) throw Error("eval: --lift applies to flat dumps only");

  std::vector<int> gt(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (dump.gt[i] == kIgnoreGt) {
      gt[i] = kIgnoreLabel;
    } else if (dump.gt[i] >= static_cast<std::uint32_t>(h.leaf_count())) {
      throw Error("eval: ground-truth id " + std::to_string(dump.gt[i]) +
                  " exceeds leaf count " + std::to_string(h.leaf_count()));
    } else {
      gt[i] = static_cast<int>(dump.gt[i]);
    }
  }

  const bool use_stored = !opts.confidence.has_value() && dump.has_confidences();
  const ConfidenceKind kind = opts.confidence.value_or(ConfidenceKind::entropy);

  std::vector<HierPrediction> preds;
  if (hierarchical) {
    preds = decode_batch(dump.logits.data(), n, h, kind, opts.renormalize_leaves,
                         opts.threads);
  } else {
    preds = decode_flat_batch(dump.logits.data(), n, h, kind, opts.threads);
  }
  if (use_stored) {
    for (std::size_t i = 0; i < n; ++i) {
      const double c = dump.confidences[i];
      if (c < 0.0f || c > 1.0f)
        throw Error("eval: stored confidence outside [0,1]");
      preds[i].confidence = c;
    }
  }
  if (!hierarchical && opts.lift) preds = lift_batch(preds, h, opts.threads);

  std::vector<double> brier = brier_batch(dump.logits.data(), n, dump.logit_cols, h,
                                          hierarchical, gt, opts.threads);

  // Ignore-labelled points drop out of every metric.
  std::vector<HierPrediction> kept_preds;
  std::vector<int> kept_gt, kept_leaf;
  std::vector<double> kept_conf, kept_brier;
  std::vector<std::uint8_t> kept_correct;
  kept_preds.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (gt[i] == kIgnoreLabel) continue;
    kept_preds.push_back(preds[i]);
    kept_gt.push_back(gt[i]);
    kept_leaf.push_back(preds[i].leaf_argmax);
    kept_conf.push_back(preds[i].confidence);
    kept_brier.push_back(brier[i]);
    kept_correct.push_back(preds[i].leaf_argmax == gt[i] ? 1 : 0);
  }
  if (kept_gt.empty()) throw Error("eval: every point is ignore-labelled");

  MetricReport r;
  r.points = static_cast<long long>(kept_gt.size());
  r.model_kind = hierarchical ? "hierarchical" : (opts.lift ? "flat+lift" : "flat");
  r.confidence_kind = use_stored ? "stored" : to_string(kind);

  r.alpha_grid = opts.alpha_grid.empty() ? make_grid(0.0, 1.0, 0.1) : opts.alpha_grid;
  const HierTally hier_tally = tally(kept_preds, kept_gt, h, opts.threads);
  r.hiou_scores.reserve(r.alpha_grid.size());
  for (double a : r.alpha_grid) r.hiou_scores.push_back(hiou(hier_tally, a));

  const HierTally leaf_tally = tally(kept_leaf, kept_gt, h, opts.threads);
  r.miou_score = miou(leaf_tally);

  r.cer_tier = opts.cer_tier;
  r.cer_value = cer(kept_preds, kept_gt, h, opts.cer_tier, opts.threads);

  r.ece_bins = opts.ece_bins;
  r.ece_result = ece(kept_conf, kept_correct, opts.ece_bins);

  const std::vector<double> fractions = make_grid(0.0, 1.0, opts.sparsification_step);
  r.ause_bs = ause_brier(kept_conf, kept_brier, fractions);
  r.ause_miou_result = ause_miou(kept_conf, kept_leaf, kept_gt, h.leaf_count(), fractions);

  const std::vector<double> thetas = make_grid(0.0, 1.0, opts.theta_step);
  r.uiou_result = uiou(kept_leaf, kept_conf, kept_gt, h.leaf_count(), thetas);
  return r;
}

namespace {

nlohmann::json per_class_json(const PerClassScore& score, const LabelHierarchy& h) {
  nlohmann::json per;
  for (int s = 0; s < static_cast<int>(score.per_class.size()); ++s) {
    if (std::isnan(score.per_class[s]))
      per[h.name(s)] = nullptr;  // absent from GT and predictions
    else
      per[h.name(s)] = score.per_class[s];
  }
  return per;
}

}  // namespace

nlohmann::json MetricReport::to_json(const LabelHierarchy& h) const {
  nlohmann::json j;
  j["points"] = points;
  j["model_kind"] = model_kind;
  j["confidence"] = confidence_kind;

  j["miou"]["mean"] = miou_score.mean;
  j["miou"]["per_class"] = per_class_json(miou_score, h);

  j["hiou"]["alpha_grid"] = alpha_grid;
  nlohmann::json means = nlohmann::json::array();
  nlohmann::json per = nlohmann::json::array();
  for (const PerClassScore& s : hiou_scores) {
    means.push_back(s.mean);
    per.push_back(per_class_json(s, h));
  }
  j["hiou"]["mean"] = means;
  j["hiou"]["per_class"] = per;

  j["cer"]["value"] = cer_value;
  j["cer"]["tier"] = cer_tier;

  j["ece"]["value"] = ece_result.value;
  j["ece"]["bins"] = ece_bins;
  nlohmann::json rel = nlohmann::json::array();
  for (const ReliabilityBin& b : ece_result.bins)
    rel.push_back({{"center", b.center},
                   {"accuracy", b.accuracy},
                   {"confidence", b.confidence},
                   {"count", b.count}});
  j["ece"]["reliability"] = rel;

  auto spars = [](const SparsificationResult& s) {
    return nlohmann::json{{"value", s.value},
                          {"fractions", s.fractions},
                          {"model_error", s.model_error},
                          {"oracle_error", s.oracle_error}};
  };
  j["ause_bs"] = spars(ause_bs);
  j["ause_miou"] = spars(ause_miou_result);

  j["uiou"]["value"] = uiou_result.value;
  j["uiou"]["theta_grid"] = uiou_result.thetas;
  j["uiou"]["per_theta"] = uiou_result.per_theta;
  return j;
}

void write_reliability_csv(const std::string& path, const EceResult& r) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("csv: cannot open '" + path + "' for writing");
  f.precision(12);
  f << "bin_center,accuracy,confidence,count\n";
  for (const ReliabilityBin& b : r.bins)
    f << b.center << ',' << b.accuracy << ',' << b.confidence << ',' << b.count << '\n';
}

void write_sparsification_csv(const std::string& path, const SparsificationResult& r) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("csv: cannot open '" + path + "' for writing");
  f.precision(12);
  f << "fraction_removed,model_error,oracle_error\n";
  for (std::size_t i = 0; i < r.fractions.size(); ++i)
    f << r.fractions[i] << ',' << r.model_error[i] << ',' << r.oracle_error[i] << '\n';
}

void write_uiou_csv(const std::string& path, const UiouResult& r) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("csv: cannot open '" + path + "' for writing");
  f.precision(12);
  f << "theta,uiou\n";
  for (std::size_t i = 0; i < r.thetas.size(); ++i)
    f << r.thetas[i] << ',' << r.per_theta[i] << '\n';
}

}  // namespace hseg

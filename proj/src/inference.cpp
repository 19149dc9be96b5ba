#include "hseg/inference.hpp"

#include <algorithm>
#include <cmath>

#include "hseg/error.hpp"
#include "hseg/objective.hpp"
#include "hseg/parallel.hpp"

namespace hseg {

namespace {

int argmax_prefix(std::span<const double> x, std::size_t count) {
  int best = 0;
  for (std::size_t c = 1; c < count; ++c)
    if (x[c] > x[best]) best = static_cast<int>(c);
  return best;
}

double entropy_confidence(std::span<const double> probs, bool renormalize) {
  const std::size_t n = probs.size();
  double mass = 0.0;
  for (double p : probs) mass += p;
  double entropy = 0.0;
  for (double p : probs) {
    double q = renormalize ? p / mass : p;
    if (q > 0.0) entropy -= q * std::log(q);
  }
  double conf = 1.0 - entropy / std::log(static_cast<double>(n));
  return std::clamp(conf, 0.0, 1.0);
}

}  // namespace

ConfidenceKind parse_confidence_kind(std::string_view name) {
  if (name == "entropy") return ConfidenceKind::entropy;
  if (name == "maxprob") return ConfidenceKind::maxprob;
  throw Error("unknown confidence kind '" + std::string(name) +
              "' (expected entropy|maxprob)");
}

const char* to_string(ConfidenceKind kind) {
  return kind == ConfidenceKind::entropy ? "entropy" : "maxprob";
}

double leaf_entropy_confidence(std::span<const double> x, const LabelHierarchy& h,
                               bool renormalize) {
  if (x.size() != static_cast<std::size_t>(h.size()))
    throw Error("leaf_entropy_confidence: expected logits over the full class set");
  if (h.leaf_count() < 2)
    throw Error("leaf_entropy_confidence: needs at least 2 leaf classes");
  std::vector<double> p = softmax_full(x);
  return entropy_confidence(std::span<const double>(p.data(), h.leaf_count()),
                            renormalize);
}

HierPrediction decode(std::span<const double> x, const LabelHierarchy& h,
                      ConfidenceKind kind, bool renormalize) {
  if (x.size() != static_cast<std::size_t>(h.size()))
    throw Error("decode: logit length " + std::to_string(x.size()) +
                " != class count " + std::to_string(h.size()));
  std::vector<double> p = softmax_full(x);
  HierPrediction out;
  out.class_id = argmax_prefix(p, p.size());
  out.level = h.level(out.class_id);
  out.leaf_argmax = argmax_prefix(p, h.leaf_count());
  std::span<const double> leaf_probs(p.data(), h.leaf_count());
  if (kind == ConfidenceKind::entropy) {
    out.confidence = entropy_confidence(leaf_probs, renormalize);
  } else {
    double mass = 0.0;
    for (double v : leaf_probs) mass += v;
    out.confidence = renormalize ? leaf_probs[out.leaf_argmax] / mass
                                 : leaf_probs[out.leaf_argmax];
  }
  return out;
}

int lift_level(double conf, int height) {
  if (conf < 0.0 || conf > 1.0)
    throw Error("lift: confidence " + std::to_string(conf) + " outside [0,1]");
  int level = height - 1 - static_cast<int>(std::floor(conf * height));
  return std::clamp(level, 0, height - 1);
}

HierPrediction lift_flat(std::span<const double> x, const LabelHierarchy& h, double conf) {
  if (x.size() != static_cast<std::size_t>(h.leaf_count()))
    throw Error("lift_flat: expected logits over leaf classes only");
  HierPrediction out;
  out.leaf_argmax = argmax_prefix(x, x.size());
  out.level = lift_level(conf, h.height());
  out.class_id = h.ancestor_at_level(out.leaf_argmax, out.level);
  out.confidence = conf;
  return out;
}

std::vector<HierPrediction> decode_batch(const float* logits, std::size_t rows,
                                         const LabelHierarchy& h, ConfidenceKind kind,
                                         bool renormalize, int threads) {
  std::vector<HierPrediction> out(rows);
  const std::size_t dim = h.size();
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (long long i = 0; i < static_cast<long long>(rows); ++i) {
    const float* row = logits + static_cast<std::size_t>(i) * dim;
    std::vector<double> x(dim);
    for (std::size_t c = 0; c < dim; ++c) x[c] = static_cast<double>(row[c]);
    out[i] = decode(x, h, kind, renormalize);
  }
  return out;
}

std::vector<HierPrediction> decode_flat_batch(const float* logits, std::size_t rows,
                                              const LabelHierarchy& h,
                                              ConfidenceKind kind, int threads) {
  if (h.leaf_count() < 2)
    throw Error("decode_flat_batch: needs at least 2 leaf classes");
  std::vector<HierPrediction> out(rows);
  const std::size_t dim = h.leaf_count();
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (long long i = 0; i < static_cast<long long>(rows); ++i) {
    const float* row = logits + static_cast<std::size_t>(i) * dim;
    std::vector<double> x(dim);
    for (std::size_t c = 0; c < dim; ++c) x[c] = static_cast<double>(row[c]);
    std::vector<double> p = softmax_full(x);
    HierPrediction pred;
    pred.leaf_argmax = argmax_prefix(p, dim);
    pred.class_id = pred.leaf_argmax;
    pred.level = 0;
    pred.confidence = kind == ConfidenceKind::entropy ? entropy_confidence(p, false)
                                                      : p[pred.leaf_argmax];
    out[i] = pred;
  }
  return out;
}

std::vector<HierPrediction> lift_batch(std::span<const HierPrediction> flat,
                                       const LabelHierarchy& h, int threads) {
  std::vector<HierPrediction> out(flat.size());
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (long long i = 0; i < static_cast<long long>(flat.size()); ++i) {
    HierPrediction p = flat[i];
    p.level = lift_level(p.confidence, h.height());
    p.class_id = h.ancestor_at_level(p.leaf_argmax, p.level);
    out[i] = p;
  }
  return out;
}

}  // namespace hseg

#ifndef HSEG_INFERENCE_HPP
#define HSEG_INFERENCE_HPP

#include <span>
#include <string_view>
#include <vector>

#include "hseg/hierarchy.hpp"

namespace hseg {

// A decoded point: the winning node at any level plus the leaf-restricted
// view that leaf-only consumers (mIoU, calibration) use.
struct HierPrediction {
  int class_id = -1;
  int level = 0;
  double confidence = 0.0;  // in [0,1]
  int leaf_argmax = -1;
};

enum class ConfidenceKind { entropy, maxprob };

ConfidenceKind parse_confidence_kind(std::string_view name);
const char* to_string(ConfidenceKind kind);

// 1 - H(leaf distribution) / log(leaf_count). The leaf slice of the full
// softmax is renormalized to sum 1 before the entropy unless
// renormalize = false (comparison mode). Requires at least 2 leaves.
double leaf_entropy_confidence(std::span<const double> x, const LabelHierarchy& h,
                               bool renormalize = true);

// Argmax over the full tree; ties go to the lowest class id.
HierPrediction decode(std::span<const double> x, const LabelHierarchy& h,
                      ConfidenceKind kind = ConfidenceKind::entropy,
                      bool renormalize = true);

// Target level for a flat prediction under the evenly spaced confidence
// thresholds: h-1-floor(conf*h), clamped to [0, h-1]. Higher confidence
// maps to a lower (more detailed) level.
int lift_level(double conf, int height);

// Lifts a flat leaf prediction (logits over leaves only) to the ancestor
// selected by lift_level(conf). Throws when conf is outside [0,1].
HierPrediction lift_flat(std::span<const double> x, const LabelHierarchy& h, double conf);

// Batched decode over row-major logit rows (cols = |classes|), OpenMP over
// points; no shared mutable state.
std::vector<HierPrediction> decode_batch(const float* logits, std::size_t rows,
                                         const LabelHierarchy& h,
                                         ConfidenceKind kind = ConfidenceKind::entropy,
                                         bool renormalize = true, int threads = 0);

// Flat rows (cols = leaf_count): leaf argmax plus flat confidence (entropy
// over the softmax normalized by log leaf_count, or max probability).
// Result level is always 0; lift separately when the lift rule is wanted.
std::vector<HierPrediction> decode_flat_batch(const float* logits, std::size_t rows,
                                              const LabelHierarchy& h,
                                              ConfidenceKind kind = ConfidenceKind::entropy,
                                              int threads = 0);

// Applies the lift rule to already-decoded flat predictions.
std::vector<HierPrediction> lift_batch(std::span<const HierPrediction> flat,
                                       const LabelHierarchy& h, int threads = 0);

}  // namespace hseg

#endif

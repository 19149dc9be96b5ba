#ifndef HSEG_REFERENCE_HPP
#define HSEG_REFERENCE_HPP

#include "hseg/metrics.hpp"
#include "hseg/objective.hpp"

// Serial reference implementations of the OpenMP kernels. Kept for the
// equivalence tests and the serial-vs-parallel benchmark; plain per-point
// loops with no partitioning.
namespace hseg::ref {

double hce_loss_batch(const float* logits, std::size_t rows, std::size_t dim,
                      const int* gt_leaves, const TargetTable& targets);
double ce_loss_batch(const float* logits, std::size_t rows, std::size_t dim,
                     const int* gt_leaves);

std::vector<HierPrediction> decode_batch(const float* logits, std::size_t rows,
                                         const LabelHierarchy& h,
                                         ConfidenceKind kind = ConfidenceKind::entropy,
                                         bool renormalize = true);
std::vector<HierPrediction> decode_flat_batch(const float* logits, std::size_t rows,
                                              const LabelHierarchy& h,
                                              ConfidenceKind kind = ConfidenceKind::entropy);

HierTally tally(std::span<const int> pred_nodes, std::span<const int> gt_leaves,
                const LabelHierarchy& h);

double cer(std::span<const int> pred_nodes, std::span<const int> gt_leaves,
           const LabelHierarchy& h, int tier);

}  // namespace hseg::ref

#endif

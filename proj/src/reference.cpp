#include "hseg/reference.hpp"

#include "hseg/error.hpp"

namespace hseg::ref {

namespace {

std::vector<double> to_double(const float* row, std::size_t dim) {
  std::vector<double> x(dim);
  for (std::size_t c = 0; c < dim; ++c) x[c] = static_cast<double>(row[c]);
  return x;
}

}  // namespace

double hce_loss_batch(const float* logits, std::size_t rows, std::size_t dim,
                      const int* gt_leaves, const TargetTable& targets) {
  if (rows == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> x = to_double(logits + i * dim, dim);
    sum += hce_loss(x, targets.target(gt_leaves[i]));
  }
  return sum / static_cast<double>(rows);
}

double ce_loss_batch(const float* logits, std::size_t rows, std::size_t dim,
                     const int* gt_leaves) {
  if (rows == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> x = to_double(logits + i * dim, dim);
    sum += ce_loss_flat(x, gt_leaves[i]);
  }
  return sum / static_cast<double>(rows);
}

std::vector<HierPrediction> decode_batch(const float* logits, std::size_t rows,
                                         const LabelHierarchy& h, ConfidenceKind kind,
                                         bool renormalize) {
  std::vector<HierPrediction> out;
  out.reserve(rows);
  const std::size_t dim = h.size();
  for (std::size_t i = 0; i < rows; ++i)
    out.push_back(decode(to_double(logits + i * dim, dim), h, kind, renormalize));
  return out;
}

std::vector<HierPrediction> decode_flat_batch(const float* logits, std::size_t rows,
                                              const LabelHierarchy& h,
                                              ConfidenceKind kind) {
  return hseg::decode_flat_batch(logits, rows, h, kind, 1);
}

HierTally tally(std::span<const int> pred_nodes, std::span<const int> gt_leaves,
                const LabelHierarchy& h) {
  if (pred_nodes.size() != gt_leaves.size())
    throw Error("tally: prediction and ground-truth lengths differ");
  HierTally t(h.height(), h.leaf_count());
  for (std::size_t i = 0; i < gt_leaves.size(); ++i) {
    const int s = gt_leaves[i];
    if (s == kIgnoreLabel) continue;
    if (!h.is_leaf(s))
      throw Error("tally: ground-truth id " + std::to_string(s) + " is not a leaf");
    const int c = pred_nodes[i];
    ++t.total_points;
    if (h.is_leaf(c)) {
      if (c == s) {
        ++t.tp[s];
      } else {
        ++t.fn[s];
        ++t.fp[c];
      }
    } else {
      ++t.fn[s];
      const int lvl = h.level(c);
      if (h.ancestor_at_level(s, lvl) == c) ++t.ts[lvl][s];
    }
  }
  return t;
}

double cer(std::span<const int> pred_nodes, std::span<const int> gt_leaves,
           const LabelHierarchy& h, int tier) {
  if (tier < 0 || tier > h.height() - 2)
    throw Error("cer: hierarchy of height " + std::to_string(h.height()) +
                " has no comparison tier " + std::to_string(tier));
  long long critical = 0;
  long long counted = 0;
  for (std::size_t i = 0; i < gt_leaves.size(); ++i) {
    const int s = gt_leaves[i];
    if (s == kIgnoreLabel) continue;
    ++counted;
    const int c = pred_nodes[i];
    if (h.level(c) > tier) continue;
    if (h.ancestor_at_level(c, tier) != h.ancestor_at_level(s, tier)) ++critical;
  }
  return counted > 0 ? static_cast<double>(critical) / static_cast<double>(counted) : 0.0;
}

}  // namespace hseg::ref

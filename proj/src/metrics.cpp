#include "hseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hseg/error.hpp"
#include "hseg/parallel.hpp"

namespace hseg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_points(std::span<const int> pred_nodes, std::span<const int> gt_leaves,
                     const LabelHierarchy& h) {
  if (pred_nodes.size() != gt_leaves.size())
    throw Error("tally: prediction and ground-truth lengths differ");
  for (std::size_t i = 0; i < gt_leaves.size(); ++i) {
    const int s = gt_leaves[i];
    if (s == kIgnoreLabel) continue;
    if (!h.is_leaf(s))
      throw Error("tally: ground-truth id " + std::to_string(s) + " is not a leaf");
    const int c = pred_nodes[i];
    if (c < 0 || c >= h.size())
      throw Error("tally: unknown prediction node " + std::to_string(c));
  }
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double area = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    area += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return area;
}

// Shared sparsification protocol; `aggregate` maps a retained index set to
// the curve value and must return 0 for the empty set.
template <typename Aggregate>
SparsificationResult sparsify(std::span<const double> confidences,
                              std::span<const double> point_error,
                              std::span<const double> fractions, Aggregate aggregate) {
  const std::size_t n = confidences.size();
  if (n == 0) throw Error("sparsification: empty input");
  std::vector<std::size_t> by_conf(n), by_err(n);
  std::iota(by_conf.begin(), by_conf.end(), 0);
  std::iota(by_err.begin(), by_err.end(), 0);
  std::stable_sort(by_conf.begin(), by_conf.end(),
                   [&](std::size_t a, std::size_t b) { return confidences[a] < confidences[b]; });
  std::stable_sort(by_err.begin(), by_err.end(),
                   [&](std::size_t a, std::size_t b) { return point_error[a] > point_error[b]; });

  SparsificationResult out;
  out.fractions.assign(fractions.begin(), fractions.end());
  out.model_error.reserve(fractions.size());
  out.oracle_error.reserve(fractions.size());
  for (double f : fractions) {
    if (f < 0.0 || f > 1.0) throw Error("sparsification: fraction outside [0,1]");
    const std::size_t removed =
        std::min<std::size_t>(n, static_cast<std::size_t>(std::llround(f * static_cast<double>(n))));
    out.model_error.push_back(
        aggregate(std::span<const std::size_t>(by_conf).subspan(removed)));
    out.oracle_error.push_back(
        aggregate(std::span<const std::size_t>(by_err).subspan(removed)));
  }
  std::vector<double> gap(fractions.size());
  for (std::size_t i = 0; i < gap.size(); ++i)
    gap[i] = out.model_error[i] - out.oracle_error[i];
  out.value = trapezoid(out.fractions, gap);
  return out;
}

}  // namespace

HierTally::HierTally(int height, int leaf_count)
    : height(height),
      leaf_count(leaf_count),
      tp(leaf_count, 0),
      fp(leaf_count, 0),
      fn(leaf_count, 0),
      ts(height, std::vector<long long>(leaf_count, 0)) {}

HierTally& HierTally::operator+=(const HierTally& other) {
  if (height != other.height || leaf_count != other.leaf_count)
    throw Error("tally merge: shape mismatch");
  for (int s = 0; s < leaf_count; ++s) {
    tp[s] += other.tp[s];
    fp[s] += other.fp[s];
    fn[s] += other.fn[s];
    for (int l = 0; l < height; ++l) ts[l][s] += other.ts[l][s];
  }
  total_points += other.total_points;
  return *this;
}

HierTally tally(std::span<const int> pred_nodes, std::span<const int> gt_leaves,
                const LabelHierarchy& h, int threads) {
  validate_points(pred_nodes, gt_leaves, h);
  const int nt = resolve_threads(threads);
  std::vector<HierTally> partial(nt, HierTally(h.height(), h.leaf_count()));
#pragma omp parallel num_threads(nt)
  {
#ifdef _OPENMP
    HierTally& t = partial[omp_get_thread_num()];
#else
    HierTally& t = partial[0];
#endif
#pragma omp for schedule(static)
    for (long long i = 0; i < static_cast<long long>(gt_leaves.size()); ++i) {
      const int s = gt_leaves[i];
      if (s == kIgnoreLabel) continue;
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
  }
  HierTally out = std::move(partial[0]);
  for (int t = 1; t < nt; ++t) out += partial[t];
  return out;
}

HierTally tally(std::span<const HierPrediction> preds, std::span<const int> gt_leaves,
                const LabelHierarchy& h, int threads) {
  std::vector<int> nodes(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) nodes[i] = preds[i].class_id;
  return tally(nodes, gt_leaves, h, threads);
}

PerClassScore hiou(const HierTally& t, double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    throw Error("hiou: alpha " + std::to_string(alpha) + " outside [0,1]");
  PerClassScore out;
  out.per_class.assign(t.leaf_count, kNaN);
  double sum = 0.0;
  for (int s = 0; s < t.leaf_count; ++s) {
    const long long denom = t.tp[s] + t.fp[s] + t.fn[s];
    if (denom == 0) continue;
    double credit = static_cast<double>(t.tp[s]);
    for (int l = 1; l < t.height; ++l)
      credit += std::pow(alpha, static_cast<double>(l)) * static_cast<double>(t.ts[l][s]);
    out.per_class[s] = credit / static_cast<double>(denom);
    sum += out.per_class[s];
    ++out.included;
  }
  out.mean = out.included > 0 ? sum / out.included : 0.0;
  return out;
}

PerClassScore miou(const HierTally& t) {
  PerClassScore out;
  out.per_class.assign(t.leaf_count, kNaN);
  double sum = 0.0;
  for (int s = 0; s < t.leaf_count; ++s) {
    const long long denom = t.tp[s] + t.fp[s] + t.fn[s];
    if (denom == 0) continue;
    out.per_class[s] = static_cast<double>(t.tp[s]) / static_cast<double>(denom);
    sum += out.per_class[s];
    ++out.included;
  }
  out.mean = out.included > 0 ? sum / out.included : 0.0;
  return out;
}

double cer(std::span<const int> pred_nodes, std::span<const int> gt_leaves,
           const LabelHierarchy& h, int tier, int threads) {
  if (tier < 0 || tier > h.height() - 2)
    throw Error("cer: hierarchy of height " + std::to_string(h.height()) +
                " has no comparison tier " + std::to_string(tier));
  validate_points(pred_nodes, gt_leaves, h);
  const int nt = resolve_threads(threads);
  long long critical = 0;
  long long counted = 0;
#pragma omp parallel for schedule(static) num_threads(nt) \
    reduction(+ : critical, counted)
  for (long long i = 0; i < static_cast<long long>(gt_leaves.size()); ++i) {
    const int s = gt_leaves[i];
    if (s == kIgnoreLabel) continue;
    ++counted;
    const int c = pred_nodes[i];
    if (h.level(c) > tier) continue;  // asserts no tier membership
    if (h.ancestor_at_level(c, tier) != h.ancestor_at_level(s, tier)) ++critical;
  }
  return counted > 0 ? static_cast<double>(critical) / static_cast<double>(counted) : 0.0;
}

double cer(std::span<const HierPrediction> preds, std::span<const int> gt_leaves,
           const LabelHierarchy& h, int tier, int threads) {
  std::vector<int> nodes(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) nodes[i] = preds[i].class_id;
  return cer(nodes, gt_leaves, h, tier, threads);
}

EceResult ece(std::span<const double> confidences, std::span<const std::uint8_t> correct,
              int bins) {
  if (confidences.empty()) throw Error("ece: empty input");
  if (confidences.size() != correct.size())
    throw Error("ece: confidence and correctness lengths differ");
  if (bins < 1) throw Error("ece: bin count must be >= 1");
  std::vector<long long> count(bins, 0);
  std::vector<double> conf_sum(bins, 0.0);
  std::vector<long long> hit(bins, 0);
  for (std::size_t i = 0; i < confidences.size(); ++i) {
    const double c = confidences[i];
    if (c < 0.0 || c > 1.0) throw Error("ece: confidence outside [0,1]");
    const int b = std::min(bins - 1, static_cast<int>(c * bins));
    ++count[b];
    conf_sum[b] += c;
    hit[b] += correct[i] ? 1 : 0;
  }
  EceResult out;
  const double n = static_cast<double>(confidences.size());
  for (int b = 0; b < bins; ++b) {
    if (count[b] == 0) continue;
    ReliabilityBin rb;
    rb.center = (b + 0.5) / bins;
    rb.count = count[b];
    rb.accuracy = static_cast<double>(hit[b]) / count[b];
    rb.confidence = conf_sum[b] / count[b];
    out.value += (count[b] / n) * std::abs(rb.accuracy - rb.confidence);
    out.bins.push_back(rb);
  }
  return out;
}

SparsificationResult ause_brier(std::span<const double> confidences,
                                std::span<const double> brier,
                                std::span<const double> fractions) {
  if (confidences.size() != brier.size())
    throw Error("ause: confidence and error lengths differ");
  return sparsify(confidences, brier, fractions,
                  [&](std::span<const std::size_t> retained) {
                    if (retained.empty()) return 0.0;
                    double sum = 0.0;
                    for (std::size_t i : retained) sum += brier[i];
                    return sum / static_cast<double>(retained.size());
                  });
}

SparsificationResult ause_miou(std::span<const double> confidences,
                               std::span<const int> leaf_preds,
                               std::span<const int> gt_leaves, int leaf_count,
                               std::span<const double> fractions) {
  if (confidences.size() != leaf_preds.size() || leaf_preds.size() != gt_leaves.size())
    throw Error("ause: input lengths differ");
  std::vector<double> wrong(gt_leaves.size());
  for (std::size_t i = 0; i < gt_leaves.size(); ++i)
    wrong[i] = leaf_preds[i] == gt_leaves[i] ? 0.0 : 1.0;
  return sparsify(confidences, wrong, fractions,
                  [&](std::span<const std::size_t> retained) {
                    if (retained.empty()) return 0.0;
                    std::vector<long long> tp(leaf_count, 0), fp(leaf_count, 0),
                        fn(leaf_count, 0);
                    for (std::size_t i : retained) {
                      const int s = gt_leaves[i];
                      const int c = leaf_preds[i];
                      if (c == s) {
                        ++tp[s];
                      } else {
                        ++fn[s];
                        ++fp[c];
                      }
                    }
                    double sum = 0.0;
                    int included = 0;
                    for (int s = 0; s < leaf_count; ++s) {
                      const long long denom = tp[s] + fp[s] + fn[s];
                      if (denom == 0) continue;
                      sum += static_cast<double>(tp[s]) / static_cast<double>(denom);
                      ++included;
                    }
                    return included > 0 ? 1.0 - sum / included : 0.0;
                  });
}

UiouResult uiou(std::span<const int> leaf_preds, std::span<const double> confidences,
                std::span<const int> gt_leaves, int leaf_count,
                std::span<const double> thetas) {
  if (leaf_preds.size() != confidences.size() || leaf_preds.size() != gt_leaves.size())
    throw Error("uiou: input lengths differ");
  UiouResult out;
  out.thetas.assign(thetas.begin(), thetas.end());
  out.per_theta.reserve(thetas.size());
  for (double theta : thetas) {
    std::vector<long long> tp(leaf_count, 0), fp(leaf_count, 0), fn(leaf_count, 0);
    for (std::size_t i = 0; i < gt_leaves.size(); ++i) {
      const int s = gt_leaves[i];
      if (s == kIgnoreLabel) continue;
      const int c = leaf_preds[i];
      if (confidences[i] < theta) {
        // Invalid: right predictions become FN, wrong ones drop out.
        if (c == s) ++fn[s];
        continue;
      }
      if (c == s) {
        ++tp[s];
      } else {
        ++fn[s];
        ++fp[c];
      }
    }
    double sum = 0.0;
    int included = 0;
    for (int s = 0; s < leaf_count; ++s) {
      const long long denom = tp[s] + fp[s] + fn[s];
      if (denom == 0) continue;
      sum += static_cast<double>(tp[s]) / static_cast<double>(denom);
      ++included;
    }
    out.per_theta.push_back(included > 0 ? sum / included : 0.0);
  }
  double total = 0.0;
  for (double v : out.per_theta) total += v;
  out.value = out.per_theta.empty() ? 0.0 : total / static_cast<double>(out.per_theta.size());
  return out;
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (step <= 0.0) throw Error("grid: step must be positive");
  if (stop < start) throw Error("grid: stop below start");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    double v = start + i * step;
    if (v > stop + 1e-12) break;
    if (std::abs(v - stop) < 1e-12) v = stop;
    out.push_back(v);
  }
  return out;
}

}  // namespace hseg

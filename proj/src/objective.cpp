#include "hseg/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hseg/error.hpp"
#include "hseg/parallel.hpp"

namespace hseg {

namespace {

void check_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) throw Error("logit vector contains a non-finite entry");
}

// max + log(sum exp(x - max)); the pieces callers need for stable log p.
struct LogSumExp {
  double max;
  double lse;
};

LogSumExp logsumexp(std::span<const double> x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x) m = std::max(m, v);
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return {m, std::log(s)};
}

LogSumExp logsumexp_row(const float* row, std::size_t dim) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < dim; ++c) m = std::max(m, static_cast<double>(row[c]));
  double s = 0.0;
  for (std::size_t c = 0; c < dim; ++c) s += std::exp(static_cast<double>(row[c]) - m);
  return {m, std::log(s)};
}

}  // namespace

std::vector<double> softmax_full(std::span<const double> x) {
  check_finite(x);
  if (x.empty()) throw Error("softmax over an empty vector");
  auto [m, lse] = logsumexp(x);
  std::vector<double> p(x.size());
  for (std::size_t c = 0; c < x.size(); ++c) p[c] = std::exp(x[c] - m - lse);
  return p;
}

std::vector<double> log_softmax(std::span<const double> x) {
  check_finite(x);
  if (x.empty()) throw Error("softmax over an empty vector");
  auto [m, lse] = logsumexp(x);
  std::vector<double> lp(x.size());
  for (std::size_t c = 0; c < x.size(); ++c) lp[c] = x[c] - m - lse;
  return lp;
}

double hce_loss(std::span<const double> x, const HierTarget& t) {
  if (x.size() != t.eta.size())
    throw Error("hce_loss: logit length " + std::to_string(x.size()) +
                " != target length " + std::to_string(t.eta.size()));
  check_finite(x);
  auto [m, lse] = logsumexp(x);
  double loss = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c)
    loss += std::exp(t.eta[c]) * (m + lse - x[c]);
  return loss;
}

std::vector<double> hce_grad(std::span<const double> x, const HierTarget& t) {
  if (x.size() != t.eta.size())
    throw Error("hce_grad: logit length " + std::to_string(x.size()) +
                " != target length " + std::to_string(t.eta.size()));
  const double w = target_weight_sum(t);
  std::vector<double> g = softmax_full(x);
  for (std::size_t c = 0; c < x.size(); ++c) g[c] = g[c] * w - std::exp(t.eta[c]);
  return g;
}

double ce_loss_flat(std::span<const double> x, int leaf) {
  if (leaf < 0 || static_cast<std::size_t>(leaf) >= x.size())
    throw Error("ce_loss_flat: label " + std::to_string(leaf) + " out of range");
  check_finite(x);
  auto [m, lse] = logsumexp(x);
  return m + lse - x[leaf];
}

std::vector<double> ce_grad_flat(std::span<const double> x, int leaf) {
  if (leaf < 0 || static_cast<std::size_t>(leaf) >= x.size())
    throw Error("ce_grad_flat: label " + std::to_string(leaf) + " out of range");
  std::vector<double> g = softmax_full(x);
  g[leaf] -= 1.0;
  return g;
}

double hce_loss_batch(const float* logits, std::size_t rows, std::size_t dim,
                      const int* gt_leaves, const TargetTable& targets, int threads) {
  if (rows == 0) return 0.0;
  const int nt = resolve_threads(threads);
  std::vector<double> partial(nt, 0.0);
#pragma omp parallel num_threads(nt)
  {
#ifdef _OPENMP
    const int tid = omp_get_thread_num();
#else
    const int tid = 0;
#endif
    double local = 0.0;
#pragma omp for schedule(static)
    for (long long i = 0; i < static_cast<long long>(rows); ++i) {
      const float* row = logits + static_cast<std::size_t>(i) * dim;
      const std::vector<double>& ee = targets.exp_eta(gt_leaves[i]);
      auto [m, lse] = logsumexp_row(row, dim);
      double loss = 0.0;
      for (std::size_t c = 0; c < dim; ++c)
        loss += ee[c] * (m + lse - static_cast<double>(row[c]));
      local += loss;
    }
    partial[tid] = local;
  }
  double sum = 0.0;
  for (double v : partial) sum += v;
  return sum / static_cast<double>(rows);
}

double ce_loss_batch(const float* logits, std::size_t rows, std::size_t dim,
                     const int* gt_leaves, int threads) {
  if (rows == 0) return 0.0;
  const int nt = resolve_threads(threads);
  std::vector<double> partial(nt, 0.0);
#pragma omp parallel num_threads(nt)
  {
#ifdef _OPENMP
    const int tid = omp_get_thread_num();
#else
    const int tid = 0;
#endif
    double local = 0.0;
#pragma omp for schedule(static)
    for (long long i = 0; i < static_cast<long long>(rows); ++i) {
      const float* row = logits + static_cast<std::size_t>(i) * dim;
      auto [m, lse] = logsumexp_row(row, dim);
      local += m + lse - static_cast<double>(row[gt_leaves[i]]);
    }
    partial[tid] = local;
  }
  double sum = 0.0;
  for (double v : partial) sum += v;
  return sum / static_cast<double>(rows);
}

}  // namespace hseg

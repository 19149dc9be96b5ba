#ifndef HSEG_OBJECTIVE_HPP
#define HSEG_OBJECTIVE_HPP

#include <span>
#include <vector>

#include "hseg/encoding.hpp"

namespace hseg {

// Softmax over the whole vector, max-subtracted. Throws on non-finite input.
std::vector<double> softmax_full(std::span<const double> x);

// log softmax as x - max - log-sum-exp; avoids log(softmax) cancellation.
std::vector<double> log_softmax(std::span<const double> x);

// L = -sum_c exp(eta_c) * log p_c over the full class set.
double hce_loss(std::span<const double> x, const HierTarget& t);

// dL/dx_k = p_k * W - exp(eta_k) with W = target_weight_sum(t).
std::vector<double> hce_grad(std::span<const double> x, const HierTarget& t);

// Plain cross entropy over leaf logits; gradient is p - onehot(leaf).
double ce_loss_flat(std::span<const double> x, int leaf);
std::vector<double> ce_grad_flat(std::span<const double> x, int leaf);

// Mean per-point loss over a batch of logit rows (row-major rows x dim).
// Partitioned over points with OpenMP; partial sums are combined in chunk
// order, so results match the serial reference within float associativity.
double hce_loss_batch(const float* logits, std::size_t rows, std::size_t dim,
                      const int* gt_leaves, const TargetTable& targets,
                      int threads = 0);
double ce_loss_batch(const float* logits, std::size_t rows, std::size_t dim,
                     const int* gt_leaves, int threads = 0);

}  // namespace hseg

#endif

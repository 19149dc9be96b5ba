#ifndef HSEG_ENCODING_HPP
#define HSEG_ENCODING_HPP

#include <string_view>
#include <vector>

#include "hseg/hierarchy.hpp"

namespace hseg {

// Direction of the level weighting along the root path.
//   prose:   weight (h - l) / h, leaves heaviest (default).
//   formula: weight (1 + l) / h, root heaviest.
enum class EtaMode { prose, formula };

EtaMode parse_eta_mode(std::string_view name);
const char* to_string(EtaMode mode);

// Weighted multi-hot ground truth over the full class set. Nonzero entries
// are exactly the leaf and its ancestors; everything off the root path is 0.
struct HierTarget {
  std::vector<double> eta;  // length |classes|
  int leaf = -1;
};

// Builds the target for a level-0 class. Throws Error for non-leaf ids.
HierTarget encode_target(const LabelHierarchy& h, int leaf, EtaMode mode);

// W = sum over all classes of exp(eta_c); off-path classes contribute e^0 = 1.
double target_weight_sum(const HierTarget& t);

// Per-leaf target cache for batched loss evaluation.
class TargetTable {
 public:
  TargetTable(const LabelHierarchy& h, EtaMode mode);
  const HierTarget& target(int leaf) const { return targets_.at(leaf); }
  double weight_sum(int leaf) const { return weight_sums_.at(leaf); }
  const std::vector<double>& exp_eta(int leaf) const { return exp_eta_.at(leaf); }
  EtaMode mode() const { return mode_; }

 private:
  std::vector<HierTarget> targets_;
  std::vector<std::vector<double>> exp_eta_;
  std::vector<double> weight_sums_;
  EtaMode mode_;
};

}  // namespace hseg

#endif

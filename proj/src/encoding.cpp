#include "hseg/encoding.hpp"

#include <cmath>

#include "hseg/error.hpp"

namespace hseg {

EtaMode parse_eta_mode(std::string_view name) {
  if (name == "prose") return EtaMode::prose;
  if (name == "formula") return EtaMode::formula;
  throw Error("unknown eta mode '" + std::string(name) + "' (expected prose|formula)");
}

const char* to_string(EtaMode mode) {
  return mode == EtaMode::prose ? "prose" : "formula";
}

HierTarget encode_target(const LabelHierarchy& h, int leaf, EtaMode mode) {
  if (!h.is_leaf(leaf))
    throw Error("encode_target: class " + std::to_string(leaf) + " is not a leaf");
  HierTarget t;
  t.leaf = leaf;
  t.eta.assign(h.size(), 0.0);
  const double height = h.height();
  for (int v = leaf; v >= 0; v = h.parent(v)) {
    const double l = h.level(v);
    t.eta[v] = mode == EtaMode::prose ? (height - l) / height : (1.0 + l) / height;
  }
  return t;
}

double target_weight_sum(const HierTarget& t) {
  double w = 0.0;
  for (double e : t.eta) w += std::exp(e);
  return w;
}

TargetTable::TargetTable(const LabelHierarchy& h, EtaMode mode) : mode_(mode) {
  targets_.reserve(h.leaf_count());
  weight_sums_.reserve(h.leaf_count());
  for (int s = 0; s < h.leaf_count(); ++s) {
    targets_.push_back(encode_target(h, s, mode));
    weight_sums_.push_back(target_weight_sum(targets_.back()));
    std::vector<double> ee(targets_.back().eta.size());
    for (std::size_t c = 0; c < ee.size(); ++c) ee[c] = std::exp(targets_.back().eta[c]);
    exp_eta_.push_back(std::move(ee));
  }
}

}  // namespace hseg

#ifndef HSEG_IO_HPP
#define HSEG_IO_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hseg/hierarchy.hpp"

namespace hseg {

// Binary container shared by all subcommands. Layout (little-endian):
//   magic "HSEG1" | u8 flags | u16 reserved | u32 logit_cols | u32 feature_cols
//   | u64 points | payload.
// Payload order: features (N x F f32), logits (N x C f32), ground-truth ids
// (N u32), confidences (N f32). flags bits: 0 = logits, 1 = confidences,
// 2 = features. Ground truth is always present; scene dumps carry features
// with the logits section absent. The ignore marker in ground truth is
// 0xFFFFFFFF.
struct PredictionDump {
  std::uint32_t logit_cols = 0;
  std::uint32_t feature_cols = 0;
  std::vector<float> logits;        // points * logit_cols, row-major
  std::vector<float> features;      // points * feature_cols, row-major
  std::vector<std::uint32_t> gt;    // points
  std::vector<float> confidences;   // points, or empty

  std::size_t points() const { return gt.size(); }
  bool has_logits() const { return logit_cols > 0; }
  bool has_features() const { return feature_cols > 0; }
  bool has_confidences() const { return !confidences.empty(); }
};

inline constexpr std::uint32_t kIgnoreGt = 0xFFFFFFFFu;

// Write-then-read is bitwise identity.
void write_dump(const std::string& path, const PredictionDump& dump);

// Validates magic, version, flags, and exact payload length before allocating;
// absurd point-by-column products are rejected up front.
PredictionDump read_dump(const std::string& path);

// Small-N interoperability export: header row, then one row per point.
void write_dump_csv(const std::string& path, const PredictionDump& dump);

// Raw semantic id (low 16 bits of a label word) -> dense leaf id.
struct LearningMap {
  std::unordered_map<std::uint32_t, int> raw_to_leaf;
};

// Format per line: "raw_id name"; '#' comments. Names resolve against the
// hierarchy's leaves.
LearningMap read_learning_map(const std::string& path, const LabelHierarchy& h);

// Reads packed u32 label words (low 16 bits semantic, high 16 instance) and
// maps them to dense leaf ids. Unmapped ids become kIgnoreLabel, or throw in
// strict mode. Throws on truncated files.
std::vector<int> read_label_file(const std::string& path, const LearningMap& map,
                                 bool strict = false);

}  // namespace hseg

#endif

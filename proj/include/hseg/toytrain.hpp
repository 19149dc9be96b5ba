#ifndef HSEG_TOYTRAIN_HPP
#define HSEG_TOYTRAIN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hseg/encoding.hpp"
#include "hseg/evaluate.hpp"
#include "hseg/hierarchy.hpp"
#include "hseg/io.hpp"

namespace hseg {

// Synthetic labeled point cloud: one Gaussian cluster per leaf class, with a
// configurable fraction of points from paired classes drawn around the pair
// midpoint instead, so two labels share a feature region and the confusion
// is irreducible.
struct SceneConfig {
  int points_per_class = 40;
  int feature_dim = 4;  // xyz + an intensity-like scalar
  std::vector<std::vector<double>> centers;  // per leaf; empty = derive from seed
  double noise_scale = 0.25;
  double ambiguity_rate = 0.0;
  std::vector<std::pair<int, int>> ambiguity_pairs;  // empty + rate>0 = defaults
  std::vector<int> mask_classes;  // leaves excluded from the training loss
  std::uint64_t seed = 1;
};

struct Scene {
  int feature_dim = 0;
  std::vector<double> features;   // points * feature_dim, row-major
  std::vector<int> labels;        // leaf ids
  std::vector<std::uint8_t> ambiguous;  // drawn from a pair midpoint
  std::size_t points() const { return labels.size(); }
};

// Sibling leaf pairs under the same level-1 node, consecutive and disjoint.
std::vector<std::pair<int, int>> default_ambiguity_pairs(const LabelHierarchy& h);

// Cluster centers with pairwise separation >= min_separation, drawn in
// [-3,3]^dim by rejection.
std::vector<std::vector<double>> default_centers(const LabelHierarchy& h, int dim,
                                                 double min_separation,
                                                 std::uint64_t seed);

// Deterministic for a fixed config (bitwise-identical repeat draws).
Scene gen_scene(const LabelHierarchy& h, const SceneConfig& cfg);

// count scenes with per-scene seeds derived from cfg.seed; centers are
// resolved once so every scene shares them.
std::vector<Scene> gen_scenes(const LabelHierarchy& h, SceneConfig cfg, int count,
                              std::uint64_t salt = 0);

// Fully connected ReLU net; parameters live in one flat vector so the
// optimizer and the finite-difference tests can treat them uniformly.
class Mlp {
 public:
  Mlp(std::vector<int> widths, std::uint64_t seed);  // scaled uniform fan-in init

  int input_dim() const { return widths_.front(); }
  int output_dim() const { return widths_.back(); }
  const std::vector<int>& widths() const { return widths_; }
  std::size_t param_count() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  struct Workspace {
    std::vector<std::vector<double>> act;  // act[0] = input, act[L] = last hidden
    std::vector<std::vector<double>> pre;  // pre[l]; pre.back() = logits
  };

  void forward(std::span<const double> x, Workspace& ws) const;
  std::vector<double> forward(std::span<const double> x) const;

  // Accumulates parameter gradients for one point given dL/dlogits.
  void backward(const Workspace& ws, std::span<const double> dlogits,
                std::span<double> grad) const;

 private:
  std::vector<int> widths_;
  std::vector<double> params_;
  std::vector<std::size_t> w_off_, b_off_;
};

enum class LossKind { hce, ce_flat };

LossKind parse_loss_kind(std::string_view name);
const char* to_string(LossKind kind);

struct TrainConfig {
  std::vector<int> hidden = {64, 64};
  double learning_rate = 1e-3;  // toy default; 1e-4 is selectable
  int max_epochs = 100;
  int batch_scenes = 8;
  double early_stop_delta = 0.001;  // on validation mIoU
  int patience = 10;
  double beta1 = 0.9, beta2 = 0.999, epsilon = 1e-8;
  LossKind loss = LossKind::hce;
  EtaMode eta_mode = EtaMode::prose;
  double val_fraction = 0.2;
  std::vector<int> mask_classes;
  std::uint64_t seed = 1;
  int threads = 1;  // >1 uses a fixed per-thread reduction order
};

struct TrainLog {
  std::vector<double> train_loss;
  std::vector<double> val_miou;  // NaN when no validation split
  std::vector<double> learning_rate;
  int epochs_run = 0;
  std::string stop_reason;
};

struct TrainResult {
  Mlp net;
  TrainLog log;
};

// Adam with cosine learning-rate decay; early stopping on validation mIoU.
// Throws Error when the loss turns non-finite.
TrainResult train(const LabelHierarchy& h, std::span<const Scene> scenes,
                  const TrainConfig& cfg);

// Runs the net over scenes and packs logits + ground truth + confidences
// into the dump container (flat or hierarchical by cfg.loss).
PredictionDump predict_dump(const Mlp& net, const LabelHierarchy& h,
                            std::span<const Scene> scenes, LossKind loss,
                            int threads = 1);

void write_train_log_csv(const std::string& path, const TrainLog& log);

struct AbstentionStats {
  double frac_level0_unambiguous = 0.0;
  double mean_level_ambiguous = 0.0;
  double mean_level_unambiguous = 0.0;
  long long ambiguous_points = 0;
  long long unambiguous_points = 0;
};

struct ExperimentResult {
  std::string name;
  MetricReport hmc;
  MetricReport vanilla;  // flat model evaluated through the lift rule
  AbstentionStats abstention;  // HMC prediction levels on the test scenes
  int masked_class = -1;       // masking experiment only
  TrainLog hmc_log, vanilla_log;
};

// "crossover": both models on ambiguity-injected scenes, hIoU across alpha.
// "masking": one leaf's labels removed from training; its points sit in the
// mixed region of its two paired siblings so superclass credit is reachable.
ExperimentResult run_experiment(std::string_view name, std::uint64_t seed,
                                const LabelHierarchy& h, int threads = 1);

}  // namespace hseg

#endif

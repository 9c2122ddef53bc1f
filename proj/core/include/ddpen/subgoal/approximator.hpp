#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddpen/planner/dataset.hpp"
#include "ddpen/subgoal/providers.hpp"

namespace ddpen::subgoal {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Small strided CNN over a max-pooled costmap, a goal embedding and a fully
/// connected head that regresses the three sub-goals as offsets from the
/// straight-line baseline.
struct ApproximatorConfig {
  int downsample = 8;
  int conv1_channels = 8;
  int conv2_channels = 16;
  int goal_embedding = 32;
  int hidden = 128;

  double learning_rate = 1e-3;
  int batch_size = 32;
  int epochs = 30;
  std::uint64_t seed = 1;
  /// Seed of the 90/10 train/validation split.
  std::uint64_t split_seed = 7;
  double validation_fraction = 0.1;
  std::size_t min_records = 1000;
  std::filesystem::path checkpoint_path;

  void validate() const;
};

class SubGoalNet {
 public:
  static constexpr int kOutputs = 6;

  /// Intermediate activations of one forward pass, reused by backward().
  struct Workspace {
    const float* input = nullptr;
    std::array<float, 2> goal{};
    std::vector<float> conv1;
    std::vector<float> conv2;
    std::vector<float> embed;
    std::vector<float> concat;
    std::vector<float> hidden;
    std::array<float, kOutputs> out{};
    // Backward scratch.
    std::vector<float> d_concat;
    std::vector<float> d_conv2;
    std::vector<float> d_conv1;
  };

  SubGoalNet(const ApproximatorConfig& config, int map_width, int map_height);

  std::size_t parameter_count() const { return total_; }
  std::span<float> parameters() { return params_; }
  std::span<const float> parameters() const { return params_; }
  void set_parameters(std::span<const float> values);
  void initialize(std::uint64_t seed);

  int pooled_width() const { return pw_; }
  int pooled_height() const { return ph_; }

  /// Max-pooled costmap, pooled_height x pooled_width.
  std::vector<float> encode_map(const grid::CostMap& map) const;
  /// Goal relative to the map center, divided by the half extent.
  static std::array<float, 2> encode_goal(const grid::CostMap& map, const Point2& goal);

  const std::array<float, kOutputs>& forward(const float* pooled, const std::array<float, 2>& goal,
                                             Workspace& ws) const;
  /// Accumulates d(loss)/d(params) into `grad` given d(loss)/d(out).
  void backward(Workspace& ws, const std::array<float, kOutputs>& d_out,
                std::span<float> grad) const;

 private:
  ApproximatorConfig cfg_;
  int pw_, ph_;    // pooled input
  int w1_, h1_;    // conv1 output
  int w2_, h2_;    // conv2 output
  int features_;   // flattened conv2 + embedding
  std::size_t conv1_w_, conv1_b_, conv2_w_, conv2_b_, goal_w_, goal_b_;
  std::size_t fc1_w_, fc1_b_, fc2_w_, fc2_b_, total_;
  std::vector<float> params_;
};

struct Checkpoint {
  static constexpr int kVersion = 1;
  int version = kVersion;
  ApproximatorConfig config;
  int map_width = grid::kDefaultCells;
  int map_height = grid::kDefaultCells;
  double resolution = grid::kDefaultResolution;
  /// Normalization: offsets are divided by these half extents (meters).
  double half_extent_x = 5.0;
  double half_extent_y = 5.0;
  double validation_mse = 0.0;
  double validation_median_error_m = 0.0;
  double baseline_median_error_m = 0.0;
  int best_epoch = -1;
  std::vector<float> weights;
};

/// "DDPENSG1", uint32 little-endian header length, JSON header, then the
/// weights as little-endian float32.
std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(const std::string& bytes);
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);
/// FNV-1a over the serialized bytes.
std::uint64_t checkpoint_hash(const Checkpoint& ckpt);

struct TrainingReport {
  Checkpoint checkpoint;
  /// Validation MSE before training followed by one value per epoch.
  std::vector<double> validation_curve;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> validation_indices;
};

/// Deterministic 90/10 split of record indices.
void split_records(std::size_t count, const ApproximatorConfig& config,
                   std::vector<std::size_t>& train, std::vector<std::size_t>& validation);

TrainingReport train_approximator(const std::vector<planner::DatasetRecord>& records,
                                  const ApproximatorConfig& config);

class LearnedProvider final : public SubGoalProvider {
 public:
  explicit LearnedProvider(Checkpoint ckpt);
  SubGoalPrediction predict(const SubGoalQuery& query) const override;
  std::string name() const override { return "learned"; }
  const Checkpoint& checkpoint() const { return ckpt_; }

 private:
  Checkpoint ckpt_;
  SubGoalNet net_;
  BaselineProvider baseline_;
};

struct ProviderEvaluation {
  std::size_t records = 0;
  std::size_t exact_matches = 0;
  /// Per record: mean distance over the three sub-goals.
  double median_error_m = 0.0;
  double mean_error_m = 0.0;
  double median_latency_s = 0.0;
};

/// Error of `provider` against the stored sub-goals. Empty `indices` means
/// every record.
ProviderEvaluation evaluate_provider(const SubGoalProvider& provider,
                                     const std::vector<planner::DatasetRecord>& records,
                                     const std::vector<std::size_t>& indices = {});

}  // namespace ddpen::subgoal

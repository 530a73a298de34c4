#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "errsim/dataset.hpp"

namespace errsim {

/// Per-feature z-score statistics. Degenerate features (zero spread) keep
/// their mean and get a standard deviation of 1, so normalize/denormalize is
/// always an exact round trip.
struct Normalizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;

  static Normalizer fit(std::span<const Eigen::VectorXd> samples);

  Eigen::VectorXd normalize(const Eigen::VectorXd& x) const {
    return (x - mean).cwiseQuotient(stddev);
  }
  Eigen::VectorXd denormalize(const Eigen::VectorXd& x) const {
    return x.cwiseProduct(stddev) + mean;
  }
};

/// Fully connected ReLU network with a linear output layer, operating in
/// normalized feature/target space.
struct MlpModel {
  std::vector<int> layer_sizes;             // [input, hidden..., 6]
  std::vector<Eigen::MatrixXd> weights;     // weights[l]: sizes[l+1] x sizes[l]
  std::vector<Eigen::VectorXd> biases;
  Normalizer input_norm;
  Normalizer target_norm;
  Encoding encoding = Encoding::OC;
  NetRole role = NetRole::NN1;
  std::uint64_t seed = 0;

  /// Forward pass in normalized space.
  Eigen::VectorXd forward_normalized(const Eigen::VectorXd& x) const;

  /// Normalizes the raw input, runs the network, denormalizes the output.
  /// Throws std::invalid_argument on an input width mismatch.
  JointVector predict(const Eigen::VectorXd& input) const;

  /// Shape consistency between layer_sizes, weights and biases.
  void check_shapes() const;
};

/// He-uniform initialized model. layer_sizes must start at the encoding's
/// feature width and end at 6.
MlpModel make_mlp(std::vector<int> layer_sizes, Encoding encoding, NetRole role,
                  std::uint64_t seed);

struct TrainConfig {
  int batch_size = 32;
  double learning_rate = 0.0064;
  int epochs = 500;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double val_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct EpochLoss {
  double train_mse = 0.0;
  double val_mse = 0.0;
};

struct TrainResult {
  MlpModel model;  // weights of the best-validation epoch
  std::vector<EpochLoss> history;
  double best_val_mse = 0.0;
  int best_epoch = -1;
};

/// Mini-batch Adam on the MSE loss in normalized space. The split, the
/// shuffle stream and the weight init all derive from cfg.seed, so results
/// are bit-reproducible. Normalizers are fit on the training split only.
/// Throws std::invalid_argument on bad configuration and std::runtime_error
/// when the loss stops being finite.
TrainResult mlp_train(const ErrorDataset& dataset, const std::vector<int>& hidden_layers,
                      const TrainConfig& cfg);

/// Compares analytic gradients against central finite differences
/// (h = 1e-5) over every parameter, on the MSE loss of the given samples.
/// Returns the maximum relative error.
double grad_check(const MlpModel& model, std::span<const Eigen::VectorXd> inputs,
                  std::span<const JointVector> targets);

}  // namespace errsim

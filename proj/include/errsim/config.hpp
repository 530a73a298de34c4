#pragma once

#include <filesystem>
#include <string>

#include "errsim/search.hpp"
#include "errsim/twin.hpp"

namespace errsim {

/// Twin parameters as stored in the configuration file. The true DH table is
/// materialized from the nominal one and the perturbation seed at load time.
struct TwinParams {
  DhPerturbation perturbation;
  JointVector controller_gains = JointVector::Zero();
  JointVector hysteresis_magnitude = JointVector::Zero();
  JointVector backlash_width = JointVector::Zero();
  JointVector noise_sigma_joint = JointVector::Zero();
  TrackerNoise tracker_noise;
  HandEyeSolution handeye_true;
  std::uint64_t noise_seed = 1;
};

struct TrainingParams {
  TrainConfig train;
  std::vector<int> hidden_layers = {16, 32};
  Encoding encoding = Encoding::CPE;
};

/// Everything a pipeline run needs, loaded from one JSON file.
struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  DhTable dh_nominal;
  TrajectoryOptions trajectory;
  TwinParams twin;
  TrainingParams training;
  SearchGrid search;
  int search_workers = 1;

  std::filesystem::path path_in_out(const std::string& name) const { return out_dir / name; }
};

/// Shipped defaults: the illustrative DH table, a 3684-step training
/// trajectory, twin error magnitudes producing a few millimeters of
/// uncorrected pose error, and the published training hyperparameters
/// (batch 32, learning rate 0.0064, hidden layers 16 and 32).
RunConfig default_run_config();

TwinConfig make_twin_config(const RunConfig& cfg);

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const std::filesystem::path& path, const RunConfig& cfg);

}  // namespace errsim

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "errsim/calibration.hpp"
#include "errsim/compare.hpp"
#include "errsim/mlp.hpp"
#include "errsim/search.hpp"

namespace errsim::io {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary file and renames, so a failed write never
/// leaves a partial artifact behind.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// ---- JSON fragments shared by several file formats ----

nlohmann::json pose_to_json(const Pose& p);
Pose pose_from_json(const nlohmann::json& j);

nlohmann::json dh_to_json(const DhTable& dh);
DhTable dh_from_json(const nlohmann::json& j);

nlohmann::json handeye_to_json(const HandEyeSolution& sol);
HandEyeSolution handeye_from_json(const nlohmann::json& j);

// ---- Whole files ----

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// Dataset rows:
/// k, s1_q1..s1_q6, m1_q1..m1_q6, a1_qw,a1_qx,a1_qy,a1_qz,a1_tx,a1_ty,a1_tz,
/// otm_qw,otm_qx,otm_qy,otm_qz,otm_tx,otm_ty,otm_tz
/// Poses are unit quaternion (w, x, y, z) + translation in meters; the
/// quaternion is renormalized on load and rejected if off-unit by > 1e-6.
void write_dataset_csv(const std::filesystem::path& path,
                       std::span<const StepRecord> records);
std::vector<StepRecord> read_dataset_csv(const std::filesystem::path& path);

/// Ground-truth sidecar, excluded from training: per-step true actual pose
/// and true actual joints.
void write_truth_csv(const std::filesystem::path& path,
                     std::span<const StepRecord> records);
void write_truth_json(const std::filesystem::path& path, const HandEyeSolution& handeye_true,
                      const DhTable& dh_true);

void write_calibration_json(const std::filesystem::path& path, const HandEyeSolution& sol,
                            std::size_t n_observations);
HandEyeSolution read_calibration_json(const std::filesystem::path& path);

void write_model_json(const std::filesystem::path& path, const MlpModel& model);
MlpModel read_model_json(const std::filesystem::path& path);

void write_history_csv(const std::filesystem::path& path,
                       std::span<const EpochLoss> history);

void write_injection_csv(const std::filesystem::path& path,
                         std::span<const InjectionResult> results);
std::vector<InjectionResult> read_injection_csv(const std::filesystem::path& path);

void write_search_results_csv(const std::filesystem::path& path,
                              std::span<const SearchCellResult> ranked);

/// Per-step error distances in mm / deg.
void write_report_csv(const std::filesystem::path& path, const ComparisonReport& rep);
/// Aligned plain-text summary table (mean/std/median/max, with and without
/// injection).
void write_summary_text(const std::filesystem::path& path, const ComparisonReport& rep);
void write_ks_csv(const std::filesystem::path& path, const ComparisonReport& rep);
/// Histogram bin data per layer/joint for external plotting.
void write_histograms_csv(const std::filesystem::path& path, const ComparisonReport& rep,
                          int bins = 40);

}  // namespace errsim::io

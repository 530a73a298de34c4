#pragma once

#include <optional>

#include "errsim/config.hpp"
#include "errsim/io.hpp"

namespace errsim {

/// Library-level implementations of the CLI subcommands. Every command
/// validates its inputs fully before writing any output file and returns the
/// in-memory result for callers that keep processing.

void cmd_default_config(const std::filesystem::path& out_path);

Trajectory cmd_gen_traj(const RunConfig& cfg, const std::filesystem::path& out_path,
                        std::optional<std::uint64_t> seed_override = {},
                        std::optional<std::size_t> steps_override = {},
                        std::optional<int> goals_override = {});

/// Runs the twin over a trajectory file. Writes the training-visible dataset
/// plus the ground-truth sidecar files (per-step truth CSV and a JSON with
/// the true hand-eye transforms and true DH table).
std::vector<StepRecord> cmd_simulate(const RunConfig& cfg,
                                     const std::filesystem::path& trajectory_path,
                                     const std::filesystem::path& dataset_out,
                                     const std::filesystem::path& truth_csv_out,
                                     const std::filesystem::path& truth_json_out);

HandEyeSolution cmd_calibrate(const RunConfig& cfg,
                              const std::filesystem::path& dataset_path,
                              const std::filesystem::path& out_json);

TrainResult cmd_train(const RunConfig& cfg, const std::filesystem::path& dataset_path,
                      NetRole role, const std::filesystem::path& model_out,
                      const std::filesystem::path& history_out,
                      std::optional<Encoding> encoding_override = {},
                      std::optional<int> epochs_override = {});

std::vector<InjectionResult> cmd_inject(const RunConfig& cfg,
                                        const std::filesystem::path& nn1_path,
                                        const std::filesystem::path& nn2_path,
                                        const std::filesystem::path& trajectory_path,
                                        const std::filesystem::path& out_csv);

/// Compares a physical dataset against injection results for the same
/// setpoints and writes report.csv, summary.txt, ks.csv and histograms.csv
/// into report_dir.
ComparisonReport cmd_evaluate(const RunConfig& cfg,
                              const std::filesystem::path& dataset_path,
                              const std::filesystem::path& injection_path,
                              const std::filesystem::path& report_dir);

std::vector<SearchCellResult> cmd_search(const RunConfig& cfg,
                                         const std::filesystem::path& dataset_path,
                                         NetRole role,
                                         const std::filesystem::path& results_out,
                                         const std::filesystem::path& curves_dir);

}  // namespace errsim

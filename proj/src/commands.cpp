#include "errsim/commands.hpp"

#include <stdexcept>

namespace errsim {

void cmd_default_config(const std::filesystem::path& out_path) {
  save_run_config(out_path, default_run_config());
}

Trajectory cmd_gen_traj(const RunConfig& cfg, const std::filesystem::path& out_path,
                        std::optional<std::uint64_t> seed_override,
                        std::optional<std::size_t> steps_override,
                        std::optional<int> goals_override) {
  TrajectoryOptions opts = cfg.trajectory;
  opts.seed = seed_override.value_or(cfg.seed);
  if (steps_override) opts.max_steps = *steps_override;
  if (goals_override) opts.n_goals = *goals_override;
  const Trajectory traj = generate_trajectory(cfg.dh_nominal, opts);
  io::write_trajectory_csv(out_path, traj);
  return traj;
}

std::vector<StepRecord> cmd_simulate(const RunConfig& cfg,
                                     const std::filesystem::path& trajectory_path,
                                     const std::filesystem::path& dataset_out,
                                     const std::filesystem::path& truth_csv_out,
                                     const std::filesystem::path& truth_json_out) {
  const Trajectory traj = io::read_trajectory_csv(trajectory_path);
  const TwinConfig twin_cfg = make_twin_config(cfg);
  for (std::size_t k = 0; k < traj.setpoints.size(); ++k) {
    if (!twin_cfg.dh_nominal.within_limits(traj.setpoints[k])) {
      throw std::invalid_argument("simulate: trajectory step " + std::to_string(k) +
                                  " violates the joint limits");
    }
  }

  PhysicalTwin twin(twin_cfg);
  const std::vector<StepRecord> records = twin.run_collection(traj);

  io::write_dataset_csv(dataset_out, records);
  io::write_truth_csv(truth_csv_out, records);
  io::write_truth_json(truth_json_out, twin_cfg.handeye_true, twin_cfg.dh_true);
  return records;
}

namespace {

std::vector<MarkerObservation> observations_from_records(
    const RunConfig& cfg, std::span<const StepRecord> records) {
  std::vector<MarkerObservation> obs;
  obs.reserve(records.size());
  for (const StepRecord& rec : records) {
    obs.push_back({forward_kinematics(cfg.dh_nominal, rec.measured_q), rec.tracker_marker});
  }
  return obs;
}

}  // namespace

HandEyeSolution cmd_calibrate(const RunConfig& cfg,
                              const std::filesystem::path& dataset_path,
                              const std::filesystem::path& out_json) {
  const std::vector<StepRecord> records = io::read_dataset_csv(dataset_path);
  const auto obs = observations_from_records(cfg, records);
  const HandEyeSolution sol = solve_hand_eye(obs);
  io::write_calibration_json(out_json, sol, obs.size());
  return sol;
}

TrainResult cmd_train(const RunConfig& cfg, const std::filesystem::path& dataset_path,
                      NetRole role, const std::filesystem::path& model_out,
                      const std::filesystem::path& history_out,
                      std::optional<Encoding> encoding_override,
                      std::optional<int> epochs_override) {
  std::vector<StepRecord> records = io::read_dataset_csv(dataset_path);
  const Encoding encoding = encoding_override.value_or(cfg.training.encoding);

  const ErrorDataset ds = build_dataset(records, role, encoding, cfg.dh_nominal);
  TrainConfig tc = cfg.training.train;
  if (epochs_override) tc.epochs = *epochs_override;
  // Distinct but reproducible streams for the two networks.
  tc.seed = cfg.seed + (role == NetRole::NN1 ? 0 : 1);

  TrainResult result = mlp_train(ds, cfg.training.hidden_layers, tc);
  io::write_model_json(model_out, result.model);
  io::write_history_csv(history_out, result.history);
  return result;
}

std::vector<InjectionResult> cmd_inject(const RunConfig& cfg,
                                        const std::filesystem::path& nn1_path,
                                        const std::filesystem::path& nn2_path,
                                        const std::filesystem::path& trajectory_path,
                                        const std::filesystem::path& out_csv) {
  const MlpModel nn1 = io::read_model_json(nn1_path);
  const MlpModel nn2 = io::read_model_json(nn2_path);
  const Trajectory traj = io::read_trajectory_csv(trajectory_path);
  const std::vector<InjectionResult> results = inject(nn1, nn2, traj, cfg.dh_nominal);
  io::write_injection_csv(out_csv, results);
  return results;
}

ComparisonReport cmd_evaluate(const RunConfig& cfg,
                              const std::filesystem::path& dataset_path,
                              const std::filesystem::path& injection_path,
                              const std::filesystem::path& report_dir) {
  std::vector<StepRecord> records = io::read_dataset_csv(dataset_path);
  const std::vector<InjectionResult> injected = io::read_injection_csv(injection_path);
  populate_actual_joints(records, cfg.dh_nominal);

  const ComparisonReport rep = compare(records, injected, cfg.dh_nominal);
  io::write_report_csv(report_dir / "report.csv", rep);
  io::write_summary_text(report_dir / "summary.txt", rep);
  io::write_ks_csv(report_dir / "ks.csv", rep);
  io::write_histograms_csv(report_dir / "histograms.csv", rep);
  return rep;
}

std::vector<SearchCellResult> cmd_search(const RunConfig& cfg,
                                         const std::filesystem::path& dataset_path,
                                         NetRole role,
                                         const std::filesystem::path& results_out,
                                         const std::filesystem::path& curves_dir) {
  const std::vector<StepRecord> records = io::read_dataset_csv(dataset_path);
  const std::vector<SearchCellResult> ranked =
      hyperparameter_search(records, role, cfg.search, cfg.dh_nominal, cfg.seed,
                            cfg.search_workers);
  io::write_search_results_csv(results_out, ranked);
  for (const SearchCellResult& cell : ranked) {
    if (!cell.failed) {
      io::write_history_csv(curves_dir / ("cell_" + std::to_string(cell.cell_index) + ".csv"),
                            cell.history);
    }
  }
  return ranked;
}

}  // namespace errsim

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "errsim/commands.hpp"

namespace {

using namespace errsim;

struct GlobalArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

RunConfig load_config(const GlobalArgs& g) {
  RunConfig cfg = g.config_path.empty() ? default_run_config() : load_run_config(g.config_path);
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

std::string out_or(const std::string& out, const RunConfig& cfg, const std::string& name) {
  return out.empty() ? cfg.path_in_out(name).string() : out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned error injection for a simulated 6-joint robot"};
  app.require_subcommand(1);

  GlobalArgs global;
  app.add_option("--config", global.config_path, "Run configuration JSON (defaults used if omitted)");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Override the global seed");

  std::string out;

  auto* c_default = app.add_subcommand("default-config", "Write the default configuration file");
  c_default->add_option("--out", out, "Output path (default config.json)");

  auto* c_traj = app.add_subcommand("gen-traj", "Generate a random joint-space trajectory");
  std::size_t traj_steps = 0;
  int traj_goals = 0;
  c_traj->add_option("--out", out, "Output CSV");
  auto* steps_opt = c_traj->add_option("--steps", traj_steps, "Cap the number of steps");
  auto* goals_opt = c_traj->add_option("--goals", traj_goals, "Number of random goals");

  auto* c_sim = app.add_subcommand("simulate", "Run the synthetic physical robot over a trajectory");
  std::string traj_path, dataset_path, truth_csv, truth_json;
  c_sim->add_option("--trajectory", traj_path, "Trajectory CSV");
  c_sim->add_option("--out", out, "Dataset CSV output");
  c_sim->add_option("--truth-csv", truth_csv, "Ground-truth sidecar CSV output");
  c_sim->add_option("--truth-json", truth_json, "Ground-truth transforms JSON output");

  auto* c_calib = app.add_subcommand("calibrate", "Fit the hand-eye transforms from a dataset");
  c_calib->add_option("--dataset", dataset_path, "Dataset CSV");
  c_calib->add_option("--out", out, "Calibration JSON output");

  auto* c_train = app.add_subcommand("train", "Train an error network from a dataset");
  std::string role_str = "NN1", encoding_str;
  int train_epochs = 0;
  c_train->add_option("--dataset", dataset_path, "Dataset CSV");
  c_train->add_option("--role", role_str, "NN1 (measured-setpoint) or NN2 (actual-measured)")
      ->check(CLI::IsMember({"NN1", "NN2"}));
  auto* enc_opt = c_train->add_option("--encoding", encoding_str, "OC, CP or CPE")
                      ->check(CLI::IsMember({"OC", "CP", "CPE"}));
  auto* epochs_opt = c_train->add_option("--epochs", train_epochs, "Override the epoch budget");
  c_train->add_option("--out", out, "Model JSON output");
  std::string history_path;
  c_train->add_option("--history", history_path, "Loss history CSV output");

  auto* c_inject = app.add_subcommand("inject", "Apply three-stage error injection to setpoints");
  std::string nn1_path, nn2_path;
  c_inject->add_option("--nn1", nn1_path, "NN1 model JSON");
  c_inject->add_option("--nn2", nn2_path, "NN2 model JSON");
  c_inject->add_option("--trajectory", traj_path, "Setpoint trajectory CSV");
  c_inject->add_option("--out", out, "Injection results CSV output");

  auto* c_eval = app.add_subcommand("evaluate", "Compare physical and injected trajectories");
  std::string injection_path, report_dir;
  c_eval->add_option("--dataset", dataset_path, "Physical dataset CSV");
  c_eval->add_option("--injection", injection_path, "Injection results CSV");
  c_eval->add_option("--report-dir", report_dir, "Report output directory");

  auto* c_search = app.add_subcommand("search", "Hyperparameter grid search");
  std::string curves_dir;
  c_search->add_option("--dataset", dataset_path, "Dataset CSV");
  c_search->add_option("--role", role_str, "NN1 or NN2")->check(CLI::IsMember({"NN1", "NN2"}));
  c_search->add_option("--out", out, "Ranked results CSV output");
  c_search->add_option("--curves-dir", curves_dir, "Directory for per-cell loss curves");

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) global.seed = seed_value;

  try {
    if (*c_default) {
      cmd_default_config(out.empty() ? "config.json" : out);
      std::cout << "wrote " << (out.empty() ? "config.json" : out) << "\n";
      return 0;
    }

    const RunConfig cfg = load_config(global);

    if (*c_traj) {
      const std::string path = out_or(out, cfg, "trajectory.csv");
      const Trajectory t = cmd_gen_traj(
          cfg, path,
          global.seed ? std::optional<std::uint64_t>(*global.seed) : std::nullopt,
          *steps_opt ? std::optional<std::size_t>(traj_steps) : std::nullopt,
          *goals_opt ? std::optional<int>(traj_goals) : std::nullopt);
      std::cout << "wrote " << path << " (" << t.setpoints.size() << " steps)\n";
    } else if (*c_sim) {
      const std::string traj = out_or(traj_path, cfg, "trajectory.csv");
      const std::string ds = out_or(out, cfg, "dataset.csv");
      const std::string tc = out_or(truth_csv, cfg, "dataset.truth.csv");
      const std::string tj = out_or(truth_json, cfg, "dataset.truth.json");
      const auto records = cmd_simulate(cfg, traj, ds, tc, tj);
      std::cout << "wrote " << ds << " (" << records.size() << " records)\n";
    } else if (*c_calib) {
      const std::string ds = out_or(dataset_path, cfg, "dataset.csv");
      const std::string path = out_or(out, cfg, "calibration.json");
      const HandEyeSolution sol = cmd_calibrate(cfg, ds, path);
      std::cout << "wrote " << path << " (residual " << sol.residual_trans * 1e3 << " mm, "
                << sol.residual_rot * 180.0 / 3.14159265358979323846 << " deg)\n";
    } else if (*c_train) {
      const NetRole role = role_from_string(role_str);
      const std::string ds = out_or(dataset_path, cfg, "dataset.csv");
      const std::string model_name = role == NetRole::NN1 ? "nn1.json" : "nn2.json";
      const std::string hist_name =
          role == NetRole::NN1 ? "nn1_history.csv" : "nn2_history.csv";
      const std::string model_path = out_or(out, cfg, model_name);
      const std::string hist_path = out_or(history_path, cfg, hist_name);
      const TrainResult r = cmd_train(
          cfg, ds, role, model_path, hist_path,
          *enc_opt ? std::optional<Encoding>(encoding_from_string(encoding_str)) : std::nullopt,
          *epochs_opt ? std::optional<int>(train_epochs) : std::nullopt);
      std::cout << "wrote " << model_path << " (best val MSE " << r.best_val_mse << " at epoch "
                << r.best_epoch << ")\n";
    } else if (*c_inject) {
      const std::string n1 = out_or(nn1_path, cfg, "nn1.json");
      const std::string n2 = out_or(nn2_path, cfg, "nn2.json");
      const std::string traj = out_or(traj_path, cfg, "test_trajectory.csv");
      const std::string path = out_or(out, cfg, "injection.csv");
      const auto results = cmd_inject(cfg, n1, n2, traj, path);
      std::size_t clamped = 0;
      for (const auto& r : results) clamped += r.clamped ? 1 : 0;
      std::cout << "wrote " << path << " (" << results.size() << " steps, " << clamped
                << " clamped)\n";
    } else if (*c_eval) {
      const std::string ds = out_or(dataset_path, cfg, "test_dataset.csv");
      const std::string inj = out_or(injection_path, cfg, "injection.csv");
      const std::string dir = report_dir.empty() ? cfg.path_in_out("report").string() : report_dir;
      const ComparisonReport rep = cmd_evaluate(cfg, ds, inj, dir);
      std::cout << "wrote " << dir << " (mean E_T " << rep.stats_et_injected.mean * 1e3
                << " mm injected vs " << rep.stats_et_baseline.mean * 1e3 << " mm baseline)\n";
    } else if (*c_search) {
      const NetRole role = role_from_string(role_str);
      const std::string ds = out_or(dataset_path, cfg, "dataset.csv");
      const std::string path = out_or(out, cfg, "search_results.csv");
      const std::string curves =
          curves_dir.empty() ? cfg.path_in_out("search_curves").string() : curves_dir;
      const auto ranked = cmd_search(cfg, ds, role, path, curves);
      std::cout << "wrote " << path << " (" << ranked.size() << " cells)\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "errsim/config.hpp"

#include <nlohmann/json.hpp>

#include "errsim/io.hpp"

namespace errsim {

namespace {

using nlohmann::json;

json joints_to_json(const JointVector& v) {
  json arr = json::array();
  for (int i = 0; i < kNumJoints; ++i) arr.push_back(v[i]);
  return arr;
}

JointVector joints_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != kNumJoints) {
    throw io::IoError("config: '" + name + "' must be an array of 6 numbers");
  }
  JointVector v;
  for (int i = 0; i < kNumJoints; ++i) v[i] = j.at(i).get<double>();
  return v;
}

}  // namespace

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.seed = 101;
  cfg.out_dir = "out";
  cfg.dh_nominal = default_dh_table();

  cfg.trajectory.n_goals = 90;
  cfg.trajectory.max_steps = 3684;
  cfg.trajectory.interpolation_step << 0.02, 0.015, 0.004, 0.035, 0.03, 0.03;
  // Keeps every estimated actual pose reachable inside the limits after the
  // injected error layers (worst-case insertion error is ~5 mm against a
  // 12 mm margin on the prismatic joint).
  cfg.trajectory.goal_margin = 0.05;

  cfg.twin.noise_seed = 11;
  cfg.twin.perturbation = {8e-4, 8e-4, 0.007, 0.007, 7};
  cfg.twin.controller_gains << 0.012, 0.012, 0.025, 0.035, 0.035, 0.035;
  cfg.twin.hysteresis_magnitude << 0.006, 0.006, 0.0016, 0.014, 0.014, 0.014;
  cfg.twin.backlash_width << 0.004, 0.004, 0.0008, 0.008, 0.008, 0.008;
  cfg.twin.noise_sigma_joint << 3e-5, 3e-5, 1e-5, 5e-5, 5e-5, 5e-5;
  cfg.twin.tracker_noise = {5e-5, 2e-4};
  cfg.twin.handeye_true.gripper_marker =
      rot_z(0.4) * rot_x(-0.3) * translate({0.012, -0.008, 0.035});
  cfg.twin.handeye_true.tracker_robot =
      rot_y(2.4) * rot_z(0.5) * translate({0.75, -0.10, 0.42});

  cfg.training.train.batch_size = 32;
  cfg.training.train.learning_rate = 0.0064;
  cfg.training.train.epochs = 500;
  cfg.training.train.val_fraction = 0.2;
  cfg.training.hidden_layers = {16, 32};
  cfg.training.encoding = Encoding::CPE;

  cfg.search.batch_sizes = {32};
  cfg.search.learning_rates = {0.0064};
  cfg.search.architectures = {{16}, {16, 32}, {32, 32}};
  cfg.search.encodings = {Encoding::OC, Encoding::CP, Encoding::CPE};
  cfg.search.epochs = 150;
  cfg.search.val_fraction = 0.2;
  cfg.search_workers = 1;
  return cfg;
}

TwinConfig make_twin_config(const RunConfig& cfg) {
  TwinConfig twin;
  twin.dh_nominal = cfg.dh_nominal;
  twin.dh_true = perturb_dh(cfg.dh_nominal, cfg.twin.perturbation);
  twin.controller_gains = cfg.twin.controller_gains;
  twin.hysteresis_magnitude = cfg.twin.hysteresis_magnitude;
  twin.backlash_width = cfg.twin.backlash_width;
  twin.noise_sigma_joint = cfg.twin.noise_sigma_joint;
  twin.tracker_noise = cfg.twin.tracker_noise;
  twin.handeye_true = cfg.twin.handeye_true;
  twin.noise_seed = cfg.twin.noise_seed;
  twin.validate();
  return twin;
}

void save_run_config(const std::filesystem::path& path, const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir.string();
  j["dh_nominal"] = io::dh_to_json(cfg.dh_nominal);
  j["trajectory"] = {{"n_goals", cfg.trajectory.n_goals},
                     {"max_steps", cfg.trajectory.max_steps},
                     {"interpolation_step", joints_to_json(cfg.trajectory.interpolation_step)},
                     {"goal_margin", cfg.trajectory.goal_margin}};
  j["twin"] = {
      {"noise_seed", cfg.twin.noise_seed},
      {"perturbation",
       {{"a_m", cfg.twin.perturbation.a},
        {"d_m", cfg.twin.perturbation.d},
        {"alpha_rad", cfg.twin.perturbation.alpha},
        {"theta_rad", cfg.twin.perturbation.theta},
        {"seed", cfg.twin.perturbation.seed}}},
      {"controller_gains", joints_to_json(cfg.twin.controller_gains)},
      {"hysteresis_magnitude", joints_to_json(cfg.twin.hysteresis_magnitude)},
      {"backlash_width", joints_to_json(cfg.twin.backlash_width)},
      {"noise_sigma_joint", joints_to_json(cfg.twin.noise_sigma_joint)},
      {"tracker_noise",
       {{"sigma_t_m", cfg.twin.tracker_noise.sigma_t},
        {"sigma_r_rad", cfg.twin.tracker_noise.sigma_r}}},
      {"handeye_true", io::handeye_to_json(cfg.twin.handeye_true)}};
  j["training"] = {{"batch_size", cfg.training.train.batch_size},
                   {"learning_rate", cfg.training.train.learning_rate},
                   {"epochs", cfg.training.train.epochs},
                   {"adam_beta1", cfg.training.train.adam_beta1},
                   {"adam_beta2", cfg.training.train.adam_beta2},
                   {"adam_eps", cfg.training.train.adam_eps},
                   {"val_fraction", cfg.training.train.val_fraction},
                   {"hidden_layers", cfg.training.hidden_layers},
                   {"encoding", to_string(cfg.training.encoding)}};
  json encodings = json::array();
  for (Encoding e : cfg.search.encodings) encodings.push_back(to_string(e));
  j["search"] = {{"batch_sizes", cfg.search.batch_sizes},
                 {"learning_rates", cfg.search.learning_rates},
                 {"architectures", cfg.search.architectures},
                 {"encodings", std::move(encodings)},
                 {"epochs", cfg.search.epochs},
                 {"val_fraction", cfg.search.val_fraction},
                 {"workers", cfg.search_workers}};
  io::atomic_write(path, j.dump(2) + "\n");
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const json j = json::parse(io::read_file(path));
  RunConfig cfg = default_run_config();

  cfg.seed = j.value("seed", cfg.seed);
  cfg.out_dir = j.value("out_dir", cfg.out_dir.string());
  if (j.contains("dh_nominal")) cfg.dh_nominal = io::dh_from_json(j.at("dh_nominal"));

  if (j.contains("trajectory")) {
    const json& t = j.at("trajectory");
    cfg.trajectory.n_goals = t.value("n_goals", cfg.trajectory.n_goals);
    cfg.trajectory.max_steps = t.value("max_steps", cfg.trajectory.max_steps);
    if (t.contains("interpolation_step")) {
      cfg.trajectory.interpolation_step =
          joints_from_json(t.at("interpolation_step"), "trajectory.interpolation_step");
    }
    cfg.trajectory.goal_margin = t.value("goal_margin", cfg.trajectory.goal_margin);
  }

  if (j.contains("twin")) {
    const json& t = j.at("twin");
    cfg.twin.noise_seed = t.value("noise_seed", cfg.twin.noise_seed);
    if (t.contains("perturbation")) {
      const json& p = t.at("perturbation");
      cfg.twin.perturbation.a = p.value("a_m", cfg.twin.perturbation.a);
      cfg.twin.perturbation.d = p.value("d_m", cfg.twin.perturbation.d);
      cfg.twin.perturbation.alpha = p.value("alpha_rad", cfg.twin.perturbation.alpha);
      cfg.twin.perturbation.theta = p.value("theta_rad", cfg.twin.perturbation.theta);
      cfg.twin.perturbation.seed = p.value("seed", cfg.twin.perturbation.seed);
    }
    if (t.contains("controller_gains")) {
      cfg.twin.controller_gains = joints_from_json(t.at("controller_gains"), "controller_gains");
    }
    if (t.contains("hysteresis_magnitude")) {
      cfg.twin.hysteresis_magnitude =
          joints_from_json(t.at("hysteresis_magnitude"), "hysteresis_magnitude");
    }
    if (t.contains("backlash_width")) {
      cfg.twin.backlash_width = joints_from_json(t.at("backlash_width"), "backlash_width");
    }
    if (t.contains("noise_sigma_joint")) {
      cfg.twin.noise_sigma_joint =
          joints_from_json(t.at("noise_sigma_joint"), "noise_sigma_joint");
    }
    if (t.contains("tracker_noise")) {
      cfg.twin.tracker_noise.sigma_t = t.at("tracker_noise").value("sigma_t_m", 0.0);
      cfg.twin.tracker_noise.sigma_r = t.at("tracker_noise").value("sigma_r_rad", 0.0);
    }
    if (t.contains("handeye_true")) {
      cfg.twin.handeye_true = io::handeye_from_json(t.at("handeye_true"));
    }
  }

  if (j.contains("training")) {
    const json& t = j.at("training");
    cfg.training.train.batch_size = t.value("batch_size", cfg.training.train.batch_size);
    cfg.training.train.learning_rate = t.value("learning_rate", cfg.training.train.learning_rate);
    cfg.training.train.epochs = t.value("epochs", cfg.training.train.epochs);
    cfg.training.train.adam_beta1 = t.value("adam_beta1", cfg.training.train.adam_beta1);
    cfg.training.train.adam_beta2 = t.value("adam_beta2", cfg.training.train.adam_beta2);
    cfg.training.train.adam_eps = t.value("adam_eps", cfg.training.train.adam_eps);
    cfg.training.train.val_fraction = t.value("val_fraction", cfg.training.train.val_fraction);
    if (t.contains("hidden_layers")) {
      cfg.training.hidden_layers = t.at("hidden_layers").get<std::vector<int>>();
    }
    if (t.contains("encoding")) {
      cfg.training.encoding = encoding_from_string(t.at("encoding").get<std::string>());
    }
  }

  if (j.contains("search")) {
    const json& s = j.at("search");
    if (s.contains("batch_sizes")) cfg.search.batch_sizes = s.at("batch_sizes").get<std::vector<int>>();
    if (s.contains("learning_rates")) {
      cfg.search.learning_rates = s.at("learning_rates").get<std::vector<double>>();
    }
    if (s.contains("architectures")) {
      cfg.search.architectures = s.at("architectures").get<std::vector<std::vector<int>>>();
    }
    if (s.contains("encodings")) {
      cfg.search.encodings.clear();
      for (const auto& e : s.at("encodings")) {
        cfg.search.encodings.push_back(encoding_from_string(e.get<std::string>()));
      }
    }
    cfg.search.epochs = s.value("epochs", cfg.search.epochs);
    cfg.search.val_fraction = s.value("val_fraction", cfg.search.val_fraction);
    cfg.search_workers = s.value("workers", cfg.search_workers);
  }

  cfg.dh_nominal.validate();
  return cfg;
}

}  // namespace errsim

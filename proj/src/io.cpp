#include "errsim/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace errsim::io {

namespace {

using nlohmann::json;

double parse_double(std::string_view token, const std::string& context) {
  double v = 0.0;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw IoError(context + ": malformed number '" + std::string(token) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// Splits file content into lines, dropping a trailing empty line and '\r'.
std::vector<std::string_view> lines_of(std::string_view content) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t pos = content.find('\n', start);
    if (pos == std::string_view::npos) pos = content.size();
    std::string_view line = content.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
    start = pos + 1;
  }
  return out;
}

void append_pose(std::string& out, const Pose& p) {
  const Eigen::Vector4d q = quat_from_pose(p);
  for (int i = 0; i < 4; ++i) {
    out += ',';
    out += format_double(q[i]);
  }
  for (int i = 0; i < 3; ++i) {
    out += ',';
    out += format_double(p.translation[i]);
  }
}

Pose pose_from_tokens(std::span<const std::string_view> tokens, const std::string& ctx) {
  double vals[7];
  for (int i = 0; i < 7; ++i) vals[i] = parse_double(tokens[i], ctx);
  return pose_from_quat(vals[0], vals[1], vals[2], vals[3],
                        Eigen::Vector3d(vals[4], vals[5], vals[6]));
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw IoError("format_double failed");
  return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("read failed for " + path.string());
  return ss.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.good()) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

json pose_to_json(const Pose& p) {
  const Eigen::Vector4d q = quat_from_pose(p);
  return json{{"q", {q[0], q[1], q[2], q[3]}},
              {"t", {p.translation[0], p.translation[1], p.translation[2]}}};
}

Pose pose_from_json(const json& j) {
  const auto& q = j.at("q");
  const auto& t = j.at("t");
  return pose_from_quat(
      q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>(),
      q.at(3).get<double>(),
      Eigen::Vector3d(t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()));
}

json dh_to_json(const DhTable& dh) {
  json rows = json::array();
  for (const DhRow& r : dh.rows) {
    rows.push_back({{"a", r.a},
                    {"alpha", r.alpha},
                    {"d", r.d},
                    {"theta", r.theta},
                    {"kind", r.kind == JointKind::Prismatic ? "prismatic" : "revolute"},
                    {"lower", r.lower},
                    {"upper", r.upper}});
  }
  return rows;
}

DhTable dh_from_json(const json& j) {
  if (!j.is_array() || j.size() != kNumJoints) {
    throw IoError("dh table must be an array of 6 rows");
  }
  DhTable dh;
  for (int i = 0; i < kNumJoints; ++i) {
    const json& r = j.at(i);
    DhRow& row = dh.rows[static_cast<std::size_t>(i)];
    row.a = r.at("a").get<double>();
    row.alpha = r.at("alpha").get<double>();
    row.d = r.at("d").get<double>();
    row.theta = r.at("theta").get<double>();
    const std::string kind = r.at("kind").get<std::string>();
    if (kind == "prismatic") {
      row.kind = JointKind::Prismatic;
    } else if (kind == "revolute") {
      row.kind = JointKind::Revolute;
    } else {
      throw IoError("dh row " + std::to_string(i + 1) + ": unknown joint kind '" + kind + "'");
    }
    row.lower = r.at("lower").get<double>();
    row.upper = r.at("upper").get<double>();
  }
  dh.validate();
  return dh;
}

json handeye_to_json(const HandEyeSolution& sol) {
  return json{{"gripper_marker", pose_to_json(sol.gripper_marker)},
              {"tracker_robot", pose_to_json(sol.tracker_robot)},
              {"residual_rot_rad", sol.residual_rot},
              {"residual_trans_m", sol.residual_trans}};
}

HandEyeSolution handeye_from_json(const json& j) {
  HandEyeSolution sol;
  sol.gripper_marker = pose_from_json(j.at("gripper_marker"));
  sol.tracker_robot = pose_from_json(j.at("tracker_robot"));
  sol.residual_rot = j.value("residual_rot_rad", 0.0);
  sol.residual_trans = j.value("residual_trans_m", 0.0);
  return sol;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::string out = "# seed=" + std::to_string(traj.seed) + " step=";
  for (int i = 0; i < kNumJoints; ++i) {
    if (i) out += ',';
    out += format_double(traj.interpolation_step[i]);
  }
  out += "\nk,q1,q2,q3,q4,q5,q6\n";
  for (std::size_t k = 0; k < traj.setpoints.size(); ++k) {
    out += std::to_string(k);
    for (int i = 0; i < kNumJoints; ++i) {
      out += ',';
      out += format_double(traj.setpoints[k][i]);
    }
    out += '\n';
  }
  atomic_write(path, out);
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  const auto lines = lines_of(content);
  if (lines.size() < 2) throw IoError(path.string() + ": empty trajectory file");

  Trajectory traj;
  std::size_t first_row = 0;
  if (lines[0].starts_with("#")) {
    const std::string meta(lines[0].substr(1));
    const auto seed_pos = meta.find("seed=");
    const auto step_pos = meta.find("step=");
    if (seed_pos != std::string::npos) {
      traj.seed = std::stoull(meta.substr(seed_pos + 5));
    }
    if (step_pos != std::string::npos) {
      const auto tokens = split(std::string_view(meta).substr(step_pos + 5), ',');
      if (tokens.size() != kNumJoints) throw IoError(path.string() + ": bad step metadata");
      for (int i = 0; i < kNumJoints; ++i) {
        traj.interpolation_step[i] = parse_double(tokens[i], path.string());
      }
    }
    first_row = 1;
  }
  if (!lines[first_row].starts_with("k,")) {
    throw IoError(path.string() + ": missing trajectory header row");
  }
  for (std::size_t li = first_row + 1; li < lines.size(); ++li) {
    const auto tokens = split(lines[li], ',');
    if (tokens.size() != 1 + kNumJoints) {
      throw IoError(path.string() + ": bad column count on line " + std::to_string(li + 1));
    }
    JointVector q;
    for (int i = 0; i < kNumJoints; ++i) {
      q[i] = parse_double(tokens[1 + i], path.string());
    }
    traj.setpoints.push_back(q);
  }
  return traj;
}

namespace {

constexpr const char* kDatasetHeader =
    "k,s1_q1,s1_q2,s1_q3,s1_q4,s1_q5,s1_q6,"
    "m1_q1,m1_q2,m1_q3,m1_q4,m1_q5,m1_q6,"
    "a1_qw,a1_qx,a1_qy,a1_qz,a1_tx,a1_ty,a1_tz,"
    "otm_qw,otm_qx,otm_qy,otm_qz,otm_tx,otm_ty,otm_tz";

}  // namespace

void write_dataset_csv(const std::filesystem::path& path,
                       std::span<const StepRecord> records) {
  std::string out = kDatasetHeader;
  out += '\n';
  for (const StepRecord& rec : records) {
    out += std::to_string(rec.k);
    for (int i = 0; i < kNumJoints; ++i) {
      out += ',';
      out += format_double(rec.setpoint_q[i]);
    }
    for (int i = 0; i < kNumJoints; ++i) {
      out += ',';
      out += format_double(rec.measured_q[i]);
    }
    append_pose(out, rec.actual_pose);
    append_pose(out, rec.tracker_marker);
    out += '\n';
  }
  atomic_write(path, out);
}

std::vector<StepRecord> read_dataset_csv(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  const auto lines = lines_of(content);
  if (lines.empty() || !lines[0].starts_with("k,s1_q1")) {
    throw IoError(path.string() + ": not a dataset file (header mismatch)");
  }
  std::vector<StepRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto tokens = split(lines[li], ',');
    if (tokens.size() != 27) {
      throw IoError(path.string() + ": expected 27 columns on line " + std::to_string(li + 1));
    }
    const std::string ctx = path.string() + " line " + std::to_string(li + 1);
    StepRecord rec;
    rec.k = static_cast<std::size_t>(parse_double(tokens[0], ctx));
    for (int i = 0; i < kNumJoints; ++i) rec.setpoint_q[i] = parse_double(tokens[1 + i], ctx);
    for (int i = 0; i < kNumJoints; ++i) rec.measured_q[i] = parse_double(tokens[7 + i], ctx);
    rec.actual_pose = pose_from_tokens(std::span(tokens).subspan(13, 7), ctx);
    rec.tracker_marker = pose_from_tokens(std::span(tokens).subspan(20, 7), ctx);
    records.push_back(std::move(rec));
  }
  return records;
}

void write_truth_csv(const std::filesystem::path& path,
                     std::span<const StepRecord> records) {
  std::string out =
      "k,ta_qw,ta_qx,ta_qy,ta_qz,ta_tx,ta_ty,ta_tz,tq1,tq2,tq3,tq4,tq5,tq6\n";
  for (const StepRecord& rec : records) {
    if (!rec.true_actual_pose || !rec.true_actual_q) {
      throw IoError("write_truth_csv: record " + std::to_string(rec.k) +
                    " has no ground truth");
    }
    out += std::to_string(rec.k);
    append_pose(out, *rec.true_actual_pose);
    for (int i = 0; i < kNumJoints; ++i) {
      out += ',';
      out += format_double((*rec.true_actual_q)[i]);
    }
    out += '\n';
  }
  atomic_write(path, out);
}

void write_truth_json(const std::filesystem::path& path, const HandEyeSolution& handeye_true,
                      const DhTable& dh_true) {
  json j{{"handeye_true", handeye_to_json(handeye_true)}, {"dh_true", dh_to_json(dh_true)}};
  atomic_write(path, j.dump(2) + "\n");
}

void write_calibration_json(const std::filesystem::path& path, const HandEyeSolution& sol,
                            std::size_t n_observations) {
  json j = handeye_to_json(sol);
  j["n_observations"] = n_observations;
  atomic_write(path, j.dump(2) + "\n");
}

HandEyeSolution read_calibration_json(const std::filesystem::path& path) {
  return handeye_from_json(json::parse(read_file(path)));
}

void write_model_json(const std::filesystem::path& path, const MlpModel& model) {
  model.check_shapes();
  json j;
  j["layer_sizes"] = model.layer_sizes;
  json weights = json::array();
  for (const Eigen::MatrixXd& w : model.weights) {
    json flat = json::array();  // row-major
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
    }
    weights.push_back(std::move(flat));
  }
  j["weights"] = std::move(weights);
  json biases = json::array();
  for (const Eigen::VectorXd& b : model.biases) biases.push_back(vector_to_json(b));
  j["biases"] = std::move(biases);
  j["input_normalizer"] = {{"mean", vector_to_json(model.input_norm.mean)},
                           {"std", vector_to_json(model.input_norm.stddev)}};
  j["target_normalizer"] = {{"mean", vector_to_json(model.target_norm.mean)},
                            {"std", vector_to_json(model.target_norm.stddev)}};
  j["encoding"] = to_string(model.encoding);
  j["role"] = to_string(model.role);
  j["seed"] = model.seed;
  atomic_write(path, j.dump(2) + "\n");
}

MlpModel read_model_json(const std::filesystem::path& path) {
  const json j = json::parse(read_file(path));
  MlpModel m;
  m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  const json& weights = j.at("weights");
  const json& biases = j.at("biases");
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    const int rows = m.layer_sizes[l + 1];
    const int cols = m.layer_sizes[l];
    const json& flat = weights.at(l);
    if (flat.size() != static_cast<std::size_t>(rows * cols)) {
      throw IoError(path.string() + ": weight size mismatch at layer " + std::to_string(l));
    }
    Eigen::MatrixXd w(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) w(r, c) = flat.at(static_cast<std::size_t>(r * cols + c));
    }
    m.weights.push_back(std::move(w));
    m.biases.push_back(vector_from_json(biases.at(l)));
  }
  m.input_norm.mean = vector_from_json(j.at("input_normalizer").at("mean"));
  m.input_norm.stddev = vector_from_json(j.at("input_normalizer").at("std"));
  m.target_norm.mean = vector_from_json(j.at("target_normalizer").at("mean"));
  m.target_norm.stddev = vector_from_json(j.at("target_normalizer").at("std"));
  m.encoding = encoding_from_string(j.at("encoding").get<std::string>());
  m.role = role_from_string(j.at("role").get<std::string>());
  m.seed = j.value("seed", std::uint64_t{0});
  m.check_shapes();
  if ((m.input_norm.stddev.array() <= 0.0).any() ||
      (m.target_norm.stddev.array() <= 0.0).any()) {
    throw IoError(path.string() + ": normalizer std entries must be positive");
  }
  return m;
}

void write_history_csv(const std::filesystem::path& path,
                       std::span<const EpochLoss> history) {
  std::string out = "epoch,train_mse,val_mse\n";
  for (std::size_t e = 0; e < history.size(); ++e) {
    out += std::to_string(e);
    out += ',';
    out += format_double(history[e].train_mse);
    out += ',';
    out += format_double(history[e].val_mse);
    out += '\n';
  }
  atomic_write(path, out);
}

namespace {

constexpr const char* kInjectionHeader =
    "k,s_q1,s_q2,s_q3,s_q4,s_q5,s_q6,"
    "alpha1_1,alpha1_2,alpha1_3,alpha1_4,alpha1_5,alpha1_6,"
    "alpha2_1,alpha2_2,alpha2_3,alpha2_4,alpha2_5,alpha2_6,"
    "m2_q1,m2_q2,m2_q3,m2_q4,m2_q5,m2_q6,"
    "a2_q1,a2_q2,a2_q3,a2_q4,a2_q5,a2_q6,"
    "a2_qw,a2_qx,a2_qy,a2_qz,a2_tx,a2_ty,a2_tz,clamped";

}  // namespace

void write_injection_csv(const std::filesystem::path& path,
                         std::span<const InjectionResult> results) {
  std::string out = kInjectionHeader;
  out += '\n';
  for (const InjectionResult& r : results) {
    out += std::to_string(r.k);
    const auto append_joints = [&out](const JointVector& v) {
      for (int i = 0; i < kNumJoints; ++i) {
        out += ',';
        out += format_double(v[i]);
      }
    };
    append_joints(r.setpoint_q);
    append_joints(r.alpha1);
    append_joints(r.alpha2);
    append_joints(r.measured_q);
    append_joints(r.actual_q);
    append_pose(out, r.actual_pose);
    out += r.clamped ? ",1\n" : ",0\n";
  }
  atomic_write(path, out);
}

std::vector<InjectionResult> read_injection_csv(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  const auto lines = lines_of(content);
  if (lines.empty() || !lines[0].starts_with("k,s_q1")) {
    throw IoError(path.string() + ": not an injection results file");
  }
  std::vector<InjectionResult> results;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto tokens = split(lines[li], ',');
    if (tokens.size() != 39) {
      throw IoError(path.string() + ": expected 39 columns on line " + std::to_string(li + 1));
    }
    const std::string ctx = path.string() + " line " + std::to_string(li + 1);
    InjectionResult r;
    r.k = static_cast<std::size_t>(parse_double(tokens[0], ctx));
    const auto read_joints = [&](std::size_t offset, JointVector& v) {
      for (int i = 0; i < kNumJoints; ++i) v[i] = parse_double(tokens[offset + i], ctx);
    };
    read_joints(1, r.setpoint_q);
    read_joints(7, r.alpha1);
    read_joints(13, r.alpha2);
    read_joints(19, r.measured_q);
    read_joints(25, r.actual_q);
    r.actual_pose = pose_from_tokens(std::span(tokens).subspan(31, 7), ctx);
    r.clamped = parse_double(tokens[38], ctx) != 0.0;
    results.push_back(std::move(r));
  }
  return results;
}

void write_search_results_csv(const std::filesystem::path& path,
                              std::span<const SearchCellResult> ranked) {
  std::string out =
      "rank,cell,batch_size,learning_rate,architecture,encoding,best_val_mse,best_epoch,"
      "failed,error\n";
  for (std::size_t rank = 0; rank < ranked.size(); ++rank) {
    const SearchCellResult& c = ranked[rank];
    out += std::to_string(rank) + ',' + std::to_string(c.cell_index) + ',' +
           std::to_string(c.batch_size) + ',' + format_double(c.learning_rate) + ',';
    for (std::size_t i = 0; i < c.architecture.size(); ++i) {
      if (i) out += 'x';
      out += std::to_string(c.architecture[i]);
    }
    out += ',' + to_string(c.encoding) + ',' +
           (c.failed ? "nan" : format_double(c.best_val_mse)) + ',' +
           std::to_string(c.best_epoch) + ',' + (c.failed ? "1" : "0") + ',';
    std::string err = c.error;
    for (char& ch : err) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    out += err + '\n';
  }
  atomic_write(path, out);
}

void write_report_csv(const std::filesystem::path& path, const ComparisonReport& rep) {
  constexpr double kRad2Deg = 180.0 / 3.14159265358979323846;
  std::string out = "k,et_injected_mm,er_injected_deg,et_baseline_mm,er_baseline_deg\n";
  for (std::size_t k = 0; k < rep.et_injected.size(); ++k) {
    out += std::to_string(k);
    out += ',' + format_double(rep.et_injected[k] * 1e3);
    out += ',' + format_double(rep.er_injected[k] * kRad2Deg);
    out += ',' + format_double(rep.et_baseline[k] * 1e3);
    out += ',' + format_double(rep.er_baseline[k] * kRad2Deg);
    out += '\n';
  }
  atomic_write(path, out);
}

void write_summary_text(const std::filesystem::path& path, const ComparisonReport& rep) {
  constexpr double kRad2Deg = 180.0 / 3.14159265358979323846;
  const auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%10.3f", v);
    return std::string(buf);
  };
  std::string out;
  out += "Differences between simulated and physical actual poses\n";
  out += "            ---- without injection ----   ----- with injection -----\n";
  out += "              E_T [mm]      E_R [deg]       E_T [mm]      E_R [deg]\n";
  const auto row = [&](const char* name, double a, double b, double c, double d) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-8s  %12s  %13s  %13s  %13s\n", name, fmt(a).c_str(),
                  fmt(b).c_str(), fmt(c).c_str(), fmt(d).c_str());
    out += buf;
  };
  row("mean", rep.stats_et_baseline.mean * 1e3, rep.stats_er_baseline.mean * kRad2Deg,
      rep.stats_et_injected.mean * 1e3, rep.stats_er_injected.mean * kRad2Deg);
  row("std", rep.stats_et_baseline.stddev * 1e3, rep.stats_er_baseline.stddev * kRad2Deg,
      rep.stats_et_injected.stddev * 1e3, rep.stats_er_injected.stddev * kRad2Deg);
  row("median", rep.stats_et_baseline.median * 1e3, rep.stats_er_baseline.median * kRad2Deg,
      rep.stats_et_injected.median * 1e3, rep.stats_er_injected.median * kRad2Deg);
  row("max", rep.stats_et_baseline.max * 1e3, rep.stats_er_baseline.max * kRad2Deg,
      rep.stats_et_injected.max * 1e3, rep.stats_er_injected.max * kRad2Deg);
  atomic_write(path, out);
}

void write_ks_csv(const std::filesystem::path& path, const ComparisonReport& rep) {
  std::string out = "layer,joint,ks\n";
  const char* layer_names[2] = {"measured_minus_setpoint", "actual_minus_measured"};
  for (int layer = 0; layer < 2; ++layer) {
    for (int j = 0; j < kNumJoints; ++j) {
      out += layer_names[layer];
      out += ',' + std::to_string(j + 1) + ',' + format_double(rep.ks[layer][j]) + '\n';
    }
  }
  atomic_write(path, out);
}

void write_histograms_csv(const std::filesystem::path& path, const ComparisonReport& rep,
                          int bins) {
  std::string out = "layer,joint,bin_lo,bin_hi,count_physical,count_simulated\n";
  const char* layer_names[2] = {"measured_minus_setpoint", "actual_minus_measured"};
  for (int layer = 0; layer < 2; ++layer) {
    for (int j = 0; j < kNumJoints; ++j) {
      const auto& phys = rep.physical_samples[layer][j];
      const auto& sim = rep.simulated_samples[layer][j];
      double lo = phys[0], hi = phys[0];
      for (double v : phys) { lo = std::min(lo, v); hi = std::max(hi, v); }
      for (double v : sim) { lo = std::min(lo, v); hi = std::max(hi, v); }
      if (!(hi > lo)) hi = lo + 1e-12;
      const Histogram hp = histogram(phys, lo, hi, bins);
      const Histogram hs = histogram(sim, lo, hi, bins);
      const double width = (hi - lo) / bins;
      for (int b = 0; b < bins; ++b) {
        out += layer_names[layer];
        out += ',' + std::to_string(j + 1);
        out += ',' + format_double(lo + b * width);
        out += ',' + format_double(lo + (b + 1) * width);
        out += ',' + std::to_string(hp.counts[static_cast<std::size_t>(b)]);
        out += ',' + std::to_string(hs.counts[static_cast<std::size_t>(b)]);
        out += '\n';
      }
    }
  }
  atomic_write(path, out);
}

}  // namespace errsim::io

#include "errsim/mlp.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "errsim/rng.hpp"

namespace errsim {

Normalizer Normalizer::fit(std::span<const Eigen::VectorXd> samples) {
  if (samples.empty()) throw std::invalid_argument("Normalizer: no samples");
  const Eigen::Index dim = samples.front().size();
  const double n = static_cast<double>(samples.size());

  Normalizer norm;
  norm.mean = Eigen::VectorXd::Zero(dim);
  for (const Eigen::VectorXd& s : samples) norm.mean += s;
  norm.mean /= n;

  Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
  for (const Eigen::VectorXd& s : samples) var += (s - norm.mean).cwiseAbs2();
  var /= n;
  norm.stddev = var.cwiseSqrt();
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (norm.stddev[i] < 1e-12) norm.stddev[i] = 1.0;
  }
  return norm;
}

void MlpModel::check_shapes() const {
  if (layer_sizes.size() < 2 || layer_sizes.back() != kNumJoints) {
    throw std::invalid_argument("MlpModel: layer_sizes must end at 6 outputs");
  }
  if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size()) {
    throw std::invalid_argument("MlpModel: layer count mismatch");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != layer_sizes[l + 1] || weights[l].cols() != layer_sizes[l] ||
        biases[l].size() != layer_sizes[l + 1]) {
      throw std::invalid_argument("MlpModel: weight shape mismatch at layer " +
                                  std::to_string(l));
    }
  }
}

Eigen::VectorXd MlpModel::forward_normalized(const Eigen::VectorXd& x) const {
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    a = (weights[l] * a + biases[l]).eval();
    if (l + 1 < weights.size()) a = a.cwiseMax(0.0);  // ReLU on hidden layers
  }
  return a;
}

JointVector MlpModel::predict(const Eigen::VectorXd& input) const {
  if (input.size() != layer_sizes.front()) {
    throw std::invalid_argument("MlpModel: input width " + std::to_string(input.size()) +
                                " does not match model width " +
                                std::to_string(layer_sizes.front()));
  }
  return target_norm.denormalize(forward_normalized(input_norm.normalize(input)));
}

MlpModel make_mlp(std::vector<int> layer_sizes, Encoding encoding, NetRole role,
                  std::uint64_t seed) {
  if (layer_sizes.empty() || layer_sizes.front() != feature_width(encoding)) {
    throw std::invalid_argument("make_mlp: first layer must match the encoding width");
  }
  MlpModel m;
  m.layer_sizes = std::move(layer_sizes);
  m.encoding = encoding;
  m.role = role;
  m.seed = seed;
  m.input_norm.mean = Eigen::VectorXd::Zero(m.layer_sizes.front());
  m.input_norm.stddev = Eigen::VectorXd::Ones(m.layer_sizes.front());
  m.target_norm.mean = Eigen::VectorXd::Zero(kNumJoints);
  m.target_norm.stddev = Eigen::VectorXd::Ones(kNumJoints);

  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    const int fan_in = m.layer_sizes[l];
    const int fan_out = m.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / fan_in);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-limit, limit);
    }
    m.weights.push_back(std::move(w));
    m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  m.check_shapes();
  return m;
}

namespace {

struct Gradients {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
};

// MSE over the batch in normalized space; columns are samples. Fills *grads
// via backprop when non-null.
double forward_backward(const MlpModel& model, const Eigen::MatrixXd& x,
                        const Eigen::MatrixXd& y, Gradients* grads) {
  const std::size_t layers = model.weights.size();
  std::vector<Eigen::MatrixXd> pre(layers);   // pre-activations
  std::vector<Eigen::MatrixXd> act(layers + 1);
  act[0] = x;
  for (std::size_t l = 0; l < layers; ++l) {
    pre[l] = (model.weights[l] * act[l]).colwise() + model.biases[l];
    act[l + 1] = l + 1 < layers ? pre[l].cwiseMax(0.0) : pre[l];
  }

  const double scale = 1.0 / static_cast<double>(x.cols() * kNumJoints);
  const Eigen::MatrixXd diff = act[layers] - y;
  const double loss = scale * diff.squaredNorm();
  if (grads == nullptr) return loss;

  grads->w.resize(layers);
  grads->b.resize(layers);
  Eigen::MatrixXd delta = 2.0 * scale * diff;
  for (std::size_t l = layers; l-- > 0;) {
    grads->w[l] = delta * act[l].transpose();
    grads->b[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = (model.weights[l].transpose() * delta)
                  .cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return loss;
}

Eigen::MatrixXd gather_columns(std::span<const Eigen::VectorXd> samples,
                               std::span<const std::size_t> idx,
                               const Normalizer& norm) {
  Eigen::MatrixXd m(samples[0].size(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) m.col(c) = norm.normalize(samples[idx[c]]);
  return m;
}

Eigen::MatrixXd gather_targets(std::span<const JointVector> targets,
                               std::span<const std::size_t> idx,
                               const Normalizer& norm) {
  Eigen::MatrixXd m(kNumJoints, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) m.col(c) = norm.normalize(targets[idx[c]]);
  return m;
}

}  // namespace

TrainResult mlp_train(const ErrorDataset& dataset, const std::vector<int>& hidden_layers,
                      const TrainConfig& cfg) {
  if (dataset.inputs.empty() || dataset.inputs.size() != dataset.targets.size()) {
    throw std::invalid_argument("mlp_train: empty or inconsistent dataset");
  }
  if (cfg.batch_size < 1) throw std::invalid_argument("mlp_train: batch_size must be >= 1");
  if (!(cfg.val_fraction > 0.0 && cfg.val_fraction < 1.0)) {
    throw std::invalid_argument("mlp_train: val_fraction must be in (0, 1)");
  }

  const std::size_t n = dataset.inputs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(cfg.seed);
  for (std::size_t i = n; i > 1; --i) {  // Fisher-Yates, pinned stream
    std::swap(order[i - 1], order[rng.integer(i)]);
  }
  auto n_val = static_cast<std::size_t>(std::floor(cfg.val_fraction * static_cast<double>(n)));
  n_val = std::min(n_val, n - 1);
  if (n_val == 0 && n > 1) n_val = 1;
  const std::size_t n_train = n - n_val;
  if (n_train == 0 || n_val == 0) {
    throw std::invalid_argument("mlp_train: split leaves an empty train or val set");
  }
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<long>(n_train));
  std::vector<std::size_t> val_idx(order.begin() + static_cast<long>(n_train), order.end());

  std::vector<int> layer_sizes;
  layer_sizes.push_back(feature_width(dataset.encoding));
  layer_sizes.insert(layer_sizes.end(), hidden_layers.begin(), hidden_layers.end());
  layer_sizes.push_back(kNumJoints);
  MlpModel model = make_mlp(layer_sizes, dataset.encoding, dataset.role, cfg.seed);

  std::vector<Eigen::VectorXd> train_inputs;
  train_inputs.reserve(n_train);
  for (std::size_t i : train_idx) train_inputs.push_back(dataset.inputs[i]);
  std::vector<Eigen::VectorXd> target_vecs;
  target_vecs.reserve(n_train);
  for (std::size_t i : train_idx) target_vecs.emplace_back(dataset.targets[i]);
  model.input_norm = Normalizer::fit(train_inputs);
  model.target_norm = Normalizer::fit(target_vecs);

  const Eigen::MatrixXd val_x = gather_columns(dataset.inputs, val_idx, model.input_norm);
  const Eigen::MatrixXd val_y = gather_targets(dataset.targets, val_idx, model.target_norm);

  // Adam state
  std::vector<Eigen::MatrixXd> mw, vw;
  std::vector<Eigen::VectorXd> mb, vb;
  for (const Eigen::MatrixXd& w : model.weights) {
    mw.emplace_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    vw.emplace_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  for (const Eigen::VectorXd& b : model.biases) {
    mb.emplace_back(Eigen::VectorXd::Zero(b.size()));
    vb.emplace_back(Eigen::VectorXd::Zero(b.size()));
  }

  TrainResult result;
  result.best_val_mse = std::numeric_limits<double>::infinity();
  std::vector<Eigen::MatrixXd> best_w = model.weights;
  std::vector<Eigen::VectorXd> best_b = model.biases;

  long adam_t = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = n_train; i > 1; --i) {
      std::swap(train_idx[i - 1], train_idx[rng.integer(i)]);
    }

    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n_train; start += cfg.batch_size) {
      const std::size_t count = std::min<std::size_t>(cfg.batch_size, n_train - start);
      const std::span<const std::size_t> idx(train_idx.data() + start, count);
      const Eigen::MatrixXd bx = gather_columns(dataset.inputs, idx, model.input_norm);
      const Eigen::MatrixXd by = gather_targets(dataset.targets, idx, model.target_norm);

      Gradients g;
      epoch_loss += forward_backward(model, bx, by, &g);
      ++batches;

      ++adam_t;
      const double corr1 = 1.0 - std::pow(cfg.adam_beta1, adam_t);
      const double corr2 = 1.0 - std::pow(cfg.adam_beta2, adam_t);
      for (std::size_t l = 0; l < model.weights.size(); ++l) {
        mw[l] = cfg.adam_beta1 * mw[l] + (1.0 - cfg.adam_beta1) * g.w[l];
        vw[l] = cfg.adam_beta2 * vw[l] + (1.0 - cfg.adam_beta2) * g.w[l].cwiseAbs2();
        model.weights[l] -=
            cfg.learning_rate *
            (mw[l] / corr1).cwiseQuotient(((vw[l] / corr2).cwiseSqrt().array() + cfg.adam_eps).matrix());
        mb[l] = cfg.adam_beta1 * mb[l] + (1.0 - cfg.adam_beta1) * g.b[l];
        vb[l] = cfg.adam_beta2 * vb[l] + (1.0 - cfg.adam_beta2) * g.b[l].cwiseAbs2();
        model.biases[l] -=
            cfg.learning_rate *
            (mb[l] / corr1).cwiseQuotient(((vb[l] / corr2).cwiseSqrt().array() + cfg.adam_eps).matrix());
      }
    }

    EpochLoss loss;
    loss.train_mse = epoch_loss / static_cast<double>(batches);
    loss.val_mse = forward_backward(model, val_x, val_y, nullptr);
    result.history.push_back(loss);

    if (!std::isfinite(loss.train_mse) || !std::isfinite(loss.val_mse)) {
      throw std::runtime_error(
          "mlp_train: loss is not finite at epoch " + std::to_string(epoch) +
          "; try a smaller learning rate");
    }
    if (loss.val_mse < result.best_val_mse) {
      result.best_val_mse = loss.val_mse;
      result.best_epoch = epoch;
      best_w = model.weights;
      best_b = model.biases;
    }
  }

  model.weights = std::move(best_w);
  model.biases = std::move(best_b);
  result.model = std::move(model);
  return result;
}

double grad_check(const MlpModel& model, std::span<const Eigen::VectorXd> inputs,
                  std::span<const JointVector> targets) {
  if (inputs.empty() || inputs.size() != targets.size()) {
    throw std::invalid_argument("grad_check: empty or mismatched batch");
  }
  std::vector<std::size_t> idx(inputs.size());
  std::iota(idx.begin(), idx.end(), 0);
  const Eigen::MatrixXd x = gather_columns(inputs, idx, model.input_norm);
  const Eigen::MatrixXd y = gather_targets(targets, idx, model.target_norm);

  Gradients analytic;
  forward_backward(model, x, y, &analytic);

  MlpModel probe = model;
  constexpr double h = 1e-5;
  double worst = 0.0;
  const auto update = [&](double ga, double gn) {
    const double rel = std::abs(ga - gn) / std::max(std::abs(ga) + std::abs(gn), 1e-6);
    worst = std::max(worst, rel);
  };

  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (Eigen::Index i = 0; i < model.weights[l].rows(); ++i) {
      for (Eigen::Index j = 0; j < model.weights[l].cols(); ++j) {
        const double saved = probe.weights[l](i, j);
        probe.weights[l](i, j) = saved + h;
        const double up = forward_backward(probe, x, y, nullptr);
        probe.weights[l](i, j) = saved - h;
        const double down = forward_backward(probe, x, y, nullptr);
        probe.weights[l](i, j) = saved;
        update(analytic.w[l](i, j), (up - down) / (2.0 * h));
      }
      const double saved = probe.biases[l][i];
      probe.biases[l][i] = saved + h;
      const double up = forward_backward(probe, x, y, nullptr);
      probe.biases[l][i] = saved - h;
      const double down = forward_backward(probe, x, y, nullptr);
      probe.biases[l][i] = saved;
      update(analytic.b[l][i], (up - down) / (2.0 * h));
    }
  }
  return worst;
}

}  // namespace errsim

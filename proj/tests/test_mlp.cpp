#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "errsim/mlp.hpp"
#include "errsim/rng.hpp"

using namespace errsim;

namespace {

// Random OC-style dataset with targets from a fixed linear map of the inputs.
ErrorDataset linear_map_dataset(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd map(kNumJoints, kNumJoints);
  for (int i = 0; i < kNumJoints; ++i) {
    for (int j = 0; j < kNumJoints; ++j) map(i, j) = rng.uniform(-0.5, 0.5);
  }
  const Eigen::VectorXd offset = Eigen::VectorXd::Constant(kNumJoints, 0.3);

  ErrorDataset ds;
  ds.encoding = Encoding::OC;
  ds.role = NetRole::NN1;
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd x(kNumJoints);
    for (int i = 0; i < kNumJoints; ++i) x[i] = rng.uniform(-1.0, 1.0);
    ds.inputs.push_back(x);
    ds.targets.emplace_back(map * x + offset);
  }
  return ds;
}

ErrorDataset constant_dataset(int n, std::uint64_t seed) {
  Rng rng(seed);
  ErrorDataset ds;
  ds.encoding = Encoding::OC;
  ds.role = NetRole::NN1;
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd x(kNumJoints);
    for (int i = 0; i < kNumJoints; ++i) x[i] = rng.uniform(-1.0, 1.0);
    ds.inputs.push_back(x);
    ds.targets.emplace_back(JointVector::Constant(0.7));
  }
  return ds;
}

}  // namespace

TEST_CASE("normalizer round trip and degenerate features") {
  Rng rng(1);
  std::vector<Eigen::VectorXd> samples;
  for (int s = 0; s < 200; ++s) {
    Eigen::VectorXd x(4);
    x << rng.normal() * 3.0 + 1.0, rng.uniform(), 5.0, rng.normal() * 1e-3;
    samples.push_back(x);
  }
  const Normalizer norm = Normalizer::fit(samples);
  CHECK(norm.stddev[2] == 1.0);  // constant feature
  CHECK(norm.mean[2] == doctest::Approx(5.0));

  for (int s = 0; s < 10; ++s) {
    const Eigen::VectorXd& x = samples[static_cast<std::size_t>(s)];
    const Eigen::VectorXd back = norm.denormalize(norm.normalize(x));
    CHECK((back - x).lpNorm<Eigen::Infinity>() < 1e-12);
  }

  // normalized non-degenerate features have zero mean, unit std
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  for (const auto& s : samples) mean += norm.normalize(s);
  mean /= static_cast<double>(samples.size());
  CHECK(std::abs(mean[0]) < 1e-9);
  Eigen::VectorXd var = Eigen::VectorXd::Zero(4);
  for (const auto& s : samples) var += (norm.normalize(s) - mean).cwiseAbs2();
  var /= static_cast<double>(samples.size());
  CHECK(std::abs(std::sqrt(var[0]) - 1.0) < 1e-6);
  CHECK(std::abs(std::sqrt(var[3]) - 1.0) < 1e-6);
}

TEST_CASE("zero-weight model predicts the target mean") {
  MlpModel m = make_mlp({6, 8, 6}, Encoding::OC, NetRole::NN1, 3);
  for (auto& w : m.weights) w.setZero();
  for (auto& b : m.biases) b.setZero();
  m.target_norm.mean = Eigen::VectorXd::Constant(6, 0.25);
  m.target_norm.stddev = Eigen::VectorXd::Constant(6, 2.0);

  const JointVector y = m.predict(Eigen::VectorXd::Ones(6));
  CHECK((y - JointVector::Constant(0.25)).lpNorm<Eigen::Infinity>() < 1e-15);
}

TEST_CASE("single linear layer computes an analytic output") {
  MlpModel m = make_mlp({6, 6}, Encoding::OC, NetRole::NN1, 4);
  m.weights[0] = 2.0 * Eigen::MatrixXd::Identity(6, 6);
  m.biases[0] = Eigen::VectorXd::Constant(6, -1.0);

  Eigen::VectorXd x(6);
  x << 1, 2, 3, 4, 5, 6;
  const JointVector y = m.predict(x);
  for (int i = 0; i < 6; ++i) CHECK(y[i] == doctest::Approx(2.0 * x[i] - 1.0));
}

TEST_CASE("width mismatch is rejected") {
  const MlpModel m = make_mlp({6, 6}, Encoding::OC, NetRole::NN1, 4);
  CHECK_THROWS_AS(m.predict(Eigen::VectorXd::Ones(12)), std::invalid_argument);
  CHECK_THROWS_AS(make_mlp({12, 6}, Encoding::OC, NetRole::NN1, 4), std::invalid_argument);
}

TEST_CASE("constant targets reduce to the bias solution") {
  // Fixed-rate Adam orbits the optimum at a step-size-dependent radius and
  // the held-out MSE floors near 2e-5 here, so the check is a loose bound on
  // that plateau rather than machine zero.
  const ErrorDataset ds = constant_dataset(256, 7);
  TrainConfig cfg;
  cfg.epochs = 3000;
  cfg.learning_rate = 1e-3;
  cfg.seed = 7;
  const TrainResult r = mlp_train(ds, {8}, cfg);
  CHECK(r.best_val_mse < 1e-4);

  // the denormalized prediction sits at the constant target
  const JointVector pred = r.model.predict(ds.inputs[0]);
  CHECK((pred - JointVector::Constant(0.7)).lpNorm<Eigen::Infinity>() < 0.05);
}

TEST_CASE("a linear map is fit to near zero") {
  const ErrorDataset ds = linear_map_dataset(1024, 9);
  TrainConfig cfg;
  cfg.epochs = 400;
  cfg.learning_rate = 0.0064;
  cfg.seed = 9;
  const TrainResult r = mlp_train(ds, {16, 32}, cfg);
  CHECK(r.best_val_mse < 5e-4);  // normalized-space MSE
  CHECK(r.history.size() == 400);

  // weak monotonicity of the best-so-far validation loss
  double best = std::numeric_limits<double>::infinity();
  for (const EpochLoss& e : r.history) {
    best = std::min(best, e.val_mse);
  }
  CHECK(best == doctest::Approx(r.best_val_mse));
  CHECK(r.best_epoch >= 0);
}

TEST_CASE("training is deterministic for a fixed seed") {
  const ErrorDataset ds = linear_map_dataset(300, 11);
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.seed = 21;
  const TrainResult a = mlp_train(ds, {16}, cfg);
  const TrainResult b = mlp_train(ds, {16}, cfg);
  for (std::size_t l = 0; l < a.model.weights.size(); ++l) {
    CHECK((a.model.weights[l] - b.model.weights[l]).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((a.model.biases[l] - b.model.biases[l]).lpNorm<Eigen::Infinity>() == 0.0);
  }
  CHECK(a.best_val_mse == b.best_val_mse);

  TrainConfig other = cfg;
  other.seed = 22;
  const TrainResult c = mlp_train(ds, {16}, other);
  CHECK((a.model.weights[0] - c.model.weights[0]).lpNorm<Eigen::Infinity>() > 0.0);
}

TEST_CASE("diverging training aborts with a diagnostic") {
  // Adam's normalized steps mean the weights grow by ~lr per step, so the
  // loss only overflows once products of weights exceed double range.
  const ErrorDataset ds = linear_map_dataset(300, 13);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.learning_rate = 1e160;
  cfg.seed = 5;
  try {
    mlp_train(ds, {16, 32}, cfg);
    FAIL("expected divergence");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("learning rate") != std::string::npos);
  }
}

TEST_CASE("gradient check passes for every shipped architecture") {
  Rng rng(31);
  for (const std::vector<int>& hidden :
       {std::vector<int>{16, 32}, {16}, {32, 32}, {8, 8}}) {
    for (int width : {6, 12}) {
      std::vector<int> sizes;
      sizes.push_back(width);
      sizes.insert(sizes.end(), hidden.begin(), hidden.end());
      sizes.push_back(6);
      MlpModel m = make_mlp(sizes, width == 6 ? Encoding::OC : Encoding::CPE,
                            NetRole::NN1, rng.raw());

      std::vector<Eigen::VectorXd> xs;
      std::vector<JointVector> ys;
      for (int s = 0; s < 8; ++s) {
        Eigen::VectorXd x(width);
        for (int i = 0; i < width; ++i) x[i] = rng.uniform(-1.0, 1.0);
        xs.push_back(x);
        JointVector y;
        for (int i = 0; i < kNumJoints; ++i) y[i] = rng.uniform(-1.0, 1.0);
        ys.push_back(y);
      }
      const double err = grad_check(m, xs, ys);
      CHECK(err < 1e-4);
    }
  }
}

TEST_CASE("zero inputs zero the first-layer weight gradients") {
  MlpModel m = make_mlp({6, 8, 6}, Encoding::OC, NetRole::NN1, 17);
  // Nonzero biases keep the pre-activations off the ReLU kink, where central
  // differences would be meaningless.
  Rng rng(18);
  for (auto& b : m.biases) {
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.uniform(0.1, 0.5);
  }
  // grad of loss w.r.t. first-layer weights is delta * x^T = 0 for x = 0;
  // verified through the finite-difference route: perturbing any first-layer
  // weight cannot change the loss.
  std::vector<Eigen::VectorXd> xs{Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(6)};
  std::vector<JointVector> ys{JointVector::Constant(0.3), JointVector::Constant(-0.2)};

  const double base = [&] {
    double acc = 0.0;
    for (std::size_t s = 0; s < xs.size(); ++s) {
      const Eigen::VectorXd d =
          m.forward_normalized(m.input_norm.normalize(xs[s])) - m.target_norm.normalize(ys[s]);
      acc += d.squaredNorm();
    }
    return acc;
  }();
  MlpModel probe = m;
  probe.weights[0].array() += 0.5;
  const double perturbed = [&] {
    double acc = 0.0;
    for (std::size_t s = 0; s < xs.size(); ++s) {
      const Eigen::VectorXd d = probe.forward_normalized(probe.input_norm.normalize(xs[s])) -
                                probe.target_norm.normalize(ys[s]);
      acc += d.squaredNorm();
    }
    return acc;
  }();
  CHECK(base == doctest::Approx(perturbed));
  CHECK(grad_check(m, xs, ys) < 1e-4);
}

TEST_CASE("linear model gradient equals the closed-form least-squares gradient") {
  MlpModel m = make_mlp({6, 6}, Encoding::OC, NetRole::NN1, 19);
  Rng rng(20);
  std::vector<Eigen::VectorXd> xs;
  std::vector<JointVector> ys;
  const int n = 16;
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd x(6);
    for (int i = 0; i < 6; ++i) x[i] = rng.uniform(-1.0, 1.0);
    xs.push_back(x);
    JointVector y;
    for (int i = 0; i < 6; ++i) y[i] = rng.uniform(-1.0, 1.0);
    ys.push_back(y);
  }
  // closed form: dL/dW = 2/(n*6) * (W X + b 1^T - Y) X^T
  Eigen::MatrixXd X(6, n), Y(6, n);
  for (int s = 0; s < n; ++s) {
    X.col(s) = xs[static_cast<std::size_t>(s)];
    Y.col(s) = ys[static_cast<std::size_t>(s)];
  }
  const Eigen::MatrixXd resid =
      (m.weights[0] * X).colwise() + m.biases[0] - Y;
  const Eigen::MatrixXd grad_w = 2.0 / (n * 6.0) * resid * X.transpose();

  // compare against central differences through the public loss surface
  constexpr double h = 1e-6;
  MlpModel probe = m;
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const auto loss = [&](double delta) {
        probe.weights[0](i, j) = m.weights[0](i, j) + delta;
        double acc = 0.0;
        for (int s = 0; s < n; ++s) {
          const Eigen::VectorXd d =
              probe.forward_normalized(xs[static_cast<std::size_t>(s)]) -
              ys[static_cast<std::size_t>(s)];
          acc += d.squaredNorm();
        }
        probe.weights[0](i, j) = m.weights[0](i, j);
        return acc / (n * 6.0);
      };
      const double numeric = (loss(h) - loss(-h)) / (2.0 * h);
      worst = std::max(worst, std::abs(numeric - grad_w(i, j)));
    }
  }
  CHECK(worst < 1e-8);
}

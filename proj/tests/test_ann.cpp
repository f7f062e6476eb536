#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "knotstat/ann.hpp"
#include "knotstat/error.hpp"

using namespace knotstat;

namespace {

Network hand_network() {
  Network net;
  net.spec = {{1, 1, 1}, Activation::ReLU};
  net.weights = {Eigen::MatrixXd::Constant(1, 1, 2.0), Eigen::MatrixXd::Constant(1, 1, 2.0)};
  net.biases = {Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Constant(1, 0.0)};
  return net;
}

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> d(-1, 1);
  Eigen::MatrixXd X(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) X(r, c) = d(gen);
  return X;
}

std::vector<double> random_targets(int n, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> d(-2, 2);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (auto& v : y) v = d(gen);
  return y;
}

}  // namespace

TEST(Forward, HandCase) {
  const std::vector<double> x{1.0};
  EXPECT_DOUBLE_EQ(forward(hand_network(), x), 5.0);
  const std::vector<double> neg{-1.0};
  EXPECT_DOUBLE_EQ(forward(hand_network(), neg), 0.0);  // ReLU(-1.5) = 0
}

TEST(Forward, SingleAffineMapHasNoActivation) {
  Network net;
  net.spec = {{3, 1}, Activation::Logistic};
  net.weights = {(Eigen::MatrixXd(1, 3) << 1, -2, 0.5).finished()};
  net.biases = {Eigen::VectorXd::Constant(1, 3.0)};
  const std::vector<double> x{2, 1, -4};
  EXPECT_DOUBLE_EQ(forward(net, x), 2 - 2 - 2 + 3);
  EXPECT_THROW(forward(net, std::vector<double>{1, 2}), UsageError);
}

TEST(Forward, BatchMatchesSingle) {
  auto net = init_network(make_spec(4, std::vector<int>{6, 3}, Activation::Tanh), 7);
  const auto X = random_matrix(5, 4, 1);
  const Eigen::VectorXd out = forward_batch(net, X);
  for (int r = 0; r < 5; ++r) {
    const Eigen::VectorXd row = X.row(r).transpose();
    EXPECT_NEAR(out(r), forward(net, std::span<const double>(row.data(), 4)), 1e-14);
  }
}

TEST(Loss, HandCases) {
  const auto net = hand_network();
  Eigen::MatrixXd X(2, 1);
  X << 1, 1;
  EXPECT_DOUBLE_EQ(loss_mse_batch(net, X, std::vector<double>{5, 5}), 0.0);
  EXPECT_DOUBLE_EQ(loss_mse_batch(net, X, std::vector<double>{4, 7}), (1.0 + 4.0) / 2.0);
  EXPECT_THROW(loss_mse_batch(net, X, std::vector<double>{}), DataError);
}

TEST(Backprop, AffineMatchesClosedForm) {
  Network net;
  net.spec = {{3, 1}, Activation::ReLU};
  net.weights = {(Eigen::MatrixXd(1, 3) << 0.3, -0.7, 1.1).finished()};
  net.biases = {Eigen::VectorXd::Constant(1, -0.2)};
  const auto X = random_matrix(9, 3, 4);
  const auto y = random_targets(9, 5);
  const auto g = backprop(net, X, y);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), 9);
  const Eigen::VectorXd resid = X * net.weights[0].transpose() + Eigen::VectorXd::Constant(9, -0.2) - yv;
  const Eigen::VectorXd gw = (2.0 / 9.0) * X.transpose() * resid;
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(g.weights[0](0, c), gw(c), 1e-12);
  EXPECT_NEAR(g.biases[0](0), (2.0 / 9.0) * resid.sum(), 1e-12);
}

TEST(Backprop, ZeroInputWithReluUsesZeroSlope) {
  // Zero weights and biases put every hidden unit exactly on the kink.
  Network net = init_network({{2, 3, 1}, Activation::ReLU}, 1);
  net.weights[0].setZero();
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(2, 2);
  const auto g = backprop(net, X, std::vector<double>{1, 2});
  EXPECT_EQ(g.weights[0].norm(), 0.0);
  EXPECT_EQ(g.biases[0].norm(), 0.0);
  EXPECT_NEAR(g.biases[1](0), -3.0, 1e-15);
}

TEST(GradCheck, TanhNetworks) {
  const auto spec = make_spec(4, std::vector<int>{8, 8}, Activation::Tanh);
  for (std::uint32_t trial = 0; trial < 20; ++trial) {
    auto net = init_network(spec, trial);
    for (auto& b : net.biases) b.setRandom();
    const auto X = random_matrix(6, 4, 100 + trial);
    const auto y = random_targets(6, 200 + trial);
    const auto res = grad_check(net, X, y, 1e-6);
    EXPECT_LT(res.max_relative_deviation, 1e-5) << "trial " << trial;
    EXPECT_EQ(res.checked, param_count(spec).total());
    EXPECT_EQ(res.skipped, 0u);
  }
}

TEST(GradCheck, LogisticAndRelu) {
  for (auto act : {Activation::Logistic, Activation::ReLU}) {
    const auto spec = make_spec(3, std::vector<int>{5, 4}, act);
    auto net = init_network(spec, 3);
    const auto X = random_matrix(7, 3, 8);
    const auto y = random_targets(7, 9);
    const auto res = grad_check(net, X, y, 1e-6);
    EXPECT_LT(res.max_relative_deviation, 1e-5);
    EXPECT_EQ(res.checked + res.skipped, param_count(spec).total());
    EXPECT_GT(res.checked, 0u);
  }
}

TEST(GradCheck, RejectsEpsOutOfRange) {
  const auto net = hand_network();
  Eigen::MatrixXd X(1, 1);
  X << 1;
  EXPECT_THROW(grad_check(net, X, std::vector<double>{1}, 1e-2), UsageError);
  EXPECT_THROW(grad_check(net, X, std::vector<double>{1}, 1e-9), UsageError);
}

TEST(ParamCount, HandCases) {
  EXPECT_EQ(param_count({{15, 5, 1}, Activation::ReLU}).total(), 15u * 5 + 5 + 5 + 1);
  EXPECT_EQ(param_count({{15, 5, 1}, Activation::ReLU}).total(), 86u);
  const auto big = param_count({{18, 100, 100, 1}, Activation::ReLU});
  EXPECT_EQ(big.weights, 1800u + 10000u + 100u);
  EXPECT_EQ(big.biases, 201u);
}

TEST(Spec, Validation) {
  EXPECT_THROW((NetworkSpec{{4}, Activation::ReLU}).validate(), UsageError);
  EXPECT_THROW((NetworkSpec{{4, 3}, Activation::ReLU}).validate(), UsageError);
  EXPECT_THROW((NetworkSpec{{4, 0, 1}, Activation::ReLU}).validate(), UsageError);
  EXPECT_NO_THROW((NetworkSpec{{4, 1}, Activation::ReLU}).validate());
  EXPECT_EQ(parse_activation("logistic"), Activation::Logistic);
  EXPECT_THROW(parse_activation("gelu"), UsageError);
}

TEST(Init, DeterministicWithZeroBiasesAndBoundedWeights) {
  const auto spec = make_spec(10, std::vector<int>{20}, Activation::ReLU);
  const auto a = init_network(spec, 99), b = init_network(spec, 99), c = init_network(spec, 100);
  EXPECT_EQ(a.weights[0], b.weights[0]);
  EXPECT_NE(a.weights[0], c.weights[0]);
  for (const auto& bias : a.biases) EXPECT_EQ(bias.norm(), 0.0);
  EXPECT_LE(a.weights[0].cwiseAbs().maxCoeff(), std::sqrt(6.0 / 30.0));
  EXPECT_LE(a.weights[1].cwiseAbs().maxCoeff(), std::sqrt(6.0 / 21.0));
}

TEST(Train, LearnsAffineMap) {
  Eigen::MatrixXd X(64, 1);
  std::vector<double> y;
  for (int i = 0; i < 64; ++i) {
    X(i, 0) = -1.0 + 2.0 * i / 63.0;
    y.push_back(3 * X(i, 0) - 2);
  }
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.batch_size = 8;
  cfg.learning_rate = 1e-2;
  const auto spec = make_spec(1, std::vector<int>{8}, Activation::Tanh);
  const auto res = train(spec, X, y, cfg);
  EXPECT_LT(res.loss_history.back(), 1e-3);
  EXPECT_EQ(res.loss_history.size(), 300u);
  const auto again = train(spec, X, y, cfg);
  EXPECT_EQ(res.loss_history, again.loss_history);
  EXPECT_EQ(res.network.weights[1], again.network.weights[1]);
}

TEST(Train, LearnsAbsoluteValueWithRelu) {
  Eigen::MatrixXd X(101, 1);
  std::vector<double> y;
  for (int i = 0; i < 101; ++i) {
    X(i, 0) = -1.0 + i / 50.0;
    y.push_back(std::abs(X(i, 0)));
  }
  TrainConfig cfg;
  cfg.epochs = 500;
  cfg.batch_size = 16;
  cfg.learning_rate = 3e-3;
  const auto res = train(make_spec(1, std::vector<int>{16}, Activation::ReLU), X, y, cfg);
  EXPECT_LT(res.loss_history.back(), 1e-3);
}

TEST(Train, RejectsBadConfig) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(4, 1);
  const std::vector<double> y(4, 1.0);
  const auto spec = make_spec(1, std::vector<int>{2}, Activation::ReLU);
  TrainConfig cfg;
  EXPECT_THROW(train(spec, X, y, cfg), DataError);  // 4 rows < batch 32
  cfg.batch_size = 2;
  cfg.learning_rate = 0;
  EXPECT_THROW(train(spec, X, y, cfg), UsageError);
  cfg.learning_rate = 1e-3;
  cfg.momentum = 1.0;
  EXPECT_THROW(train(spec, X, y, cfg), UsageError);
}

TEST(Train, DivergenceIsNumericError) {
  const auto X = random_matrix(32, 2, 3);
  std::vector<double> y(32);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 1e3 * X(static_cast<Eigen::Index>(i), 0);
  TrainConfig cfg;
  cfg.learning_rate = 10.0;
  cfg.batch_size = 4;
  cfg.epochs = 50;
  EXPECT_THROW(train(make_spec(2, std::vector<int>{8}, Activation::ReLU), X, y, cfg), NumericError);
}

TEST(Evaluate, ZeroTargetOmitsMape) {
  const auto net = hand_network();
  Eigen::MatrixXd X(2, 1);
  X << 1, -1;
  const auto r = evaluate(net, X, std::vector<double>{5, 0});
  EXPECT_EQ(r.mse, 0.0);
  EXPECT_FALSE(r.mape);
  const auto r2 = evaluate(net, X, std::vector<double>{4, 1});
  ASSERT_TRUE(r2.mape);
  EXPECT_NEAR(*r2.mape, (25.0 + 100.0) / 2.0, 1e-12);
}

TEST(Standardization, ZeroVarianceColumnKeepsScaleOne) {
  Eigen::MatrixXd X(3, 2);
  X << 1, 5, 2, 5, 3, 5;
  const auto s = Standardization::fit(X);
  EXPECT_DOUBLE_EQ(s.mean(0), 2.0);
  EXPECT_DOUBLE_EQ(s.scale(0), 1.0);
  EXPECT_DOUBLE_EQ(s.scale(1), 1.0);
  const auto Z = s.apply(X);
  EXPECT_DOUBLE_EQ(Z(2, 0), 1.0);
  EXPECT_DOUBLE_EQ(Z(0, 1), 0.0);
}

TEST(Json, NetworkRoundTripPredictsIdentically) {
  const auto X = random_matrix(20, 3, 5);
  const auto y = random_targets(20, 6);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 4;
  const auto res = train(make_spec(3, std::vector<int>{4}, Activation::Logistic), X, y, cfg);
  const auto back = network_from_json(nlohmann::json::parse(to_json(res.network).dump()));
  EXPECT_EQ(back.spec, res.network.spec);
  EXPECT_EQ(predict(back, X), predict(res.network, X));
  const auto cfg_back = train_config_from_json(to_json(cfg));
  EXPECT_EQ(cfg_back.epochs, 5u);
  EXPECT_EQ(cfg_back.batch_size, 4u);
}

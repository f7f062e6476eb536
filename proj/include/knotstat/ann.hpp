#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "knotstat/stats.hpp"

namespace knotstat {

enum class Activation { ReLU, Tanh, Logistic };

Activation parse_activation(std::string_view text);
std::string_view to_string(Activation a) noexcept;

/// Layer widths (k_0, ..., k_{p+1}) with k_{p+1} = 1. The activation is applied
/// after every affine map except the last.
struct NetworkSpec {
  std::vector<int> layer_sizes;
  Activation activation = Activation::ReLU;

  std::size_t n_affine() const noexcept { return layer_sizes.size() - 1; }
  int input_width() const noexcept { return layer_sizes.front(); }
  /// Throws UsageError unless there are >= 2 positive sizes ending in 1.
  void validate() const;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Convenience: input width, hidden widths, scalar output.
NetworkSpec make_spec(int input_width, std::span<const int> hidden, Activation a);

struct ParamCount {
  std::size_t weights = 0;
  std::size_t biases = 0;
  std::size_t total() const noexcept { return weights + biases; }
};

ParamCount param_count(const NetworkSpec& spec);

/// Per-column affine input transform (x - mean) / scale, fitted on training data.
struct Standardization {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  /// Sample mean/std per column; zero-variance columns get scale 1.
  static Standardization fit(const Eigen::MatrixXd& X);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
};

struct Network {
  NetworkSpec spec;
  std::vector<Eigen::MatrixXd> weights;  // W_t is k_{t+1} x k_t
  std::vector<Eigen::VectorXd> biases;   // b_t has k_{t+1} entries
  std::optional<Standardization> input_scaling;
};

/// Weights uniform on [-s, s], s = sqrt(6 / (k_t + k_{t+1})); biases zero.
Network init_network(const NetworkSpec& spec, std::uint64_t seed);

/// The network function on one (already standardized) input.
double forward(const Network& net, std::span<const double> x);
/// Row-wise forward over a batch; rows are samples. No input standardization.
Eigen::VectorXd forward_batch(const Network& net, const Eigen::MatrixXd& X);
/// Applies the stored input standardization, then forward_batch.
Eigen::VectorXd predict(const Network& net, const Eigen::MatrixXd& X);

double loss_mse_batch(const Network& net, const Eigen::MatrixXd& X, std::span<const double> y);

struct Gradient {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

/// Exact gradient of loss_mse_batch. ReLU'(0) is taken as 0.
Gradient backprop(const Network& net, const Eigen::MatrixXd& X, std::span<const double> y);

struct GradCheckResult {
  double max_relative_deviation = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // ReLU kinks within 10 eps of a perturbed evaluation
};

/// Central differences on every parameter against backprop. Deviation per
/// parameter is |a - n| / max(1e-12, |a| + |n|). eps must lie in [1e-7, 1e-3].
GradCheckResult grad_check(const Network& net, const Eigen::MatrixXd& X,
                           std::span<const double> y, double eps);

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t epochs = 400;
  double momentum = 0.9;
  std::uint64_t seed = 42;
  bool input_standardize = true;

  void validate() const;
};

struct TrainResult {
  Network network;
  std::vector<double> loss_history;  // full training-set MSE after each epoch
};

/// Seeded mini-batch gradient descent with classical momentum. NumericError if
/// the loss stops being finite.
TrainResult train(const NetworkSpec& spec, const Eigen::MatrixXd& X, std::span<const double> y,
                  const TrainConfig& cfg);

/// Test-set MSE and (when no target is zero) MAPE, after stored standardization.
MetricReport evaluate(const Network& net, const Eigen::MatrixXd& X_test,
                      std::span<const double> y_test);

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig defaults = {});

nlohmann::json to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);

}  // namespace knotstat

#include "knotstat/ann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "knotstat/error.hpp"
#include "knotstat/rng.hpp"

namespace knotstat {

using nlohmann::json;

namespace {

Eigen::MatrixXd activate(Activation a, const Eigen::MatrixXd& z) {
  switch (a) {
    case Activation::ReLU: return z.cwiseMax(0.0);
    case Activation::Tanh: return z.array().tanh().matrix();
    case Activation::Logistic: return (1.0 / (1.0 + (-z.array()).exp())).matrix();
  }
  return z;
}

// psi'(z) expressed through z and a = psi(z).
Eigen::MatrixXd activation_slope(Activation a, const Eigen::MatrixXd& z, const Eigen::MatrixXd& act) {
  switch (a) {
    case Activation::ReLU: return (z.array() > 0.0).cast<double>().matrix();
    case Activation::Tanh: return (1.0 - act.array().square()).matrix();
    case Activation::Logistic: return (act.array() * (1.0 - act.array())).matrix();
  }
  return Eigen::MatrixXd::Ones(z.rows(), z.cols());
}

// Column-major activations: layer t holds k_t x batch.
struct Trace {
  std::vector<Eigen::MatrixXd> pre;   // z_t = W_t a_t + b_t, t = 0..p
  std::vector<Eigen::MatrixXd> post;  // a_0 = input, a_{t+1} = psi(z_t) for t < p
};

Trace run(const Network& net, const Eigen::MatrixXd& input_cols) {
  const std::size_t L = net.weights.size();
  Trace tr;
  tr.pre.reserve(L);
  tr.post.reserve(L);
  tr.post.push_back(input_cols);
  for (std::size_t t = 0; t < L; ++t) {
    Eigen::MatrixXd z = net.weights[t] * tr.post.back();
    z.colwise() += net.biases[t];
    if (t + 1 < L) tr.post.push_back(activate(net.spec.activation, z));
    tr.pre.push_back(std::move(z));
  }
  return tr;
}

void check_input(const Network& net, const Eigen::MatrixXd& X, std::size_t n_targets) {
  if (X.cols() != net.spec.input_width())
    throw UsageError("input width " + std::to_string(X.cols()) + " does not match network input " +
                     std::to_string(net.spec.input_width()));
  if (static_cast<std::size_t>(X.rows()) != n_targets)
    throw UsageError("batch has " + std::to_string(X.rows()) + " rows but " +
                     std::to_string(n_targets) + " targets");
}

// Smallest |z| over hidden pre-activations; infinity when there are none.
double min_hidden_preactivation(const Trace& tr) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t + 1 < tr.pre.size(); ++t) m = std::min(m, tr.pre[t].cwiseAbs().minCoeff());
  return m;
}

double loss_from_output(const Eigen::MatrixXd& out, std::span<const double> y) {
  const Eigen::Map<const Eigen::RowVectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  return (out.row(0) - yv).squaredNorm() / static_cast<double>(y.size());
}

// L(+) - L(-) summed per sample as (o+ - o-)(o+ + o- - 2y), which avoids
// cancelling two nearly equal batch losses.
double loss_difference(const Eigen::MatrixXd& plus, const Eigen::MatrixXd& minus, std::span<const double> y) {
  const Eigen::Map<const Eigen::RowVectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  const Eigen::RowVectorXd diff = plus.row(0) - minus.row(0);
  const Eigen::RowVectorXd sum = plus.row(0) + minus.row(0) - 2.0 * yv;
  return diff.cwiseProduct(sum).sum() / static_cast<double>(y.size());
}

double* parameter(Network& net, std::size_t layer, bool is_bias, Eigen::Index idx) {
  return is_bias ? &net.biases[layer](idx) : &net.weights[layer].data()[idx];
}

}  // namespace

Activation parse_activation(std::string_view text) {
  if (text == "relu") return Activation::ReLU;
  if (text == "tanh") return Activation::Tanh;
  if (text == "logistic" || text == "sigmoid") return Activation::Logistic;
  throw UsageError("unknown activation '" + std::string(text) + "' (expected relu, tanh, logistic)");
}

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::ReLU: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Logistic: return "logistic";
  }
  return "relu";
}

void NetworkSpec::validate() const {
  if (layer_sizes.size() < 2) throw UsageError("network needs at least an input and an output layer");
  for (int k : layer_sizes) {
    if (k <= 0) throw UsageError("layer sizes must be positive");
  }
  if (layer_sizes.back() != 1) throw UsageError("network output layer must have width 1");
}

NetworkSpec make_spec(int input_width, std::span<const int> hidden, Activation a) {
  NetworkSpec s;
  s.layer_sizes.push_back(input_width);
  s.layer_sizes.insert(s.layer_sizes.end(), hidden.begin(), hidden.end());
  s.layer_sizes.push_back(1);
  s.activation = a;
  s.validate();
  return s;
}

ParamCount param_count(const NetworkSpec& spec) {
  spec.validate();
  ParamCount c;
  for (std::size_t t = 0; t + 1 < spec.layer_sizes.size(); ++t) {
    c.weights += static_cast<std::size_t>(spec.layer_sizes[t]) *
                 static_cast<std::size_t>(spec.layer_sizes[t + 1]);
    c.biases += static_cast<std::size_t>(spec.layer_sizes[t + 1]);
  }
  return c;
}

Standardization Standardization::fit(const Eigen::MatrixXd& X) {
  Standardization s;
  const auto n = X.rows();
  s.mean = X.colwise().mean();
  s.scale = Eigen::RowVectorXd::Ones(X.cols());
  if (n >= 2) {
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      const double var = (X.col(c).array() - s.mean(c)).square().sum() / static_cast<double>(n - 1);
      if (var > 0.0) s.scale(c) = std::sqrt(var);
    }
  }
  return s;
}

Eigen::MatrixXd Standardization::apply(const Eigen::MatrixXd& X) const {
  if (X.cols() != mean.size()) throw UsageError("standardization width mismatch");
  return (X.rowwise() - mean).array().rowwise() / scale.array();
}

Network init_network(const NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  Network net;
  net.spec = spec;
  Rng rng(seed);
  for (std::size_t t = 0; t + 1 < spec.layer_sizes.size(); ++t) {
    const int fan_in = spec.layer_sizes[t], fan_out = spec.layer_sizes[t + 1];
    const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Eigen::MatrixXd W(fan_out, fan_in);
    // Row-major draw order so the stream maps to weights independent of storage.
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) W(r, c) = rng.uniform(-s, s);
    net.weights.push_back(std::move(W));
    net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return net;
}

double forward(const Network& net, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(net.spec.input_width()))
    throw UsageError("input length " + std::to_string(x.size()) + " does not match network input " +
                     std::to_string(net.spec.input_width()));
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  const std::size_t L = net.weights.size();
  for (std::size_t t = 0; t < L; ++t) {
    Eigen::VectorXd z = net.weights[t] * a + net.biases[t];
    a = (t + 1 < L) ? Eigen::VectorXd(activate(net.spec.activation, z)) : z;
  }
  return a(0);
}

Eigen::VectorXd forward_batch(const Network& net, const Eigen::MatrixXd& X) {
  if (X.cols() != net.spec.input_width())
    throw UsageError("input width " + std::to_string(X.cols()) + " does not match network input " +
                     std::to_string(net.spec.input_width()));
  return run(net, X.transpose()).pre.back().row(0).transpose();
}

Eigen::VectorXd predict(const Network& net, const Eigen::MatrixXd& X) {
  return net.input_scaling ? forward_batch(net, net.input_scaling->apply(X)) : forward_batch(net, X);
}

double loss_mse_batch(const Network& net, const Eigen::MatrixXd& X, std::span<const double> y) {
  if (y.empty()) throw DataError("loss of an empty batch");
  check_input(net, X, y.size());
  return loss_from_output(run(net, X.transpose()).pre.back(), y);
}

Gradient backprop(const Network& net, const Eigen::MatrixXd& X, std::span<const double> y) {
  if (y.empty()) throw DataError("gradient of an empty batch");
  check_input(net, X, y.size());
  const Trace tr = run(net, X.transpose());
  const std::size_t L = net.weights.size();
  const Eigen::Map<const Eigen::RowVectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));

  Gradient g;
  g.weights.resize(L);
  g.biases.resize(L);
  // dL/dz_p for L = mean squared error.
  Eigen::MatrixXd delta = (2.0 / static_cast<double>(y.size())) * (tr.pre.back().row(0) - yv);
  for (std::size_t t = L; t-- > 0;) {
    g.weights[t] = delta * tr.post[t].transpose();
    g.biases[t] = delta.rowwise().sum();
    if (t > 0) {
      delta = (net.weights[t].transpose() * delta)
                  .cwiseProduct(activation_slope(net.spec.activation, tr.pre[t - 1], tr.post[t]));
    }
  }
  return g;
}

GradCheckResult grad_check(const Network& net, const Eigen::MatrixXd& X, std::span<const double> y,
                           double eps) {
  if (!(eps >= 1e-7 && eps <= 1e-3)) throw UsageError("grad_check eps must lie in [1e-7, 1e-3]");
  const Gradient g = backprop(net, X, y);
  const Eigen::MatrixXd cols = X.transpose();
  const bool kinked = net.spec.activation == Activation::ReLU;

  GradCheckResult res;
  Network work = net;
  for (std::size_t t = 0; t < work.weights.size(); ++t) {
    for (bool is_bias : {false, true}) {
      const Eigen::Index count = is_bias ? work.biases[t].size() : work.weights[t].size();
      for (Eigen::Index idx = 0; idx < count; ++idx) {
        double* p = parameter(work, t, is_bias, idx);
        const double saved = *p;
        *p = saved + eps;
        const Trace plus = run(work, cols);
        *p = saved - eps;
        const Trace minus = run(work, cols);
        *p = saved;
        if (kinked && std::min(min_hidden_preactivation(plus), min_hidden_preactivation(minus)) <
                          10.0 * eps) {
          ++res.skipped;
          continue;
        }
        const double numeric = loss_difference(plus.pre.back(), minus.pre.back(), y) / (2.0 * eps);
        const double analytic = is_bias ? g.biases[t](idx) : g.weights[t].data()[idx];
        const double dev =
            std::abs(analytic - numeric) / std::max(1e-12, std::abs(analytic) + std::abs(numeric));
        res.max_relative_deviation = std::max(res.max_relative_deviation, dev);
        ++res.checked;
      }
    }
  }
  return res;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0) || !std::isfinite(learning_rate))
    throw UsageError("learning rate must be positive");
  if (batch_size == 0) throw UsageError("batch size must be positive");
  if (epochs == 0) throw UsageError("epochs must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw UsageError("momentum must lie in [0, 1)");
}

TrainResult train(const NetworkSpec& spec, const Eigen::MatrixXd& X, std::span<const double> y,
                  const TrainConfig& cfg) {
  cfg.validate();
  spec.validate();
  const auto n = static_cast<std::size_t>(X.rows());
  if (n != y.size()) throw UsageError("training matrix and targets differ in length");
  if (X.cols() != spec.input_width())
    throw UsageError("training input width " + std::to_string(X.cols()) +
                     " does not match network input " + std::to_string(spec.input_width()));
  if (n < cfg.batch_size)
    throw DataError("training set has " + std::to_string(n) + " rows, fewer than batch size " +
                    std::to_string(cfg.batch_size));

  TrainResult out{init_network(spec, cfg.seed), {}};
  Network& net = out.network;
  Eigen::MatrixXd Xs = X;
  if (cfg.input_standardize) {
    net.input_scaling = Standardization::fit(X);
    Xs = net.input_scaling->apply(X);
  }

  const std::size_t L = net.weights.size();
  std::vector<Eigen::MatrixXd> vel_w(L);
  std::vector<Eigen::VectorXd> vel_b(L);
  for (std::size_t t = 0; t < L; ++t) {
    vel_w[t] = Eigen::MatrixXd::Zero(net.weights[t].rows(), net.weights[t].cols());
    vel_b[t] = Eigen::VectorXd::Zero(net.biases[t].size());
  }

  Rng shuffler(mix_seed(cfg.seed, 1));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Eigen::MatrixXd batch_x;
  std::vector<double> batch_y;
  out.loss_history.reserve(cfg.epochs);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffler.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t m = std::min(cfg.batch_size, n - start);
      batch_x.resize(static_cast<Eigen::Index>(m), Xs.cols());
      batch_y.resize(m);
      for (std::size_t r = 0; r < m; ++r) {
        batch_x.row(static_cast<Eigen::Index>(r)) = Xs.row(static_cast<Eigen::Index>(order[start + r]));
        batch_y[r] = y[order[start + r]];
      }
      const Gradient g = backprop(net, batch_x, batch_y);
      for (std::size_t t = 0; t < L; ++t) {
        vel_w[t] = cfg.momentum * vel_w[t] - cfg.learning_rate * g.weights[t];
        vel_b[t] = cfg.momentum * vel_b[t] - cfg.learning_rate * g.biases[t];
        net.weights[t] += vel_w[t];
        net.biases[t] += vel_b[t];
      }
    }
    const double loss = loss_mse_batch(net, Xs, y);
    if (!std::isfinite(loss))
      throw NumericError("training diverged at epoch " + std::to_string(epoch + 1) +
                         " (non-finite loss); try a smaller learning rate");
    out.loss_history.push_back(loss);
  }
  return out;
}

MetricReport evaluate(const Network& net, const Eigen::MatrixXd& X_test, std::span<const double> y_test) {
  const Eigen::VectorXd pred = predict(net, X_test);
  return metric_report(std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())), y_test);
}

json to_json(const TrainConfig& cfg) {
  return {{"learning_rate", cfg.learning_rate}, {"batch_size", cfg.batch_size},
          {"epochs", cfg.epochs},               {"momentum", cfg.momentum},
          {"seed", cfg.seed},                   {"input_standardize", cfg.input_standardize}};
}

TrainConfig train_config_from_json(const json& j, TrainConfig c) {
  try {
    if (j.contains("learning_rate")) c.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<std::size_t>();
    if (j.contains("epochs")) c.epochs = j.at("epochs").get<std::size_t>();
    if (j.contains("momentum")) c.momentum = j.at("momentum").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("input_standardize")) c.input_standardize = j.at("input_standardize").get<bool>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad training configuration: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const Network& net) {
  json w = json::array(), b = json::array();
  for (std::size_t t = 0; t < net.weights.size(); ++t) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < net.weights[t].rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(net.weights[t].cols()));
      for (Eigen::Index c = 0; c < net.weights[t].cols(); ++c) row[static_cast<std::size_t>(c)] = net.weights[t](r, c);
      rows.push_back(std::move(row));
    }
    w.push_back(std::move(rows));
    b.push_back(std::vector<double>(net.biases[t].data(), net.biases[t].data() + net.biases[t].size()));
  }
  json out = {{"spec", {{"layer_sizes", net.spec.layer_sizes}, {"activation", to_string(net.spec.activation)}}},
              {"weights", std::move(w)},
              {"biases", std::move(b)}};
  if (net.input_scaling) {
    const auto& s = *net.input_scaling;
    out["standardization"] = {
        {"mean", std::vector<double>(s.mean.data(), s.mean.data() + s.mean.size())},
        {"scale", std::vector<double>(s.scale.data(), s.scale.data() + s.scale.size())}};
  } else {
    out["standardization"] = nullptr;
  }
  return out;
}

Network network_from_json(const json& j) {
  try {
    Network net;
    net.spec.layer_sizes = j.at("spec").at("layer_sizes").get<std::vector<int>>();
    net.spec.activation = parse_activation(j.at("spec").at("activation").get<std::string>());
    net.spec.validate();
    const auto& w = j.at("weights");
    const auto& b = j.at("biases");
    const std::size_t L = net.spec.n_affine();
    if (w.size() != L || b.size() != L) throw DataError("network layer count does not match spec");
    for (std::size_t t = 0; t < L; ++t) {
      const int rows = net.spec.layer_sizes[t + 1], cols = net.spec.layer_sizes[t];
      const auto& wt = w[t];
      if (wt.size() != static_cast<std::size_t>(rows)) throw DataError("weight matrix shape mismatch");
      Eigen::MatrixXd W(rows, cols);
      for (int r = 0; r < rows; ++r) {
        auto row = wt[static_cast<std::size_t>(r)].get<std::vector<double>>();
        if (row.size() != static_cast<std::size_t>(cols)) throw DataError("weight matrix shape mismatch");
        for (int c = 0; c < cols; ++c) W(r, c) = row[static_cast<std::size_t>(c)];
      }
      auto bias = b[t].get<std::vector<double>>();
      if (bias.size() != static_cast<std::size_t>(rows)) throw DataError("bias vector shape mismatch");
      if (!W.allFinite()) throw DataError("non-finite network weight");
      net.weights.push_back(std::move(W));
      net.biases.push_back(Eigen::Map<Eigen::VectorXd>(bias.data(), rows));
      if (!net.biases.back().allFinite()) throw DataError("non-finite network bias");
    }
    if (j.contains("standardization") && !j.at("standardization").is_null()) {
      auto mean = j.at("standardization").at("mean").get<std::vector<double>>();
      auto scale = j.at("standardization").at("scale").get<std::vector<double>>();
      const auto width = static_cast<std::size_t>(net.spec.input_width());
      if (mean.size() != width || scale.size() != width)
        throw DataError("standardization width does not match network input");
      Standardization s;
      s.mean = Eigen::Map<Eigen::RowVectorXd>(mean.data(), static_cast<Eigen::Index>(width));
      s.scale = Eigen::Map<Eigen::RowVectorXd>(scale.data(), static_cast<Eigen::Index>(width));
      net.input_scaling = std::move(s);
    }
    return net;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed network JSON: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("malformed network JSON: ") + e.what());
  }
}

}  // namespace knotstat

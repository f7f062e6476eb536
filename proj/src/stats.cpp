#include "knotstat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "knotstat/error.hpp"
#include "knotstat/rng.hpp"

namespace knotstat {

namespace {

constexpr int kTwoClusterRestarts = 10;

void require_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size())
    throw UsageError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) throw DataError("mean of an empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

SampleStats sample_stats(std::span<const double> x) {
  if (x.size() < 2) throw DataError("variance needs at least two samples");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double var = ss / static_cast<double>(x.size() - 1);
  return {m, var, std::sqrt(var)};
}

double covariance(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, "covariance");
  if (x.size() < 2) throw DataError("covariance needs at least two samples");
  const double mx = mean(x), my = mean(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, "pearson");
  const auto sx = sample_stats(x), sy = sample_stats(y);
  if (sx.std == 0.0 || sy.std == 0.0)
    throw NumericError("Pearson correlation undefined for a constant sample");
  return std::clamp(covariance(x, y) / (sx.std * sy.std), -1.0, 1.0);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, "linear_fit");
  const auto sx = sample_stats(x);
  if (sx.variance == 0.0) throw NumericError("linear fit needs a non-constant input");
  LinearModel m;
  m.slope = covariance(x, y) / sx.variance;
  m.intercept = mean(y) - m.slope * sx.mean;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - m(x[i]);
    ss += r * r;
  }
  return {m, ss / static_cast<double>(x.size())};
}

MultilinearModel multilinear_fit(const Eigen::MatrixXd& X, std::span<const double> y) {
  const auto n = X.rows(), m = X.cols();
  if (static_cast<std::size_t>(n) != y.size()) throw UsageError("multilinear_fit: row mismatch");
  if (n < m + 1)
    throw NumericError("multilinear fit needs at least " + std::to_string(m + 1) + " rows, got " +
                       std::to_string(n));
  Eigen::MatrixXd A(n, m + 1);
  A.leftCols(m) = X;
  A.col(m).setOnes();
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

  const Eigen::MatrixXd normal = A.transpose() * A;
  const Eigen::VectorXd rhs = A.transpose() * yv;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(normal);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-13))
    throw NumericError("singular normal equations (reciprocal condition estimate " +
                       std::to_string(rcond) + ")");
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite()) throw NumericError("non-finite multilinear solution");
  return {sol.head(m), sol(m)};
}

double mse(std::span<const double> pred, std::span<const double> y) {
  require_same_length(pred, y, "mse");
  if (y.empty()) throw DataError("mse of an empty sample");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - pred[i]) * (y[i] - pred[i]);
  return s / static_cast<double>(y.size());
}

double mape(std::span<const double> pred, std::span<const double> y) {
  auto v = mape_if_defined(pred, y);
  if (!v) throw DataError("MAPE undefined: the targets contain zeros");
  return *v;
}

std::optional<double> mape_if_defined(std::span<const double> pred, std::span<const double> y) {
  require_same_length(pred, y, "mape");
  if (y.empty()) throw DataError("mape of an empty sample");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) return std::nullopt;
    s += std::abs(y[i] - pred[i]) / std::abs(y[i]);
  }
  return 100.0 * s / static_cast<double>(y.size());
}

MetricReport metric_report(std::span<const double> pred, std::span<const double> y) {
  return {mse(pred, y), mape_if_defined(pred, y), std::nullopt};
}

TwoClusterFit two_cluster_fit(std::span<const double> x, std::span<const double> y,
                              std::uint64_t seed) {
  require_same_length(x, y, "two_cluster_fit");
  const std::size_t n = x.size();
  if (n < 4) throw DataError("two-cluster fit needs at least four points");
  const auto sx = sample_stats(x), sy = sample_stats(y);
  if (sx.std == 0.0 || sy.std == 0.0)
    throw NumericError("two-cluster fit needs non-constant x and y");

  std::vector<double> u(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = (x[i] - sx.mean) / sx.std;
    v[i] = (y[i] - sy.mean) / sy.std;
  }
  auto dist2 = [&](std::size_t i, double cu, double cv) {
    return (u[i] - cu) * (u[i] - cu) + (v[i] - cv) * (v[i] - cv);
  };

  // k-means++ seeding, several restarts, lowest within-cluster sum of squares wins.
  Rng rng(seed);
  std::vector<int> assign(n, -1), trial(n);
  double cu[2] = {0, 0}, cv[2] = {0, 0};
  double best_sse = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (int restart = 0; restart < kTwoClusterRestarts; ++restart) {
    const std::size_t first = rng.below(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += dist2(i, u[first], v[first]);
    double pick = rng.uniform() * total;
    std::size_t second = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      pick -= dist2(i, u[first], v[first]);
      if (pick < 0.0) {
        second = i;
        break;
      }
    }
    double tu[2] = {u[first], u[second]}, tv[2] = {v[first], v[second]};
    std::fill(trial.begin(), trial.end(), -1);
    int it = 0;
    for (; it < 100; ++it) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        const int a = dist2(i, tu[1], tv[1]) < dist2(i, tu[0], tv[0]) ? 1 : 0;
        if (a != trial[i]) {
          trial[i] = a;
          changed = true;
        }
      }
      if (!changed) break;
      double su[2] = {0, 0}, sv[2] = {0, 0};
      std::size_t cnt[2] = {0, 0};
      for (std::size_t i = 0; i < n; ++i) {
        su[trial[i]] += u[i];
        sv[trial[i]] += v[i];
        cnt[trial[i]]++;
      }
      for (int c = 0; c < 2; ++c) {
        if (cnt[c] == 0) continue;  // keep the old centre; reported as degenerate below
        tu[c] = su[c] / static_cast<double>(cnt[c]);
        tv[c] = sv[c] / static_cast<double>(cnt[c]);
      }
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) sse += dist2(i, tu[trial[i]], tv[trial[i]]);
    if (sse < best_sse) {
      best_sse = sse;
      assign = trial;
      iter = it;
      for (int c = 0; c < 2; ++c) {
        cu[c] = tu[c];
        cv[c] = tv[c];
      }
    }
  }

  const bool swap = cu[1] < cu[0] || (cu[1] == cu[0] && cv[1] < cv[0]);
  if (swap) {
    for (auto& a : assign) a = 1 - a;
  }

  TwoClusterFit out{};
  out.assignment = assign;
  out.iterations = iter;
  for (int c = 0; c < 2; ++c) {
    std::vector<double> xc, yc;
    for (std::size_t i = 0; i < n; ++i) {
      if (assign[i] == c) {
        xc.push_back(x[i]);
        yc.push_back(y[i]);
      }
    }
    if (xc.size() < 2)
      throw DataError("two-cluster fit: cluster " + std::to_string(c) + " has " +
                      std::to_string(xc.size()) + " point(s)");
    out.fits[c] = linear_fit(xc, yc).model;
    out.pearson[c] = pearson(xc, yc);
  }
  return out;
}

}  // namespace knotstat

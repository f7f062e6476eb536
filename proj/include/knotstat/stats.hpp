#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace knotstat {

struct SampleStats {
  double mean;
  double variance;  // 1/(n-1) normalization
  double std;
};

double mean(std::span<const double> x);
/// Throws DataError for n < 2.
SampleStats sample_stats(std::span<const double> x);
/// Sample covariance with the same 1/(n-1) normalization as sample_stats.
double covariance(std::span<const double> x, std::span<const double> y);

/// Pearson r, clamped to [-1, 1]. NumericError if either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct LinearModel {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double x) const noexcept { return slope * x + intercept; }
};

struct LinearFit {
  LinearModel model;
  double train_mse;
};

/// Closed-form least squares line. NumericError if x is constant.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct MultilinearModel {
  Eigen::VectorXd beta;
  double intercept = 0.0;
  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    return x.dot(beta.transpose()) + intercept;
  }
};

/// Normal equations with an intercept column, solved by partially pivoted LU.
/// NumericError (with the reciprocal condition estimate) when the system is
/// numerically singular.
MultilinearModel multilinear_fit(const Eigen::MatrixXd& X, std::span<const double> y);

double mse(std::span<const double> pred, std::span<const double> y);
/// Percent. DataError if any target is exactly zero.
double mape(std::span<const double> pred, std::span<const double> y);
/// MAPE, or nullopt when the targets contain a zero.
std::optional<double> mape_if_defined(std::span<const double> pred, std::span<const double> y);

struct MetricReport {
  double mse = 0.0;
  std::optional<double> mape;
  std::optional<double> relative_mse;
};

MetricReport metric_report(std::span<const double> pred, std::span<const double> y);

struct TwoClusterFit {
  LinearModel fits[2];
  double pearson[2];
  std::vector<int> assignment;  // 0 or 1 per point
  int iterations;
};

/// 2-means on standardized (x, y): 10 seeded k-means++ restarts of at most 100
/// Lloyd iterations each, keeping the lowest within-cluster sum of squares, then
/// a line and a Pearson r within each cluster. Cluster 0
/// has the smaller centroid x (ties broken by y). DataError when a cluster
/// ends with fewer than two points.
TwoClusterFit two_cluster_fit(std::span<const double> x, std::span<const double> y,
                              std::uint64_t seed);

}  // namespace knotstat

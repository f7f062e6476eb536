#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "knotstat/ann.hpp"
#include "knotstat/derived.hpp"
#include "knotstat/knot_data.hpp"
#include "knotstat/stats.hpp"

namespace knotstat {

enum class InputInvariant { RescaledDet, RescaledMahler, RescaledZetaEval, JonesVector, KhovanovVector };

enum class TargetInvariant { Vol, LongitudeLength, MeridianLength, MuX, MuY, CuspVolume, ChernSimons };

inline constexpr std::array<InputInvariant, 3> kScalarInputs = {
    InputInvariant::RescaledDet, InputInvariant::RescaledMahler, InputInvariant::RescaledZetaEval};

inline constexpr std::array<InputInvariant, 5> kAllInputs = {
    InputInvariant::KhovanovVector, InputInvariant::JonesVector, InputInvariant::RescaledDet,
    InputInvariant::RescaledMahler, InputInvariant::RescaledZetaEval};

inline constexpr std::array<TargetInvariant, 7> kAllTargets = {
    TargetInvariant::Vol,  TargetInvariant::LongitudeLength, TargetInvariant::MeridianLength,
    TargetInvariant::MuX,  TargetInvariant::MuY,             TargetInvariant::CuspVolume,
    TargetInvariant::ChernSimons};

inline constexpr std::array<KnotClass, 3> kAllClasses = {KnotClass::All, KnotClass::Alternating,
                                                         KnotClass::NonAlternating};

/// "det", "mahler", "zeta", "jones", "khovanov".
InputInvariant parse_input(std::string_view text);
std::string_view to_string(InputInvariant i) noexcept;
/// "vol", "longitude_length", "meridian_length", "mu_x", "mu_y", "cusp_volume", "chern_simons".
TargetInvariant parse_target(std::string_view text);
std::string_view to_string(TargetInvariant t) noexcept;

constexpr bool is_scalar(InputInvariant i) noexcept {
  return i != InputInvariant::JonesVector && i != InputInvariant::KhovanovVector;
}

std::optional<double> target_value(const KnotRecord& rec, TargetInvariant t) noexcept;

struct DerivedOptions {
  RootOfUnity zeta{3, 5};
  std::size_t mahler_points = kDefaultMahlerPoints;
};

/// Rescaled scalar invariant of one record, or nullopt when the record has
/// Jones degree < 2 or a non-positive raw value.
std::optional<double> scalar_input(const KnotRecord& rec, InputInvariant input,
                                   const DerivedOptions& opts);

/// Accepts "k/n" (root of unity e^{2 pi i k/n}), "Xpi/Y", "pi", "Xpi" and
/// plain radians.
double parse_phase(std::string_view text);

// ---------------------------------------------------------------------------
// Train/test split and baseline.

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded shuffle of 0..n-1; the first ceil(fraction * n) go to train.
SplitIndices split_indices(std::size_t n, double fraction, std::uint64_t seed);

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

DatasetSplit split(const Dataset& ds, double fraction, std::uint64_t seed);

struct BaselineMean {
  double value = 0.0;
  double operator()(double /*input*/ = 0.0) const noexcept { return value; }
};

BaselineMean baseline_mean(std::span<const double> train_targets);

/// Strictly less than half of the baseline error.
constexpr bool is_bold(double error, double baseline_error) noexcept {
  return error < 0.5 * baseline_error;
}

// ---------------------------------------------------------------------------
// Single experiment.

enum class ModelKind { LinearRegression, Ann, BaselineMean };

ModelKind parse_model(std::string_view text);
std::string_view to_string(ModelKind m) noexcept;

struct AnnModelSpec {
  std::vector<int> hidden{100, 100};
  Activation activation = Activation::ReLU;
  TrainConfig train;
};

struct ExperimentConfig {
  InputInvariant input = InputInvariant::RescaledZetaEval;
  TargetInvariant target = TargetInvariant::Vol;
  KnotClass knot_class = KnotClass::All;
  ModelKind model = ModelKind::LinearRegression;
  AnnModelSpec ann;
  double split_fraction = 0.8;
  std::uint64_t split_seed = 42;
  DerivedOptions derived;

  /// UsageError for scalar+ANN, vector+linear, or a fraction outside (0, 1).
  void validate() const;
};

/// Column layout a model was trained against, so saved models can vectorize
/// new data identically.
struct FeatureLayout {
  InputInvariant input = InputInvariant::JonesVector;
  std::optional<JonesWindow> jones;
  std::optional<KhovanovGrid> khovanov;
  DerivedOptions derived;
};

struct ResultCell {
  InputInvariant input{};
  TargetInvariant target{};
  KnotClass knot_class{};
  ModelKind model{};
  std::optional<double> mape;
  double mse = 0.0;
  double relative_mse = 0.0;
  std::optional<double> pearson;  // test predictions vs test targets
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  bool bold_mape = false;
  bool bold_mse = false;
  std::optional<double> baseline_mape;
  double baseline_mse = 0.0;
  std::size_t dropped_target = 0;  // records lacking the target
  std::size_t dropped_input = 0;   // records lacking usable input data
  std::optional<std::string> error;  // set only for failed table cells
};

struct FeatureSet {
  Eigen::MatrixXd X;
  std::vector<double> y;
  std::vector<std::size_t> rows;  // indices into the input dataset
  FeatureLayout layout;
  std::size_t dropped_target = 0;
  std::size_t dropped_input = 0;
};

/// Filters by class, drops records lacking the target or input, and builds the
/// feature matrix. Vector windows span the whole filtered set.
FeatureSet build_features(const Dataset& ds, const ExperimentConfig& cfg);
/// Same, but vectorized against a fixed layout (for evaluating saved models).
FeatureSet build_features(const Dataset& ds, const FeatureLayout& layout, TargetInvariant target,
                          KnotClass knot_class);

struct ExperimentOutcome {
  ResultCell cell;
  std::optional<Network> network;
  std::optional<LinearModel> linear;
  FeatureLayout layout;
  std::vector<double> loss_history;
};

ExperimentOutcome run_experiment_detailed(const Dataset& ds, const ExperimentConfig& cfg);
ResultCell run_experiment(const Dataset& ds, const ExperimentConfig& cfg);

/// MSE with differences taken modulo `period` onto [-period/2, period/2),
/// for circle-valued targets such as Chern-Simons.
double wrapped_mse(std::span<const double> pred, std::span<const double> y, double period = 0.5);

// ---------------------------------------------------------------------------
// Tables.

struct CorrelationCell {
  KnotClass knot_class{};
  InputInvariant input{};
  TargetInvariant target{};
  std::optional<double> r;
  std::size_t n = 0;
};

struct TwoClusterSummary {
  double pearson[2];
  LinearModel fits[2];
  std::size_t sizes[2];
};

struct CorrelationTable {
  std::vector<KnotClass> classes;
  std::vector<InputInvariant> inputs;
  std::vector<TargetInvariant> targets;
  std::vector<CorrelationCell> cells;  // class-major, then input, then target
  std::optional<TwoClusterSummary> mahler_clusters;  // RescaledMahler vs Vol, all knots
  DerivedOptions derived;

  const CorrelationCell& at(std::size_t c, std::size_t i, std::size_t t) const {
    return cells[(c * inputs.size() + i) * targets.size() + t];
  }
};

struct CorrelationOptions {
  std::vector<KnotClass> classes{kAllClasses.begin(), kAllClasses.end()};
  std::vector<TargetInvariant> targets{kAllTargets.begin(), kAllTargets.end()};
  DerivedOptions derived;
  std::optional<std::uint64_t> cluster_seed = 42;  // nullopt skips the two-cluster fit
};

/// Pearson r on all records (no split) per class x scalar input x target.
CorrelationTable run_correlation_table(const Dataset& ds, const CorrelationOptions& opts = {});

struct ErrorTableConfig {
  std::vector<KnotClass> classes{kAllClasses.begin(), kAllClasses.end()};
  std::vector<InputInvariant> inputs{kAllInputs.begin(), kAllInputs.end()};
  std::vector<TargetInvariant> targets{kAllTargets.begin(), kAllTargets.end()};
  AnnModelSpec ann;
  double split_fraction = 0.8;
  std::uint64_t split_seed = 42;
  DerivedOptions derived;
  unsigned threads = 1;
};

struct ErrorTable {
  ErrorTableConfig config;
  std::vector<ModelKind> row_models;        // per row: ANN / linear / baseline
  std::vector<InputInvariant> row_inputs;   // the baseline row uses JonesVector records
  std::vector<ResultCell> cells;            // class-major, then row, then target

  std::size_t rows() const noexcept { return row_models.size(); }
  const ResultCell& at(std::size_t c, std::size_t row, std::size_t t) const {
    return cells[(c * rows() + row) * config.targets.size() + t];
  }
};

/// Runs every (class, model row, target) cell. Vector inputs use the ANN,
/// scalar inputs linear regression, plus a closing baseline row. Every cell
/// splits with split_seed; ANN seeds are derived from the cell index, so any
/// thread count yields the same table. A failing cell records its error
/// instead of aborting.
ErrorTable run_error_tables(const Dataset& ds, const ErrorTableConfig& cfg);

// ---------------------------------------------------------------------------
// Formula distillation and phase sweep.

struct FormulaFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double phase = 0.0;
  double mape = 0.0;  // percent, full dataset
  double mse = 0.0;
  std::size_t n = 0;
  std::size_t dropped = 0;
  std::vector<double> trajectory;  // best objective after each accepted step

  double operator()(double modulus) const;
};

/// target ~ a * ln(|J(e^{i phase})| + b) - c with b found by golden-section
/// search on (1e-6, 100] and (a, c) by least squares for each b. Every record
/// must carry a positive target (DataError otherwise).
FormulaFit distill_formula(const Dataset& ds, double phase, TargetInvariant target = TargetInvariant::Vol);
/// MAPE and MSE of fixed constants on the same records distill_formula uses.
FormulaFit evaluate_formula(const Dataset& ds, double phase, double a, double b, double c,
                            TargetInvariant target = TargetInvariant::Vol);

struct SweepEntry {
  RootOfUnity root;
  std::optional<double> r;
  std::size_t n = 0;
  std::size_t dropped = 0;
};

/// Pearson r of rescaled |J(e^{2 pi i k/n})| against the target, sorted
/// descending (undefined r last, ties keep input order).
std::vector<SweepEntry> phase_sweep(const Dataset& ds, std::span<const RootOfUnity> phases,
                                    TargetInvariant target = TargetInvariant::Vol);

struct ScatterData {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> names;
  std::vector<bool> alternating;
  LinearFit fit;
  std::optional<double> r;
};

ScatterData scatter_data(const Dataset& ds, InputInvariant input, TargetInvariant target,
                         KnotClass knot_class, const DerivedOptions& opts = {});
std::string scatter_csv(const ScatterData& data, InputInvariant input, TargetInvariant target,
                        KnotClass knot_class);
/// Writes scatter_csv to path; IoError on failure.
ScatterData export_scatter(const Dataset& ds, InputInvariant input, TargetInvariant target,
                           KnotClass knot_class, const std::filesystem::path& path,
                           const DerivedOptions& opts = {});

}  // namespace knotstat

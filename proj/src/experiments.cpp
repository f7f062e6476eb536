#include "knotstat/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "knotstat/error.hpp"
#include "knotstat/format.hpp"
#include "knotstat/rng.hpp"

namespace knotstat {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view text, const std::array<std::pair<std::string_view, E>, N>& table,
             std::string_view what) {
  for (const auto& [name, value] : table)
    if (name == text) return value;
  std::string options;
  for (const auto& [name, value] : table) options += (options.empty() ? "" : ", ") + std::string(name);
  throw UsageError("unknown " + std::string(what) + " '" + std::string(text) + "' (expected one of " +
                   options + ")");
}

constexpr std::array<std::pair<std::string_view, InputInvariant>, 5> kInputNames{{
    {"det", InputInvariant::RescaledDet},
    {"mahler", InputInvariant::RescaledMahler},
    {"zeta", InputInvariant::RescaledZetaEval},
    {"jones", InputInvariant::JonesVector},
    {"khovanov", InputInvariant::KhovanovVector},
}};

constexpr std::array<std::pair<std::string_view, TargetInvariant>, 7> kTargetNames{{
    {"vol", TargetInvariant::Vol},
    {"longitude_length", TargetInvariant::LongitudeLength},
    {"meridian_length", TargetInvariant::MeridianLength},
    {"mu_x", TargetInvariant::MuX},
    {"mu_y", TargetInvariant::MuY},
    {"cusp_volume", TargetInvariant::CuspVolume},
    {"chern_simons", TargetInvariant::ChernSimons},
}};

constexpr std::array<std::pair<std::string_view, ModelKind>, 3> kModelNames{{
    {"linear", ModelKind::LinearRegression},
    {"ann", ModelKind::Ann},
    {"baseline", ModelKind::BaselineMean},
}};

template <typename E, std::size_t N>
std::string_view enum_name(E value, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, v] : table)
    if (v == value) return name;
  return "?";
}

bool in_class(const KnotRecord& rec, KnotClass c) {
  switch (c) {
    case KnotClass::All: return true;
    case KnotClass::Alternating: return rec.alternating;
    case KnotClass::NonAlternating: return !rec.alternating;
  }
  return false;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

using ScalarColumn = std::vector<std::optional<double>>;

ScalarColumn scalar_column(const Dataset& ds, InputInvariant input, const DerivedOptions& opts) {
  ScalarColumn col;
  col.reserve(ds.size());
  for (const auto& rec : ds) col.push_back(scalar_input(rec, input, opts));
  return col;
}

bool jones_inside(const KnotRecord& rec, const JonesWindow& w) {
  return rec.jones.min_exp() >= w.min_exp && rec.jones.max_exp() <= w.max_exp;
}

bool khovanov_inside(const KnotRecord& rec, const KhovanovGrid& g) {
  for (const auto& [key, c] : rec.khovanov->terms()) {
    if (key.first < g.i_min || key.first > g.i_max || key.second < g.j_min || key.second > g.j_max)
      return false;
  }
  return true;
}

// Shared by the fitting and the fixed-layout paths. With `fixed` unset the
// vector windows are taken from the kept records.
FeatureSet build_features_impl(const Dataset& ds, InputInvariant input, TargetInvariant target,
                               KnotClass knot_class, const DerivedOptions& derived,
                               const ScalarColumn* scalars, const FeatureLayout* fixed) {
  FeatureSet fs;
  fs.layout.input = input;
  fs.layout.derived = derived;
  std::vector<double> xs;
  std::vector<KnotRecord> kept;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& rec = ds[i];
    if (!in_class(rec, knot_class)) continue;
    const auto t = target_value(rec, target);
    if (!t) {
      ++fs.dropped_target;
      continue;
    }
    if (is_scalar(input)) {
      const auto v = scalars ? (*scalars)[i] : scalar_input(rec, input, derived);
      if (!v) {
        ++fs.dropped_input;
        continue;
      }
      xs.push_back(*v);
    } else if (input == InputInvariant::KhovanovVector) {
      if (!rec.khovanov || (fixed && !khovanov_inside(rec, *fixed->khovanov))) {
        ++fs.dropped_input;
        continue;
      }
      kept.push_back(rec);
    } else {
      if (fixed && !jones_inside(rec, *fixed->jones)) {
        ++fs.dropped_input;
        continue;
      }
      kept.push_back(rec);
    }
    fs.rows.push_back(i);
    fs.y.push_back(*t);
  }
  if (fs.rows.empty())
    throw DataError("no records of class '" + std::string(to_string(knot_class)) + "' carry both '" +
                    std::string(to_string(input)) + "' and '" + std::string(to_string(target)) + "'");

  if (is_scalar(input)) {
    fs.X = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  } else if (input == InputInvariant::JonesVector) {
    const Dataset sub(std::move(kept));
    auto m = fixed ? vectorize_jones(sub, *fixed->jones) : vectorize_jones(sub);
    fs.X = std::move(m.values);
    fs.layout.jones = m.window;
  } else {
    const Dataset sub(std::move(kept));
    auto m = fixed ? vectorize_khovanov(sub, *fixed->khovanov) : vectorize_khovanov(sub);
    fs.X = std::move(m.values);
    fs.layout.khovanov = m.grid;
  }
  return fs;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), X.cols());
  for (std::size_t r = 0; r < idx.size(); ++r)
    out.row(static_cast<Eigen::Index>(r)) = X.row(static_cast<Eigen::Index>(idx[r]));
  return out;
}

std::vector<double> take(const std::vector<double>& v, const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

ExperimentOutcome run_on_features(const FeatureSet& fs, const ExperimentConfig& cfg) {
  const auto parts = split_indices(fs.y.size(), cfg.split_fraction, cfg.split_seed);
  if (parts.train.empty() || parts.test.empty())
    throw DataError("split of " + std::to_string(fs.y.size()) + " records leaves an empty part");

  const Eigen::MatrixXd X_train = take_rows(fs.X, parts.train);
  const Eigen::MatrixXd X_test = take_rows(fs.X, parts.test);
  const auto y_train = take(fs.y, parts.train);
  const auto y_test = take(fs.y, parts.test);

  ExperimentOutcome out;
  out.layout = fs.layout;
  ResultCell& cell = out.cell;
  cell.input = cfg.input;
  cell.target = cfg.target;
  cell.knot_class = cfg.knot_class;
  cell.model = cfg.model;
  cell.n_train = y_train.size();
  cell.n_test = y_test.size();
  cell.dropped_target = fs.dropped_target;
  cell.dropped_input = fs.dropped_input;

  const auto baseline = baseline_mean(y_train);
  const std::vector<double> base_pred(y_test.size(), baseline.value);

  std::vector<double> pred;
  switch (cfg.model) {
    case ModelKind::LinearRegression: {
      const std::vector<double> x(X_train.data(), X_train.data() + X_train.size());
      const auto fit = linear_fit(x, y_train);
      for (Eigen::Index r = 0; r < X_test.rows(); ++r) pred.push_back(fit.model(X_test(r, 0)));
      out.linear = fit.model;
      break;
    }
    case ModelKind::Ann: {
      const auto spec = make_spec(static_cast<int>(fs.X.cols()), cfg.ann.hidden, cfg.ann.activation);
      auto trained = train(spec, X_train, y_train, cfg.ann.train);
      const Eigen::VectorXd p = predict(trained.network, X_test);
      pred.assign(p.data(), p.data() + p.size());
      out.network = std::move(trained.network);
      out.loss_history = std::move(trained.loss_history);
      break;
    }
    case ModelKind::BaselineMean:
      pred = base_pred;
      break;
  }

  cell.baseline_mse = mse(base_pred, y_test);
  cell.baseline_mape = mape_if_defined(base_pred, y_test);
  if (!(cell.baseline_mse > 0))
    throw NumericError("baseline MSE is zero on the test split; relative MSE is undefined");
  cell.mse = mse(pred, y_test);
  cell.mape = mape_if_defined(pred, y_test);
  cell.relative_mse = cell.mse / cell.baseline_mse;
  cell.bold_mse = is_bold(cell.mse, cell.baseline_mse);
  cell.bold_mape = cell.mape && cell.baseline_mape && is_bold(*cell.mape, *cell.baseline_mape);
  if (cfg.model != ModelKind::BaselineMean && pred.size() >= 2) {
    try {
      cell.pearson = pearson(pred, y_test);
    } catch (const NumericError&) {
    }
  }
  return out;
}

struct FormulaData {
  std::vector<double> modulus;
  std::vector<double> y;
};

FormulaData formula_data(const Dataset& ds, double phase, TargetInvariant target) {
  FormulaData d;
  for (const auto& rec : ds) {
    const auto t = target_value(rec, target);
    if (!t) throw DataError(rec.name + ": missing " + std::string(to_string(target)));
    if (!(*t > 0))
      throw DataError(rec.name + ": " + std::string(to_string(target)) + " = " + format_double(*t) +
                      " is not positive");
    d.modulus.push_back(unit_circle_modulus(rec.jones, phase));
    d.y.push_back(*t);
  }
  if (d.y.size() < 3) throw DataError("formula fitting needs at least 3 records");
  return d;
}

std::vector<double> log_shift(const std::vector<double>& m, double b) {
  std::vector<double> out;
  out.reserve(m.size());
  for (double v : m) out.push_back(std::log(v + b));
  return out;
}

void finish_formula(FormulaFit& f, const FormulaData& d) {
  std::vector<double> pred;
  pred.reserve(d.y.size());
  for (double m : d.modulus) pred.push_back(f(m));
  f.mape = mape(pred, d.y);
  f.mse = mse(pred, d.y);
  f.n = d.y.size();
}

}  // namespace

InputInvariant parse_input(std::string_view text) { return parse_enum(text, kInputNames, "input"); }
std::string_view to_string(InputInvariant i) noexcept { return enum_name(i, kInputNames); }
TargetInvariant parse_target(std::string_view text) { return parse_enum(text, kTargetNames, "target"); }
std::string_view to_string(TargetInvariant t) noexcept { return enum_name(t, kTargetNames); }
ModelKind parse_model(std::string_view text) { return parse_enum(text, kModelNames, "model"); }
std::string_view to_string(ModelKind m) noexcept { return enum_name(m, kModelNames); }

std::optional<double> target_value(const KnotRecord& rec, TargetInvariant t) noexcept {
  const auto& h = rec.hyperbolic;
  switch (t) {
    case TargetInvariant::Vol: return h.vol;
    case TargetInvariant::LongitudeLength: return h.longitude_length;
    case TargetInvariant::MeridianLength: return h.meridian_length;
    case TargetInvariant::MuX: return h.mu_x;
    case TargetInvariant::MuY: return h.mu_y;
    case TargetInvariant::CuspVolume: return h.cusp_volume;
    case TargetInvariant::ChernSimons: return h.chern_simons;
  }
  return std::nullopt;
}

std::optional<double> scalar_input(const KnotRecord& rec, InputInvariant input,
                                   const DerivedOptions& opts) {
  const int deg = degree(rec.jones);
  if (deg < 2) return std::nullopt;
  double raw = 0.0;
  switch (input) {
    case InputInvariant::RescaledDet: {
      std::int64_t d = 0;
      for (int e = rec.jones.min_exp(); e <= rec.jones.max_exp(); ++e)
        d += (e % 2 == 0) ? rec.jones.coefficient(e) : -rec.jones.coefficient(e);
      raw = static_cast<double>(d < 0 ? -d : d);
      break;
    }
    case InputInvariant::RescaledMahler:
      raw = mahler_measure(rec.jones, opts.mahler_points);
      break;
    case InputInvariant::RescaledZetaEval:
      raw = root_of_unity_modulus(rec.jones, opts.zeta.k, opts.zeta.n);
      break;
    default:
      throw UsageError("'" + std::string(to_string(input)) + "' is not a scalar input");
  }
  if (!(raw > 0)) return std::nullopt;
  return rescale(raw, deg);
}

double parse_phase(std::string_view text) {
  const std::string s = trim(text);
  const auto bad = [&] {
    return UsageError("cannot parse phase '" + s + "' (expected k/n, Xpi/Y, pi or radians)");
  };
  if (s.empty()) throw bad();
  if (const auto pi_at = s.find("pi"); pi_at != std::string::npos) {
    const std::string_view num(s.data(), pi_at);
    std::string_view rest = std::string_view(s).substr(pi_at + 2);
    double factor = 1.0;
    if (num == "-") {
      factor = -1.0;
    } else if (!num.empty() && num != "+" && !parse_number(num, factor)) {
      throw bad();
    }
    double denom = 1.0;
    if (!rest.empty()) {
      if (rest.front() != '/') throw bad();
      rest.remove_prefix(1);
      if (!parse_number(rest, denom) || denom == 0.0) throw bad();
    }
    return factor * std::numbers::pi / denom;
  }
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    int k = 0;
    int n = 0;
    if (!parse_number(std::string_view(s).substr(0, slash), k) ||
        !parse_number(std::string_view(s).substr(slash + 1), n) || n <= 0)
      throw bad();
    return RootOfUnity{k, n}.phase();
  }
  double v = 0.0;
  if (!parse_number(std::string_view(s), v) || !std::isfinite(v)) throw bad();
  return v;
}

SplitIndices split_indices(std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw UsageError("split fraction must lie in (0, 1), got " + format_double(fraction));
  if (n == 0) throw DataError("cannot split an empty dataset");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const auto n_train = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return out;
}

DatasetSplit split(const Dataset& ds, double fraction, std::uint64_t seed) {
  const auto parts = split_indices(ds.size(), fraction, seed);
  if (parts.train.empty() || parts.test.empty())
    throw DataError("split of " + std::to_string(ds.size()) + " records leaves an empty part");
  std::vector<KnotRecord> train;
  std::vector<KnotRecord> test;
  for (auto i : parts.train) train.push_back(ds[i]);
  for (auto i : parts.test) test.push_back(ds[i]);
  return {Dataset(std::move(train), ds.provenance()), Dataset(std::move(test), ds.provenance())};
}

BaselineMean baseline_mean(std::span<const double> train_targets) {
  if (train_targets.empty()) throw DataError("baseline needs at least one training target");
  return {mean(train_targets)};
}

void ExperimentConfig::validate() const {
  if (!(split_fraction > 0.0 && split_fraction < 1.0))
    throw UsageError("split fraction must lie in (0, 1), got " + format_double(split_fraction));
  if (model == ModelKind::LinearRegression && !is_scalar(input))
    throw UsageError("linear regression needs a scalar input, got '" +
                     std::string(to_string(input)) + "'");
  if (model == ModelKind::Ann && is_scalar(input))
    throw UsageError("the ANN needs a vector input, got '" + std::string(to_string(input)) + "'");
  if (model == ModelKind::Ann) {
    for (int h : ann.hidden)
      if (h <= 0) throw UsageError("hidden layer widths must be positive");
    ann.train.validate();
  }
  if (derived.zeta.k <= 0 || derived.zeta.k >= derived.zeta.n)
    throw UsageError("root of unity needs 0 < k < n");
  if (derived.mahler_points < 64) throw UsageError("mahler_points must be at least 64");
}

FeatureSet build_features(const Dataset& ds, const ExperimentConfig& cfg) {
  return build_features_impl(ds, cfg.input, cfg.target, cfg.knot_class, cfg.derived, nullptr,
                             nullptr);
}

FeatureSet build_features(const Dataset& ds, const FeatureLayout& layout, TargetInvariant target,
                          KnotClass knot_class) {
  if (layout.input == InputInvariant::JonesVector && !layout.jones)
    throw UsageError("feature layout lacks the Jones window");
  if (layout.input == InputInvariant::KhovanovVector && !layout.khovanov)
    throw UsageError("feature layout lacks the Khovanov grid");
  return build_features_impl(ds, layout.input, target, knot_class, layout.derived, nullptr, &layout);
}

ExperimentOutcome run_experiment_detailed(const Dataset& ds, const ExperimentConfig& cfg) {
  cfg.validate();
  return run_on_features(build_features(ds, cfg), cfg);
}

ResultCell run_experiment(const Dataset& ds, const ExperimentConfig& cfg) {
  return run_experiment_detailed(ds, cfg).cell;
}

double wrapped_mse(std::span<const double> pred, std::span<const double> y, double period) {
  if (pred.size() != y.size() || y.empty())
    throw DataError("wrapped_mse needs equal-length non-empty vectors");
  if (!(period > 0)) throw UsageError("period must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double d = std::fmod(pred[i] - y[i], period);
    if (d >= period / 2) d -= period;
    if (d < -period / 2) d += period;
    sum += d * d;
  }
  return sum / static_cast<double>(y.size());
}

CorrelationTable run_correlation_table(const Dataset& ds, const CorrelationOptions& opts) {
  if (ds.empty()) throw DataError("cannot correlate an empty dataset");
  CorrelationTable table;
  table.classes = opts.classes;
  table.inputs.assign(kScalarInputs.begin(), kScalarInputs.end());
  table.targets = opts.targets;
  table.derived = opts.derived;

  std::vector<ScalarColumn> columns;
  for (auto input : table.inputs) columns.push_back(scalar_column(ds, input, opts.derived));

  for (auto c : table.classes) {
    for (std::size_t ii = 0; ii < table.inputs.size(); ++ii) {
      for (auto t : table.targets) {
        CorrelationCell cell{c, table.inputs[ii], t, std::nullopt, 0};
        std::vector<double> x;
        std::vector<double> y;
        for (std::size_t r = 0; r < ds.size(); ++r) {
          const auto tv = target_value(ds[r], t);
          if (!in_class(ds[r], c) || !tv || !columns[ii][r]) continue;
          x.push_back(*columns[ii][r]);
          y.push_back(*tv);
        }
        cell.n = x.size();
        if (x.size() >= 2) {
          try {
            cell.r = pearson(x, y);
          } catch (const NumericError&) {
          }
        }
        table.cells.push_back(cell);
      }
    }
  }

  if (opts.cluster_seed) {
    std::vector<double> x;
    std::vector<double> y;
    const auto& col = columns[1];  // RescaledMahler
    for (std::size_t r = 0; r < ds.size(); ++r) {
      if (!col[r] || !ds[r].hyperbolic.vol) continue;
      x.push_back(*col[r]);
      y.push_back(*ds[r].hyperbolic.vol);
    }
    try {
      const auto fit = two_cluster_fit(x, y, *opts.cluster_seed);
      TwoClusterSummary s{};
      for (int k = 0; k < 2; ++k) {
        s.pearson[k] = fit.pearson[k];
        s.fits[k] = fit.fits[k];
        s.sizes[k] = static_cast<std::size_t>(std::count(fit.assignment.begin(), fit.assignment.end(), k));
      }
      table.mahler_clusters = s;
    } catch (const Error&) {
      // Too few or degenerate points: the summary is simply omitted.
    }
  }
  return table;
}

ErrorTable run_error_tables(const Dataset& ds, const ErrorTableConfig& cfg) {
  ErrorTable table;
  table.config = cfg;
  for (auto input : cfg.inputs) {
    table.row_models.push_back(is_scalar(input) ? ModelKind::LinearRegression : ModelKind::Ann);
    table.row_inputs.push_back(input);
  }
  table.row_models.push_back(ModelKind::BaselineMean);
  table.row_inputs.push_back(InputInvariant::JonesVector);

  // Scalar invariants (the Mahler quadrature in particular) are shared by
  // every class and target, so compute them once up front.
  std::map<InputInvariant, ScalarColumn> scalars;
  for (auto input : cfg.inputs)
    if (is_scalar(input) && !scalars.count(input))
      scalars.emplace(input, scalar_column(ds, input, cfg.derived));

  const std::size_t n_cells = cfg.classes.size() * table.rows() * cfg.targets.size();
  table.cells.resize(n_cells);

  const auto run_cell = [&](std::size_t index) {
    const std::size_t t = index % cfg.targets.size();
    const std::size_t row = (index / cfg.targets.size()) % table.rows();
    const std::size_t c = index / (cfg.targets.size() * table.rows());
    ExperimentConfig ec;
    ec.input = table.row_inputs[row];
    ec.target = cfg.targets[t];
    ec.knot_class = cfg.classes[c];
    ec.model = table.row_models[row];
    ec.ann = cfg.ann;
    ec.ann.train.seed = mix_seed(cfg.ann.train.seed, index);
    ec.split_fraction = cfg.split_fraction;
    ec.split_seed = cfg.split_seed;
    ec.derived = cfg.derived;
    ResultCell& cell = table.cells[index];
    try {
      ec.validate();
      const auto it = scalars.find(ec.input);
      const auto fs = build_features_impl(ds, ec.input, ec.target, ec.knot_class, ec.derived,
                                          it == scalars.end() ? nullptr : &it->second, nullptr);
      cell = run_on_features(fs, ec).cell;
    } catch (const std::exception& e) {
      cell = ResultCell{};
      cell.input = ec.input;
      cell.target = ec.target;
      cell.knot_class = ec.knot_class;
      cell.model = ec.model;
      cell.error = e.what();
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(n_cells)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n_cells; ++i) run_cell(i);
    return table;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n_cells; i = next++) run_cell(i);
    });
  }
  for (auto& th : pool) th.join();
  return table;
}

double FormulaFit::operator()(double modulus) const { return a * std::log(modulus + b) - c; }

FormulaFit distill_formula(const Dataset& ds, double phase, TargetInvariant target) {
  const auto data = formula_data(ds, phase, target);
  constexpr double kLo = 1e-6;
  constexpr double kHi = 100.0;
  constexpr double kTol = 1e-6;

  FormulaFit best;
  best.phase = phase;
  double best_obj = std::numeric_limits<double>::infinity();
  const auto objective = [&](double b) {
    const auto fit = linear_fit(log_shift(data.modulus, b), data.y);
    if (fit.train_mse < best_obj) {
      best_obj = fit.train_mse;
      best.a = fit.model.slope;
      best.b = b;
      best.c = -fit.model.intercept;
    }
    best.trajectory.push_back(best_obj);
    return fit.train_mse;
  };

  // Log-spaced scan to bracket the minimum, then golden-section refinement
  // between the neighbours of the best scan point.
  constexpr int kScan = 64;
  std::vector<double> grid(kScan);
  std::vector<double> values(kScan);
  for (int i = 0; i < kScan; ++i) {
    grid[i] = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kScan - 1));
    values[i] = objective(grid[i]);
  }
  const auto at = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
  double lo = grid[std::max(at - 1, 0)];
  double hi = grid[std::min(at + 1, kScan - 1)];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > kTol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  finish_formula(best, data);
  return best;
}

FormulaFit evaluate_formula(const Dataset& ds, double phase, double a, double b, double c,
                            TargetInvariant target) {
  if (!(b > 0)) throw UsageError("formula constant b must be positive");
  const auto data = formula_data(ds, phase, target);
  FormulaFit f;
  f.a = a;
  f.b = b;
  f.c = c;
  f.phase = phase;
  finish_formula(f, data);
  return f;
}

std::vector<SweepEntry> phase_sweep(const Dataset& ds, std::span<const RootOfUnity> phases,
                                    TargetInvariant target) {
  if (phases.empty()) throw UsageError("phase sweep needs at least one phase");
  for (const auto& p : phases)
    if (p.n <= 0 || p.k <= 0 || p.k >= p.n)
      throw UsageError("root of unity needs 0 < k < n, got " + std::to_string(p.k) + "/" +
                       std::to_string(p.n));
  std::vector<SweepEntry> out;
  for (const auto& p : phases) {
    SweepEntry e{p, std::nullopt, 0, 0};
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& rec : ds) {
      const auto t = target_value(rec, target);
      if (!t) {
        ++e.dropped;
        continue;
      }
      const int deg = degree(rec.jones);
      const double mod = root_of_unity_modulus(rec.jones, p.k, p.n);
      if (deg < 2 || !(mod > 0)) {
        ++e.dropped;
        continue;
      }
      x.push_back(rescale(mod, deg));
      y.push_back(*t);
    }
    e.n = x.size();
    if (x.size() >= 2) {
      try {
        e.r = pearson(x, y);
      } catch (const NumericError&) {
      }
    }
    out.push_back(e);
  }
  std::stable_sort(out.begin(), out.end(), [](const SweepEntry& l, const SweepEntry& r) {
    if (l.r && r.r) return *l.r > *r.r;
    return l.r.has_value() && !r.r.has_value();
  });
  return out;
}

ScatterData scatter_data(const Dataset& ds, InputInvariant input, TargetInvariant target,
                         KnotClass knot_class, const DerivedOptions& opts) {
  if (!is_scalar(input))
    throw UsageError("scatter export needs a scalar input, got '" + std::string(to_string(input)) + "'");
  ScatterData d;
  for (const auto& rec : ds) {
    if (!in_class(rec, knot_class)) continue;
    const auto t = target_value(rec, target);
    const auto x = scalar_input(rec, input, opts);
    if (!t || !x) continue;
    d.x.push_back(*x);
    d.y.push_back(*t);
    d.names.push_back(rec.name);
    d.alternating.push_back(rec.alternating);
  }
  if (d.x.size() < 2) throw DataError("scatter export needs at least two usable records");
  d.fit = linear_fit(d.x, d.y);
  try {
    d.r = pearson(d.x, d.y);
  } catch (const NumericError&) {
  }
  return d;
}

std::string scatter_csv(const ScatterData& data, InputInvariant input, TargetInvariant target,
                        KnotClass knot_class) {
  std::ostringstream os;
  os << "# input=" << to_string(input) << " target=" << to_string(target)
     << " class=" << to_string(knot_class) << "\n";
  os << "# fit slope=" << format_double(data.fit.model.slope)
     << " intercept=" << format_double(data.fit.model.intercept)
     << " mse=" << format_double(data.fit.train_mse)
     << " pearson=" << (data.r ? format_double(*data.r) : std::string("nan")) << " n=" << data.x.size()
     << "\n";
  os << "x,y,name,alternating\n";
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    std::string name = data.names[i];
    if (name.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char ch : name) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
      name = q + "\"";
    }
    os << format_double(data.x[i]) << ',' << format_double(data.y[i]) << ',' << name << ','
       << (data.alternating[i] ? "Y" : "N") << "\n";
  }
  return os.str();
}

ScatterData export_scatter(const Dataset& ds, InputInvariant input, TargetInvariant target,
                           KnotClass knot_class, const std::filesystem::path& path,
                           const DerivedOptions& opts) {
  auto data = scatter_data(ds, input, target, knot_class, opts);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << scatter_csv(data, input, target, knot_class);
  if (!out.flush()) throw IoError("failed writing '" + path.string() + "'");
  return data;
}

}  // namespace knotstat

#include "knotstat/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <string>
#include <thread>

#include "knotstat/error.hpp"
#include "knotstat/report.hpp"

namespace knotstat {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<std::string_view, Command>, 9> kCommandNames{{
    {"validate", Command::Validate},
    {"derive", Command::Derive},
    {"correlate", Command::Correlate},
    {"tables", Command::Tables},
    {"train-ann", Command::TrainAnn},
    {"evaluate", Command::Evaluate},
    {"distill", Command::Distill},
    {"sweep", Command::Sweep},
    {"scatter", Command::Scatter},
}};

// Typed access to a flat request object that rejects keys the command does
// not understand.
class Options {
 public:
  Options(const json& request, std::string_view command, std::initializer_list<std::string_view> allowed)
      : req_(request.is_null() ? empty_ : request) {
    if (!req_.is_object()) throw UsageError("request must be a JSON object");
    std::set<std::string_view> ok(allowed);
    ok.insert("dataset");
    for (const auto& [key, value] : req_.items()) {
      if (!ok.count(key))
        throw UsageError("option '" + key + "' is not valid for '" + std::string(command) + "'");
    }
  }

  bool has(const char* key) const { return req_.contains(key) && !req_.at(key).is_null(); }

  template <typename T>
  T get(const char* key, T fallback) const {
    if (!has(key)) return fallback;
    try {
      return req_.at(key).get<T>();
    } catch (const json::exception&) {
      throw UsageError(std::string("option '") + key + "' has the wrong type");
    }
  }

  json raw(const char* key) const { return has(key) ? req_.at(key) : json(nullptr); }

 private:
  static inline const json empty_ = json::object();
  const json& req_;
};

template <typename E>
std::vector<E> enum_list(const Options& o, const char* single, const char* plural,
                         E (*parse)(std::string_view), std::span<const E> all) {
  if (o.has(single)) return {parse(o.get<std::string>(single, ""))};
  if (o.has(plural)) {
    std::vector<E> out;
    for (const auto& s : o.get<std::vector<std::string>>(plural, {})) out.push_back(parse(s));
    if (out.empty()) throw UsageError(std::string("option '") + plural + "' must not be empty");
    return out;
  }
  return {all.begin(), all.end()};
}

template <typename E>
json names(const std::vector<E>& values) {
  json out = json::array();
  for (auto v : values) out.push_back(to_string(v));
  return out;
}

RootOfUnity parse_root(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos || text.find("pi") != std::string::npos) throw std::invalid_argument("");
    std::size_t used = 0;
    const int k = std::stoi(text.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument("");
    const int n = std::stoi(text.substr(slash + 1), &used);
    if (used != text.size() - slash - 1) throw std::invalid_argument("");
    if (k <= 0 || n <= 0 || k >= n) throw std::invalid_argument("");
    return {k, n};
  } catch (const std::logic_error&) {
    throw UsageError("expected a root of unity 'k/n' with 0 < k < n, got '" + text + "'");
  }
}

DerivedOptions derived_options(const Options& o) {
  DerivedOptions d;
  d.zeta = parse_root(o.get<std::string>("zeta", "3/5"));
  d.mahler_points = o.get<std::size_t>("mahler_points", kDefaultMahlerPoints);
  if (d.mahler_points < 64) throw UsageError("mahler_points must be at least 64");
  return d;
}

json derived_json(const DerivedOptions& d) {
  return {{"zeta", std::to_string(d.zeta.k) + "/" + std::to_string(d.zeta.n)},
          {"mahler_points", d.mahler_points}};
}

AnnModelSpec ann_options(const Options& o, std::uint64_t seed) {
  AnnModelSpec a;
  a.hidden = o.get<std::vector<int>>("hidden", a.hidden);
  a.activation = parse_activation(o.get<std::string>("activation", std::string(to_string(a.activation))));
  a.train.epochs = o.get<std::size_t>("epochs", a.train.epochs);
  a.train.learning_rate = o.get<double>("learning_rate", a.train.learning_rate);
  a.train.batch_size = o.get<std::size_t>("batch_size", a.train.batch_size);
  a.train.momentum = o.get<double>("momentum", a.train.momentum);
  a.train.input_standardize = o.get<bool>("input_standardize", a.train.input_standardize);
  a.train.seed = seed;
  for (int h : a.hidden)
    if (h <= 0) throw UsageError("hidden layer widths must be positive");
  a.train.validate();
  return a;
}

json ann_json(const AnnModelSpec& a) {
  json j = to_json(a.train);
  j["hidden"] = a.hidden;
  j["activation"] = to_string(a.activation);
  return j;
}

unsigned thread_count(const Options& o) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KNOTSTAT_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    } catch (const std::logic_error&) {
      throw UsageError(std::string("KNOTSTAT_THREADS must be a positive integer, got '") + env + "'");
    }
  }
  if (o.has("threads")) {
    const int t = o.get<int>("threads", 1);
    if (t < 1) throw UsageError("threads must be at least 1");
    n = static_cast<unsigned>(t);
  }
  return n;
}

json base_config(const Options& o, const Dataset& ds) {
  return {{"dataset", o.raw("dataset")}, {"provenance", ds.provenance()}, {"records", ds.size()}};
}

json envelope(Command cmd, json config, json result) {
  return {{"schema_version", kSchemaVersion},
          {"command", to_string(cmd)},
          {"config", std::move(config)},
          {"result", std::move(result)}};
}

json maybe(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<RootOfUnity> default_phases() {
  std::vector<RootOfUnity> out;
  for (int n = 2; n <= 12; ++n)
    for (int k = 1; 2 * k <= n; ++k)
      if (std::gcd(k, n) == 1) out.push_back({k, n});
  return out;
}

json run_validate(const Dataset& ds, const json& request) {
  const Options o(request, "validate", {"class"});
  const auto cls = parse_knot_class(o.get<std::string>("class", "all"));
  auto config = base_config(o, ds);
  config["class"] = to_string(cls);
  return envelope(Command::Validate, config, to_json(validate(filter_class(ds, cls))));
}

json run_derive(const Dataset& ds, const json& request) {
  const Options o(request, "derive", {"class", "zeta", "mahler_points"});
  const auto cls = parse_knot_class(o.get<std::string>("class", "all"));
  const auto d = derived_options(o);
  auto config = base_config(o, ds);
  config["class"] = to_string(cls);
  config.update(derived_json(d));

  json records = json::array();
  for (const auto& rec : filter_class(ds, cls)) {
    json det = nullptr;
    try {
      det = determinant(rec.jones);
    } catch (const DataError&) {
    }
    records.push_back({{"name", rec.name},
                       {"crossings", rec.crossing_number},
                       {"alternating", rec.alternating},
                       {"degree", degree(rec.jones)},
                       {"determinant", det},
                       {"mahler", mahler_measure(rec.jones, d.mahler_points)},
                       {"zeta_modulus", root_of_unity_modulus(rec.jones, d.zeta.k, d.zeta.n)},
                       {"rescaled_det", maybe(scalar_input(rec, InputInvariant::RescaledDet, d))},
                       {"rescaled_mahler", maybe(scalar_input(rec, InputInvariant::RescaledMahler, d))},
                       {"rescaled_zeta", maybe(scalar_input(rec, InputInvariant::RescaledZetaEval, d))},
                       {"vol", maybe(rec.hyperbolic.vol)}});
  }
  return envelope(Command::Derive, config, {{"records", records}});
}

json run_correlate(const Dataset& ds, const json& request) {
  const Options o(request, "correlate",
                  {"class", "classes", "target", "targets", "zeta", "mahler_points", "seed"});
  CorrelationOptions opts;
  opts.classes = enum_list<KnotClass>(o, "class", "classes", parse_knot_class, kAllClasses);
  opts.targets = enum_list<TargetInvariant>(o, "target", "targets", parse_target, kAllTargets);
  opts.derived = derived_options(o);
  opts.cluster_seed = o.get<std::uint64_t>("seed", 42);
  auto config = base_config(o, ds);
  config["classes"] = names(opts.classes);
  config["targets"] = names(opts.targets);
  config["seed"] = *opts.cluster_seed;
  config.update(derived_json(opts.derived));
  return envelope(Command::Correlate, config, to_json(run_correlation_table(ds, opts)));
}

json run_tables(const Dataset& ds, const json& request) {
  const Options o(request, "tables",
                  {"class", "classes", "input", "inputs", "target", "targets", "hidden", "activation", "epochs", "learning_rate", "batch_size", "momentum",
                   "input_standardize",
                   "split_fraction", "seed", "zeta", "mahler_points", "threads"});
  ErrorTableConfig cfg;
  const auto seed = o.get<std::uint64_t>("seed", 42);
  cfg.classes = enum_list<KnotClass>(o, "class", "classes", parse_knot_class, kAllClasses);
  cfg.inputs = enum_list<InputInvariant>(o, "input", "inputs", parse_input, kAllInputs);
  cfg.targets = enum_list<TargetInvariant>(o, "target", "targets", parse_target, kAllTargets);
  cfg.ann = ann_options(o, seed);
  cfg.split_fraction = o.get<double>("split_fraction", 0.8);
  cfg.split_seed = seed;
  cfg.derived = derived_options(o);
  cfg.threads = thread_count(o);
  if (!(cfg.split_fraction > 0 && cfg.split_fraction < 1))
    throw UsageError("split_fraction must lie in (0, 1)");

  auto config = base_config(o, ds);
  config["classes"] = names(cfg.classes);
  config["inputs"] = names(cfg.inputs);
  config["targets"] = names(cfg.targets);
  config["ann"] = ann_json(cfg.ann);
  config["split_fraction"] = cfg.split_fraction;
  config["seed"] = seed;
  config.update(derived_json(cfg.derived));
  return envelope(Command::Tables, config, to_json(run_error_tables(ds, cfg)));
}

json run_train_ann(const Dataset& ds, const json& request) {
  const Options o(request, "train-ann",
                  {"class", "input", "target", "hidden", "activation", "epochs", "learning_rate", "batch_size", "momentum",
                   "input_standardize", "split_fraction", "seed"});
  ExperimentConfig cfg;
  const auto seed = o.get<std::uint64_t>("seed", 42);
  cfg.input = parse_input(o.get<std::string>("input", "jones"));
  cfg.target = parse_target(o.get<std::string>("target", "vol"));
  cfg.knot_class = parse_knot_class(o.get<std::string>("class", "all"));
  cfg.model = ModelKind::Ann;
  cfg.ann = ann_options(o, seed);
  cfg.split_fraction = o.get<double>("split_fraction", 0.8);
  cfg.split_seed = seed;

  auto outcome = run_experiment_detailed(ds, cfg);
  auto config = base_config(o, ds);
  config["class"] = to_string(cfg.knot_class);
  config["input"] = to_string(cfg.input);
  config["target"] = to_string(cfg.target);
  config["ann"] = ann_json(cfg.ann);
  config["split_fraction"] = cfg.split_fraction;
  config["seed"] = seed;

  const TrainedModel model{outcome.layout, cfg.target, std::move(*outcome.network)};
  json result = {{"cell", to_json(outcome.cell)},
                 {"parameters", param_count(model.network.spec).total()},
                 {"loss_history", outcome.loss_history}};
  auto env = envelope(Command::TrainAnn, config, result);
  env["model"] = to_json(model);
  return env;
}

json run_distill(const Dataset& ds, const json& request) {
  const Options o(request, "distill", {"class", "phase", "target", "compare"});
  const auto cls = parse_knot_class(o.get<std::string>("class", "all"));
  const auto phase_text = o.has("phase") && o.raw("phase").is_number()
                              ? std::to_string(o.get<double>("phase", 0.0))
                              : o.get<std::string>("phase", "3pi/4");
  const double phase = parse_phase(phase_text);
  const auto target = parse_target(o.get<std::string>("target", "vol"));
  const auto filtered = filter_class(ds, cls);
  const auto fit = distill_formula(filtered, phase, target);

  auto config = base_config(o, ds);
  config["class"] = to_string(cls);
  config["phase"] = phase_text;
  config["phase_radians"] = phase;
  config["target"] = to_string(target);
  config["compare"] = nullptr;
  json comparison = nullptr;
  if (o.has("compare")) {
    const auto abc = o.get<std::vector<double>>("compare", {});
    if (abc.size() != 3) throw UsageError("option 'compare' needs exactly three constants a, b, c");
    const auto ref = evaluate_formula(filtered, phase, abc[0], abc[1], abc[2], target);
    config["compare"] = abc;
    comparison = {{"a", ref.a}, {"b", ref.b}, {"c", ref.c}, {"mape", ref.mape}, {"mse", ref.mse}};
  }
  return envelope(Command::Distill, config, {{"fit", to_json(fit)}, {"comparison", comparison}});
}

json run_sweep(const Dataset& ds, const json& request) {
  const Options o(request, "sweep", {"class", "phases", "target"});
  const auto cls = parse_knot_class(o.get<std::string>("class", "all"));
  const auto target = parse_target(o.get<std::string>("target", "vol"));
  std::vector<RootOfUnity> phases;
  if (o.has("phases")) {
    for (const auto& s : o.get<std::vector<std::string>>("phases", {})) phases.push_back(parse_root(s));
  } else {
    phases = default_phases();
  }
  json phase_names = json::array();
  for (const auto& p : phases) phase_names.push_back(std::to_string(p.k) + "/" + std::to_string(p.n));
  auto config = base_config(o, ds);
  config["class"] = to_string(cls);
  config["target"] = to_string(target);
  config["phases"] = phase_names;
  return envelope(Command::Sweep, config,
                  {{"ranking", to_json(phase_sweep(filter_class(ds, cls), phases, target))}});
}

json run_scatter(const Dataset& ds, const json& request) {
  const Options o(request, "scatter", {"class", "input", "target", "zeta", "mahler_points", "path"});
  const auto cls = parse_knot_class(o.get<std::string>("class", "all"));
  const auto input = parse_input(o.get<std::string>("input", "zeta"));
  const auto target = parse_target(o.get<std::string>("target", "vol"));
  const auto d = derived_options(o);
  const auto path = o.get<std::string>("path", "");
  if (path.empty()) throw UsageError("scatter needs an output path");
  const auto data = export_scatter(ds, input, target, cls, path, d);

  auto config = base_config(o, ds);
  config["class"] = to_string(cls);
  config["input"] = to_string(input);
  config["target"] = to_string(target);
  config["path"] = path;
  config.update(derived_json(d));
  return envelope(Command::Scatter, config,
                  {{"path", path},
                   {"rows", data.x.size()},
                   {"slope", data.fit.model.slope},
                   {"intercept", data.fit.model.intercept},
                   {"mse", data.fit.train_mse},
                   {"pearson", maybe(data.r)}});
}

}  // namespace

Command parse_command(std::string_view text) {
  for (const auto& [name, c] : kCommandNames)
    if (name == text) return c;
  throw UsageError("unknown command '" + std::string(text) + "'");
}

std::string_view to_string(Command c) noexcept {
  for (const auto& [name, v] : kCommandNames)
    if (v == c) return name;
  return "?";
}

json run_command(Command cmd, const Dataset& ds, const json& request) {
  switch (cmd) {
    case Command::Validate: return run_validate(ds, request);
    case Command::Derive: return run_derive(ds, request);
    case Command::Correlate: return run_correlate(ds, request);
    case Command::Tables: return run_tables(ds, request);
    case Command::TrainAnn: return run_train_ann(ds, request);
    case Command::Distill: return run_distill(ds, request);
    case Command::Sweep: return run_sweep(ds, request);
    case Command::Scatter: return run_scatter(ds, request);
    case Command::Evaluate: break;
  }
  throw UsageError("evaluate needs a trained model");
}

json to_json(const TrainedModel& m) {
  return {{"features", to_json(m.layout)}, {"target", to_string(m.target)}, {"network", to_json(m.network)}};
}

TrainedModel trained_model_from_json(const json& j) {
  const json& m = j.contains("model") ? j.at("model") : j;
  try {
    TrainedModel out;
    out.layout = feature_layout_from_json(m.at("features"));
    out.target = parse_target(m.at("target").get<std::string>());
    out.network = network_from_json(m.at("network"));
    return out;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  }
}

json evaluate_model(const TrainedModel& model, const Dataset& ds, const json& request) {
  const Options o(request, "evaluate", {"class", "model"});
  const auto cls = parse_knot_class(o.get<std::string>("class", "all"));
  const auto fs = build_features(ds, model.layout, model.target, cls);
  if (fs.X.cols() != model.network.spec.input_width())
    throw DataError("model expects " + std::to_string(model.network.spec.input_width()) +
                    " features but the layout yields " + std::to_string(fs.X.cols()));
  const Eigen::VectorXd p = predict(model.network, fs.X);
  const std::vector<double> pred(p.data(), p.data() + p.size());

  auto config = base_config(o, ds);
  config["class"] = to_string(cls);
  config["model"] = o.raw("model");
  config["input"] = to_string(model.layout.input);
  config["target"] = to_string(model.target);
  config["layer_sizes"] = model.network.spec.layer_sizes;
  return envelope(Command::Evaluate, config,
                  {{"n", fs.y.size()},
                   {"mse", mse(pred, fs.y)},
                   {"mape", maybe(mape_if_defined(pred, fs.y))},
                   {"dropped_target", fs.dropped_target},
                   {"dropped_input", fs.dropped_input}});
}

}  // namespace knotstat

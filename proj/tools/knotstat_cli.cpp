// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "knotstat/knotstat.h"

#ifndef KNOTSTAT_DEFAULT_DATA
#define KNOTSTAT_DEFAULT_DATA "data/fixtures/micro.csv"
#endif

namespace {

using nlohmann::json;

int exit_code(ks_status s) {
  switch (s) {
    case KS_OK: return 0;
    case KS_ERR_USAGE: return 1;
    case KS_ERR_NUMERIC: return 3;
    default: return 2;
  }
}

struct Failure {
  ks_status status;
  std::string message;
};

void check(ks_status s) {
  if (s != KS_OK) throw Failure{s, ks_last_error()};
}

// Owning wrappers for C API handles and strings.
struct Text {
  char* p = nullptr;
  ~Text() { ks_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct DatasetHandle {
  ks_dataset* p = nullptr;
  ~DatasetHandle() { ks_dataset_free(p); }
};

struct ModelHandle {
  ks_model* p = nullptr;
  ~ModelHandle() { ks_model_free(p); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{KS_ERR_IO, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw Failure{KS_ERR_IO, "cannot write '" + path + "'"};
}

struct Flags {
  std::string data;
  std::string data_format;
  std::string out;
  std::string format = "json";
  std::string config;
  std::string knot_class;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::vector<std::string> targets;
  std::string zeta;
  std::optional<std::size_t> mahler_points;
  std::vector<int> hidden;
  std::string activation;
  std::optional<std::size_t> epochs;
  std::optional<double> lr;
  std::optional<std::size_t> batch;
  std::optional<double> momentum;
  bool no_standardize = false;
  std::optional<double> split;
  std::optional<int> threads;
  std::string phase;
  std::vector<std::string> phases;
  std::vector<double> compare;
  std::string model;
};

void add_common(CLI::App* cmd, Flags& f, bool with_out = true) {
  cmd->add_option("--data", f.data, "Dataset file (CSV or JSON)");
  cmd->add_option("--data-format", f.data_format, "Force the dataset format")
      ->check(CLI::IsMember({"csv", "json"}));
  if (with_out) cmd->add_option("--out", f.out, "Write output here instead of stdout");
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "text", "csv"}));
  cmd->add_option("--config", f.config, "JSON file with options; flags take precedence");
  cmd->add_option("--class", f.knot_class, "Knot class")
      ->check(CLI::IsMember({"all", "alt", "alternating", "nonalt", "non-alternating"}));
}

void add_derived(CLI::App* cmd, Flags& f) {
  cmd->add_option("--zeta", f.zeta, "Root of unity k/n for the scalar evaluation (default 3/5)");
  cmd->add_option("--mahler-points", f.mahler_points, "Quadrature nodes for the Mahler measure");
}

void add_ann(CLI::App* cmd, Flags& f) {
  cmd->add_option("--hidden", f.hidden, "Hidden layer widths, comma separated (default 100,100)")
      ->delimiter(',');
  cmd->add_option("--activation", f.activation, "relu, tanh or logistic");
  cmd->add_option("--epochs", f.epochs, "Training epochs (default 400)");
  cmd->add_option("--lr", f.lr, "Learning rate (default 1e-3)");
  cmd->add_option("--batch", f.batch, "Mini-batch size (default 32)");
  cmd->add_option("--momentum", f.momentum, "Momentum coefficient (default 0.9)");
  cmd->add_flag("--no-standardize", f.no_standardize, "Skip input standardization");
  cmd->add_option("--split", f.split, "Training fraction (default 0.8)");
}

void add_seed(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "Seed for every random choice (default 42)");
}

json build_request(const Flags& f) {
  json req = json::object();
  if (!f.config.empty()) {
    try {
      req = json::parse(read_file(f.config));
    } catch (const json::parse_error& e) {
      throw Failure{KS_ERR_USAGE, "config '" + f.config + "' is not valid JSON: " + e.what()};
    }
    if (!req.is_object()) throw Failure{KS_ERR_USAGE, "config '" + f.config + "' must hold a JSON object"};
  }
  const auto set = [&](const char* key, const auto& value) { req[key] = value; };
  if (!f.data.empty() || !req.contains("dataset")) set("dataset", f.data.empty() ? KNOTSTAT_DEFAULT_DATA : f.data);
  if (!f.knot_class.empty()) {
    req.erase("classes");
    set("class", f.knot_class);
  }
  if (f.seed) set("seed", *f.seed);
  // One value goes under the singular key, a list under the plural one.
  const auto set_list = [&](const char* one, const char* many, const std::vector<std::string>& v) {
    if (v.empty()) return;
    req.erase(one);
    req.erase(many);
    if (v.size() == 1)
      set(one, v.front());
    else
      set(many, v);
  };
  set_list("input", "inputs", f.inputs);
  set_list("target", "targets", f.targets);
  if (!f.zeta.empty()) set("zeta", f.zeta);
  if (f.mahler_points) set("mahler_points", *f.mahler_points);
  if (!f.hidden.empty()) set("hidden", f.hidden);
  if (!f.activation.empty()) set("activation", f.activation);
  if (f.epochs) set("epochs", *f.epochs);
  if (f.lr) set("learning_rate", *f.lr);
  if (f.batch) set("batch_size", *f.batch);
  if (f.momentum) set("momentum", *f.momentum);
  if (f.no_standardize) set("input_standardize", false);
  if (f.split) set("split_fraction", *f.split);
  if (f.threads) set("threads", *f.threads);
  if (!f.phase.empty()) set("phase", f.phase);
  if (!f.phases.empty()) set("phases", f.phases);
  if (!f.compare.empty()) set("compare", f.compare);
  return req;
}

int run(const std::string& command, const Flags& f) {
  json req = build_request(f);
  const std::string data_path = req.at("dataset").get<std::string>();

  DatasetHandle ds;
  check(ks_dataset_load(data_path.c_str(), f.data_format.empty() ? nullptr : f.data_format.c_str(), &ds.p));

  if (command == "evaluate") {
    const auto model_text = read_file(f.model);
    ModelHandle model;
    check(ks_model_from_json(model_text.c_str(), &model.p));
    req["model"] = f.model;
    Text out;
    check(ks_model_evaluate(model.p, ds.p, req.dump().c_str(), f.format.c_str(), &out.p));
    write_output(f.out, out.str());
    return 0;
  }
  if (command == "train-ann") {
    ModelHandle model;
    Text report;
    check(ks_model_train(ds.p, req.dump().c_str(), f.format.c_str(), &model.p, &report.p));
    if (!f.model.empty()) {
      Text model_json;
      check(ks_model_to_json(model.p, &model_json.p));
      write_output(f.model, model_json.str());
    }
    write_output(f.out, report.str());
    return 0;
  }
  if (command == "scatter") {
    // --out names the CSV; the summary goes to stdout.
    req["path"] = f.out;
    Text out;
    check(ks_run("scatter", ds.p, req.dump().c_str(), f.format.c_str(), &out.p));
    write_output("", out.str());
    return 0;
  }
  Text out;
  check(ks_run(command.c_str(), ds.p, req.dump().c_str(), f.format.c_str(), &out.p));
  write_output(f.out, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistics of knot invariants: correlations, regressions and neural networks "
               "relating Jones/Khovanov data to hyperbolic invariants."};
  app.require_subcommand(1);
  app.set_version_flag("--version", ks_version());
  Flags f;

  auto* validate = app.add_subcommand("validate", "Check a dataset and print per-class counts");
  add_common(validate, f);

  auto* derive = app.add_subcommand("derive", "Determinant, Mahler measure and root-of-unity values per knot");
  add_common(derive, f);
  add_derived(derive, f);

  auto* correlate = app.add_subcommand("correlate", "Pearson table of rescaled scalar invariants vs targets");
  add_common(correlate, f);
  add_derived(correlate, f);
  add_seed(correlate, f);
  correlate->add_option("--target", f.targets, "Targets, comma separated (default all)")->delimiter(',');

  auto* tables = app.add_subcommand("tables", "MAPE and relative-MSE tables over all models and targets");
  add_common(tables, f);
  add_derived(tables, f);
  add_ann(tables, f);
  add_seed(tables, f);
  tables->add_option("--input", f.inputs, "Inputs, comma separated (default all)")->delimiter(',');
  tables->add_option("--target", f.targets, "Targets, comma separated (default all)")->delimiter(',');
  tables->add_option("--threads", f.threads, "Worker threads (default: cores, capped by KNOTSTAT_THREADS)");

  auto* train_ann = app.add_subcommand("train-ann", "Train a network on vectorized Jones or Khovanov data");
  add_common(train_ann, f);
  add_ann(train_ann, f);
  add_seed(train_ann, f);
  train_ann->add_option("--input", f.inputs, "jones or khovanov (default jones)")->expected(1);
  train_ann->add_option("--target", f.targets, "Target invariant (default vol)")->expected(1);
  train_ann->add_option("--model", f.model, "Also write the trained model JSON here");

  auto* evaluate = app.add_subcommand("evaluate", "Score a saved model on a dataset");
  add_common(evaluate, f);
  evaluate->add_option("--model", f.model, "Model JSON from train-ann")->required();

  auto* distill = app.add_subcommand("distill", "Fit target ~ a ln(|J(e^{i phase})| + b) - c");
  add_common(distill, f);
  distill->add_option("--phase", f.phase, "k/n, Xpi/Y, pi or radians (default 3pi/4)");
  distill->add_option("--target", f.targets, "Target invariant (default vol)")->expected(1);
  distill->add_option("--compare", f.compare, "Also score fixed constants a,b,c")
      ->delimiter(',')
      ->expected(3);

  auto* sweep = app.add_subcommand("sweep", "Rank roots of unity by correlation with a target");
  add_common(sweep, f);
  sweep->add_option("--phases", f.phases, "Comma-separated k/n list (default: reduced k/n, n <= 12)")
      ->delimiter(',');
  sweep->add_option("--target", f.targets, "Target invariant (default vol)")->expected(1);

  auto* scatter = app.add_subcommand("scatter", "Write (x, y, name, alternating) CSV for plotting");
  add_common(scatter, f, false);
  add_derived(scatter, f);
  scatter->add_option("--out", f.out, "CSV path")->required();
  scatter->add_option("--input", f.inputs, "det, mahler or zeta (default zeta)")->expected(1);
  scatter->add_option("--target", f.targets, "Target invariant (default vol)")->expected(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), f);
  } catch (const Failure& e) {
    std::cerr << "error: " << e.message << '\n';
    return exit_code(e.status);
  }
}

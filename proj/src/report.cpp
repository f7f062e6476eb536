#include "knotstat/report.hpp"

#include <algorithm>
#include <sstream>

#include "knotstat/error.hpp"
#include "knotstat/format.hpp"

namespace knotstat {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string cell_text(const json& v, int decimals) {
  return v.is_number() ? format_fixed(v.get<double>(), decimals) : std::string("-");
}

std::string csv_num(const json& v) {
  return v.is_number() ? format_double(v.get<double>()) : std::string();
}

// Left-aligned first column, right-aligned others.
std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream os;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string pad(width[i] - r[i].size(), ' ');
      if (i == 0) {
        line += r[i] + pad;
      } else {
        line += "  " + pad + r[i];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  }
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string csv_rows(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << '\n';
  }
  return os.str();
}

std::string row_label(const json& cell) {
  const auto model = cell.at("model").get<std::string>();
  if (model == "baseline") return "baseline";
  return cell.at("input").get<std::string>() + " (" + model + ")";
}

std::string text_validate(const json& r) {
  std::ostringstream os;
  os << "records: " << r.at("total").get<std::size_t>() << " (alternating "
     << r.at("alternating").get<std::size_t>() << ", non-alternating "
     << r.at("non_alternating").get<std::size_t>() << ")\n";
  os << "with khovanov: " << r.at("with_khovanov").get<std::size_t>() << '\n';
  for (const auto& [field, n] : r.at("missing").items())
    os << "missing " << field << ": " << n.get<std::size_t>() << '\n';
  const auto& warnings = r.at("warnings");
  os << "warnings: " << warnings.size() << '\n';
  for (std::size_t i = 0; i < warnings.size() && i < 20; ++i)
    os << "  " << warnings[i].get<std::string>() << '\n';
  if (warnings.size() > 20) os << "  ... " << warnings.size() - 20 << " more\n";
  return os.str();
}

const std::vector<std::string> kDeriveColumns = {
    "name", "crossings", "alternating", "degree", "determinant", "mahler", "zeta_modulus",
    "rescaled_det", "rescaled_mahler", "rescaled_zeta", "vol"};

std::vector<std::vector<std::string>> derive_rows(const json& r, bool text) {
  std::vector<std::vector<std::string>> rows{kDeriveColumns};
  for (const auto& rec : r.at("records")) {
    std::vector<std::string> row;
    for (const auto& col : kDeriveColumns) {
      const auto& v = rec.at(col);
      if (v.is_string()) {
        row.push_back(v.get<std::string>());
      } else if (v.is_boolean()) {
        row.push_back(v.get<bool>() ? "Y" : "N");
      } else if (v.is_number_integer()) {
        row.push_back(std::to_string(v.get<std::int64_t>()));
      } else {
        row.push_back(text ? cell_text(v, 6) : csv_num(v));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string text_correlate(const json& r) {
  std::ostringstream os;
  const auto& targets = r.at("targets");
  for (const auto& block : r.at("classes")) {
    os << "class " << block.at("class").get<std::string>() << '\n';
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{"input"};
    for (const auto& t : targets) head.push_back(t.get<std::string>());
    rows.push_back(head);
    for (const auto& row : block.at("rows")) {
      std::vector<std::string> line{row.at("input").get<std::string>()};
      for (const auto& v : row.at("r")) line.push_back(cell_text(v, 2));
      rows.push_back(line);
    }
    os << aligned(rows) << '\n';
  }
  if (const auto& mc = r.at("mahler_clusters"); !mc.is_null()) {
    os << "two-cluster fit of rescaled_mahler vs vol (all knots)\n";
    for (const auto& c : mc) {
      os << "  n=" << c.at("size").get<std::size_t>() << " r=" << format_fixed(c.at("pearson").get<double>(), 3)
         << " slope=" << format_fixed(c.at("slope").get<double>(), 4)
         << " intercept=" << format_fixed(c.at("intercept").get<double>(), 4) << '\n';
    }
  }
  return os.str();
}

std::string text_tables(const json& r) {
  std::ostringstream os;
  const auto& targets = r.at("targets");
  const auto table = [&](const char* title, const char* key, const char* bold_key, int decimals) {
    os << title << '\n';
    for (const auto& block : r.at("classes")) {
      os << "class " << block.at("class").get<std::string>() << '\n';
      std::vector<std::vector<std::string>> rows;
      std::vector<std::string> head{"model"};
      for (const auto& t : targets) head.push_back(t.get<std::string>());
      rows.push_back(head);
      for (const auto& row : block.at("rows")) {
        std::vector<std::string> line{row_label(row.at("cells").at(0))};
        for (const auto& cell : row.at("cells")) {
          std::string v = cell_text(cell.at(key), decimals);
          if (cell.at(bold_key).get<bool>()) v = "*" + v + "*";
          line.push_back(v);
        }
        rows.push_back(line);
      }
      os << aligned(rows) << '\n';
    }
  };
  table("MAPE (%)", "mape", "bold_mape", 1);
  table("relative MSE", "relative_mse", "bold_mse", 2);
  std::size_t failed = 0;
  for (const auto& block : r.at("classes"))
    for (const auto& row : block.at("rows"))
      for (const auto& cell : row.at("cells"))
        if (!cell.at("error").is_null()) {
          if (failed++ == 0) os << "failed cells\n";
          os << "  " << cell.at("class").get<std::string>() << ' ' << row_label(cell) << ' '
             << cell.at("target").get<std::string>() << ": " << cell.at("error").get<std::string>() << '\n';
        }
  return os.str();
}

std::vector<std::vector<std::string>> tables_csv_rows(const json& r) {
  std::vector<std::vector<std::string>> rows{{"class", "model", "input", "target", "mape", "mse",
                                              "relative_mse", "bold_mape", "bold_mse", "n_train",
                                              "n_test", "error"}};
  for (const auto& block : r.at("classes"))
    for (const auto& row : block.at("rows"))
      for (const auto& c : row.at("cells"))
        rows.push_back({c.at("class").get<std::string>(), c.at("model").get<std::string>(),
                        c.at("input").get<std::string>(), c.at("target").get<std::string>(),
                        csv_num(c.at("mape")), csv_num(c.at("mse")), csv_num(c.at("relative_mse")),
                        c.at("bold_mape").get<bool>() ? "1" : "0", c.at("bold_mse").get<bool>() ? "1" : "0",
                        std::to_string(c.at("n_train").get<std::size_t>()),
                        std::to_string(c.at("n_test").get<std::size_t>()),
                        c.at("error").is_null() ? "" : c.at("error").get<std::string>()});
  return rows;
}

std::string text_cell(const json& c) {
  std::ostringstream os;
  os << "class " << c.at("class").get<std::string>() << ", input " << c.at("input").get<std::string>()
     << ", target " << c.at("target").get<std::string>() << ", model " << c.at("model").get<std::string>()
     << '\n';
  os << "n_train " << c.at("n_train").get<std::size_t>() << ", n_test " << c.at("n_test").get<std::size_t>()
     << '\n';
  os << "test MAPE " << cell_text(c.at("mape"), 2) << "% (baseline " << cell_text(c.at("baseline_mape"), 2)
     << "%)" << (c.at("bold_mape").get<bool>() ? " below half of baseline" : "") << '\n';
  os << "test MSE " << format_double(c.at("mse").get<double>()) << ", relative "
     << format_fixed(c.at("relative_mse").get<double>(), 4) << '\n';
  return os.str();
}

std::string text_evaluate(const json& r) {
  std::ostringstream os;
  os << "records " << r.at("n").get<std::size_t>() << " (dropped: target "
     << r.at("dropped_target").get<std::size_t>() << ", input " << r.at("dropped_input").get<std::size_t>()
     << ")\n";
  os << "MAPE " << cell_text(r.at("mape"), 2) << "%\nMSE " << format_double(r.at("mse").get<double>())
     << '\n';
  return os.str();
}

std::string text_distill(const json& r) {
  std::ostringstream os;
  const auto& f = r.at("fit");
  os << "target ~ a * ln(|J(e^{i phase})| + b) - c at phase " << format_double(f.at("phase").get<double>())
     << '\n';
  os << "a = " << format_fixed(f.at("a").get<double>(), 6) << "\nb = " << format_fixed(f.at("b").get<double>(), 6)
     << "\nc = " << format_fixed(f.at("c").get<double>(), 6) << '\n';
  os << "MAPE " << format_fixed(f.at("mape").get<double>(), 3) << "% over " << f.at("n").get<std::size_t>()
     << " records\n";
  if (const auto& cmp = r.at("comparison"); !cmp.is_null()) {
    os << "fixed constants a=" << format_double(cmp.at("a").get<double>())
       << " b=" << format_double(cmp.at("b").get<double>()) << " c=" << format_double(cmp.at("c").get<double>())
       << ": MAPE " << format_fixed(cmp.at("mape").get<double>(), 3) << "%\n";
  }
  return os.str();
}

std::vector<std::vector<std::string>> sweep_rows(const json& r, bool text) {
  std::vector<std::vector<std::string>> rows{{"rank", "k", "n", "phase", "r", "records", "dropped"}};
  std::size_t rank = 1;
  for (const auto& e : r.at("ranking")) {
    rows.push_back({std::to_string(rank++), std::to_string(e.at("k").get<int>()),
                    std::to_string(e.at("n").get<int>()),
                    text ? format_fixed(e.at("phase").get<double>(), 6) : csv_num(e.at("phase")),
                    text ? cell_text(e.at("r"), 4) : csv_num(e.at("r")),
                    std::to_string(e.at("records").get<std::size_t>()),
                    std::to_string(e.at("dropped").get<std::size_t>())});
  }
  return rows;
}

std::string text_scatter(const json& r) {
  std::ostringstream os;
  os << "wrote " << r.at("rows").get<std::size_t>() << " rows to " << r.at("path").get<std::string>() << '\n';
  os << "fit slope " << format_double(r.at("slope").get<double>()) << ", intercept "
     << format_double(r.at("intercept").get<double>()) << ", r " << cell_text(r.at("pearson"), 4) << '\n';
  return os.str();
}

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
  if (text == "json") return OutputFormat::Json;
  if (text == "text") return OutputFormat::Text;
  if (text == "csv") return OutputFormat::Csv;
  throw UsageError("unknown output format '" + std::string(text) + "' (expected json, text or csv)");
}

json to_json(const ValidationReport& r) {
  json missing = json::object();
  for (const auto& [field, n] : r.missing) missing[field] = n;
  return {{"total", r.total},
          {"alternating", r.alternating},
          {"non_alternating", r.non_alternating},
          {"with_khovanov", r.with_khovanov},
          {"missing", missing},
          {"warnings", r.warnings}};
}

json to_json(const ResultCell& c) {
  return {{"input", to_string(c.input)},
          {"target", to_string(c.target)},
          {"class", to_string(c.knot_class)},
          {"model", to_string(c.model)},
          {"mape", opt(c.mape)},
          {"mse", c.error ? json(nullptr) : json(c.mse)},
          {"relative_mse", c.error ? json(nullptr) : json(c.relative_mse)},
          {"pearson", opt(c.pearson)},
          {"n_train", c.n_train},
          {"n_test", c.n_test},
          {"bold_mape", c.bold_mape},
          {"bold_mse", c.bold_mse},
          {"baseline_mape", opt(c.baseline_mape)},
          {"baseline_mse", c.error ? json(nullptr) : json(c.baseline_mse)},
          {"dropped_target", c.dropped_target},
          {"dropped_input", c.dropped_input},
          {"error", c.error ? json(*c.error) : json(nullptr)}};
}

json to_json(const CorrelationTable& t) {
  json targets = json::array();
  for (auto tg : t.targets) targets.push_back(to_string(tg));
  json classes = json::array();
  for (std::size_t c = 0; c < t.classes.size(); ++c) {
    json rows = json::array();
    for (std::size_t i = 0; i < t.inputs.size(); ++i) {
      json r = json::array();
      json n = json::array();
      for (std::size_t k = 0; k < t.targets.size(); ++k) {
        r.push_back(opt(t.at(c, i, k).r));
        n.push_back(t.at(c, i, k).n);
      }
      rows.push_back({{"input", to_string(t.inputs[i])}, {"r", r}, {"n", n}});
    }
    classes.push_back({{"class", to_string(t.classes[c])}, {"rows", rows}});
  }
  json clusters = nullptr;
  if (t.mahler_clusters) {
    clusters = json::array();
    for (int k = 0; k < 2; ++k) {
      const auto& mc = *t.mahler_clusters;
      clusters.push_back({{"size", mc.sizes[k]},
                          {"pearson", mc.pearson[k]},
                          {"slope", mc.fits[k].slope},
                          {"intercept", mc.fits[k].intercept}});
    }
  }
  return {{"targets", targets}, {"classes", classes}, {"mahler_clusters", clusters}};
}

json to_json(const ErrorTable& t) {
  json targets = json::array();
  for (auto tg : t.config.targets) targets.push_back(to_string(tg));
  json classes = json::array();
  for (std::size_t c = 0; c < t.config.classes.size(); ++c) {
    json rows = json::array();
    for (std::size_t row = 0; row < t.rows(); ++row) {
      json cells = json::array();
      for (std::size_t k = 0; k < t.config.targets.size(); ++k) cells.push_back(to_json(t.at(c, row, k)));
      rows.push_back({{"model", to_string(t.row_models[row])},
                      {"input", to_string(t.row_inputs[row])},
                      {"cells", cells}});
    }
    classes.push_back({{"class", to_string(t.config.classes[c])}, {"rows", rows}});
  }
  return {{"targets", targets}, {"classes", classes}};
}

json to_json(const FormulaFit& f) {
  return {{"a", f.a},     {"b", f.b},     {"c", f.c},         {"phase", f.phase},
          {"mape", f.mape}, {"mse", f.mse}, {"n", f.n}, {"evaluations", f.trajectory.size()}};
}

json to_json(const std::vector<SweepEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries) {
    out.push_back({{"k", e.root.k},
                   {"n", e.root.n},
                   {"phase", e.root.phase()},
                   {"r", opt(e.r)},
                   {"records", e.n},
                   {"dropped", e.dropped}});
  }
  return out;
}

json to_json(const FeatureLayout& layout) {
  json j = {{"input", to_string(layout.input)},
            {"zeta", {layout.derived.zeta.k, layout.derived.zeta.n}},
            {"mahler_points", layout.derived.mahler_points},
            {"jones_window", nullptr},
            {"khovanov_grid", nullptr}};
  if (layout.jones) j["jones_window"] = {layout.jones->min_exp, layout.jones->max_exp};
  if (layout.khovanov) {
    const auto& g = *layout.khovanov;
    j["khovanov_grid"] = {{"i", {g.i_min, g.i_max}}, {"j", {g.j_min, g.j_max}}};
  }
  return j;
}

FeatureLayout feature_layout_from_json(const json& j) {
  try {
    FeatureLayout l;
    l.input = parse_input(j.at("input").get<std::string>());
    l.derived.zeta = {j.at("zeta").at(0).get<int>(), j.at("zeta").at(1).get<int>()};
    l.derived.mahler_points = j.at("mahler_points").get<std::size_t>();
    if (const auto& w = j.at("jones_window"); !w.is_null())
      l.jones = JonesWindow{w.at(0).get<int>(), w.at(1).get<int>()};
    if (const auto& g = j.at("khovanov_grid"); !g.is_null())
      l.khovanov = KhovanovGrid{g.at("i").at(0).get<int>(), g.at("i").at(1).get<int>(),
                                g.at("j").at(0).get<int>(), g.at("j").at(1).get<int>()};
    return l;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed feature layout: ") + e.what());
  }
}

std::string render(const json& envelope, OutputFormat format) {
  if (format == OutputFormat::Json) return envelope.dump(2) + "\n";
  const auto command = envelope.at("command").get<std::string>();
  const auto& r = envelope.at("result");
  if (format == OutputFormat::Text) {
    if (command == "validate") return text_validate(r);
    if (command == "derive") return aligned(derive_rows(r, true));
    if (command == "correlate") return text_correlate(r);
    if (command == "tables") return text_tables(r);
    if (command == "train-ann") return text_cell(r.at("cell"));
    if (command == "evaluate") return text_evaluate(r);
    if (command == "distill") return text_distill(r);
    if (command == "sweep") return aligned(sweep_rows(r, true));
    if (command == "scatter") return text_scatter(r);
  } else {
    if (command == "derive") return csv_rows(derive_rows(r, false));
    if (command == "tables") return csv_rows(tables_csv_rows(r));
    if (command == "sweep") return csv_rows(sweep_rows(r, false));
    if (command == "correlate") {
      std::vector<std::vector<std::string>> rows{{"class", "input", "target", "r", "n"}};
      const auto& targets = r.at("targets");
      for (const auto& block : r.at("classes"))
        for (const auto& row : block.at("rows"))
          for (std::size_t k = 0; k < targets.size(); ++k)
            rows.push_back({block.at("class").get<std::string>(), row.at("input").get<std::string>(),
                            targets[k].get<std::string>(), csv_num(row.at("r")[k]),
                            std::to_string(row.at("n")[k].get<std::size_t>())});
      return csv_rows(rows);
    }
    throw UsageError("'" + command + "' has no CSV output; use json or text");
  }
  throw UsageError("unknown command '" + command + "' in result envelope");
}

}  // namespace knotstat

#include "knotstat/knot_data.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <set>
#include <sstream>
#include <unordered_set>

#include "knotstat/error.hpp"
#include "knotstat/format.hpp"

namespace knotstat {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 12> kColumns = {
    "name",    "crossings", "alternating", "jones",       "vol",          "longitude_length",
    "meridian_length", "mu_x", "mu_y",     "cusp_volume", "chern_simons", "khovanov"};

constexpr std::array<std::string_view, 4> kRequired = {"name", "crossings", "alternating",
                                                       "jones"};

struct HyperbolicField {
  std::string_view name;
  std::optional<double> HyperbolicInvariants::*member;
};

constexpr std::array<HyperbolicField, 7> kHyperbolicFields = {{
    {"vol", &HyperbolicInvariants::vol},
    {"longitude_length", &HyperbolicInvariants::longitude_length},
    {"meridian_length", &HyperbolicInvariants::meridian_length},
    {"mu_x", &HyperbolicInvariants::mu_x},
    {"mu_y", &HyperbolicInvariants::mu_y},
    {"cusp_volume", &HyperbolicInvariants::cusp_volume},
    {"chern_simons", &HyperbolicInvariants::chern_simons},
}};

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename Int>
std::optional<Int> to_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// RFC 4180 style: quoted fields may contain separators and doubled quotes.
std::vector<std::string> split_csv_line(std::string_view line, const std::string& where) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"' && trim(cur).empty() && !was_quoted) {
      quoted = was_quoted = true;
      cur.clear();
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(ch);
    }
  }
  if (quoted) throw DataError(where + ": unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

LaurentPoly1 parse_jones_field(std::string_view text, const std::string& where) {
  auto parts = split(text, ';');
  if (parts.size() != 2) throw DataError(where + ": jones must look like 'min_exp;c0 c1 ...'");
  auto min_exp = to_int<int>(parts[0]);
  if (!min_exp) throw DataError(where + ": jones min_exp '" + std::string(trim(parts[0])) +
                                "' is not an integer");
  std::vector<std::int64_t> coeffs;
  std::istringstream in{std::string(parts[1])};
  std::string tok;
  while (in >> tok) {
    auto c = to_int<std::int64_t>(tok);
    if (!c) throw DataError(where + ": jones coefficient '" + tok + "' is not an integer");
    coeffs.push_back(*c);
  }
  if (coeffs.empty()) throw DataError(where + ": jones has no coefficients");
  try {
    return LaurentPoly1(*min_exp, std::move(coeffs));
  } catch (const DataError& e) {
    throw DataError(where + ": jones: " + e.what());
  }
}

std::optional<LaurentPoly2> parse_khovanov_field(std::string_view text, const std::string& where) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  std::vector<KhovanovTerm> terms;
  for (auto triple : split(text, ';')) {
    if (trim(triple).empty()) continue;
    auto p = split(triple, ',');
    std::optional<int> i, j;
    std::optional<std::int64_t> c;
    if (p.size() == 3) {
      i = to_int<int>(p[0]);
      j = to_int<int>(p[1]);
      c = to_int<std::int64_t>(p[2]);
    }
    if (!i || !j || !c)
      throw DataError(where + ": khovanov term '" + std::string(trim(triple)) +
                      "' is not an integer triple i,j,c");
    terms.push_back({*i, *j, *c});
  }
  try {
    return LaurentPoly2(terms);
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  }
}

void check_hyperbolic(HyperbolicInvariants& h, const std::string& where) {
  if (h.vol && *h.vol <= 0) throw DataError(where + ": vol must be positive");
  for (auto f : {&HyperbolicInvariants::longitude_length, &HyperbolicInvariants::meridian_length,
                 &HyperbolicInvariants::cusp_volume}) {
    if (h.*f && *(h.*f) <= 0) throw DataError(where + ": lengths and cusp volume must be positive");
  }
  if (h.chern_simons) h.chern_simons = normalize_chern_simons(*h.chern_simons);
}

Dataset parse_csv(std::string_view text, std::string provenance) {
  std::vector<KnotRecord> records;
  std::vector<int> column_of(kColumns.size(), -1);
  bool have_header = false;
  std::size_t n_header = 0;
  std::unordered_set<std::string> names;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto line = trim(raw);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);

    if (!have_header && line.front() == '#') {
      constexpr std::string_view tag = "# provenance:";
      if (line.starts_with(tag) && provenance.empty())
        provenance = std::string(trim(line.substr(tag.size())));
      continue;
    }

    auto fields = split_csv_line(raw, where);
    if (!have_header) {
      n_header = fields.size();
      for (std::size_t k = 0; k < fields.size(); ++k) {
        auto name = trim(fields[k]);
        auto it = std::find(kColumns.begin(), kColumns.end(), name);
        if (it == kColumns.end())
          throw DataError(where + ": unknown column '" + std::string(name) + "'");
        auto idx = static_cast<std::size_t>(it - kColumns.begin());
        if (column_of[idx] >= 0)
          throw DataError(where + ": duplicate column '" + std::string(name) + "'");
        column_of[idx] = static_cast<int>(k);
      }
      for (auto req : kRequired) {
        auto idx = static_cast<std::size_t>(std::find(kColumns.begin(), kColumns.end(), req) -
                                            kColumns.begin());
        if (column_of[idx] < 0)
          throw DataError(where + ": missing required column '" + std::string(req) + "'");
      }
      have_header = true;
      continue;
    }

    if (fields.size() > n_header)
      throw DataError(where + ": " + std::to_string(fields.size()) + " fields but header has " +
                      std::to_string(n_header));
    auto get = [&](std::string_view col) -> std::string_view {
      auto idx = static_cast<std::size_t>(std::find(kColumns.begin(), kColumns.end(), col) -
                                          kColumns.begin());
      int k = column_of[idx];
      if (k < 0 || static_cast<std::size_t>(k) >= fields.size()) return {};
      return trim(fields[static_cast<std::size_t>(k)]);
    };

    KnotRecord rec;
    rec.name = std::string(get("name"));
    if (rec.name.empty()) throw DataError(where + ": empty name");
    const std::string at = where + " (" + rec.name + ")";
    auto crossings = to_int<int>(get("crossings"));
    if (!crossings || *crossings <= 0)
      throw DataError(at + ": crossings must be a positive integer");
    rec.crossing_number = *crossings;
    auto alt = get("alternating");
    if (alt == "true")
      rec.alternating = true;
    else if (alt == "false")
      rec.alternating = false;
    else
      throw DataError(at + ": alternating must be 'true' or 'false'");
    rec.jones = parse_jones_field(get("jones"), at);
    for (const auto& f : kHyperbolicFields) {
      auto s = get(f.name);
      if (s.empty()) continue;
      auto v = to_double(s);
      if (!v) throw DataError(at + ": " + std::string(f.name) + " '" + std::string(s) +
                              "' is not a finite number");
      rec.hyperbolic.*f.member = *v;
    }
    check_hyperbolic(rec.hyperbolic, at);
    rec.khovanov = parse_khovanov_field(get("khovanov"), at);
    if (!names.insert(rec.name).second) throw DataError(at + ": duplicate name '" + rec.name + "'");
    records.push_back(std::move(rec));
  }
  if (!have_header) throw DataError("missing header row");
  return Dataset(std::move(records), std::move(provenance));
}

Dataset parse_json(std::string_view text, std::string provenance) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array()) throw DataError("JSON dataset must be an array of records");

  std::vector<KnotRecord> records;
  std::unordered_set<std::string> names;
  for (std::size_t r = 0; r < doc.size(); ++r) {
    const auto& obj = doc[r];
    std::string where = "record " + std::to_string(r);
    if (!obj.is_object()) throw DataError(where + ": not an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (std::find(kColumns.begin(), kColumns.end(), it.key()) == kColumns.end())
        throw DataError(where + ": unknown field '" + it.key() + "'");
    }
    for (auto req : kRequired) {
      if (!obj.contains(req)) throw DataError(where + ": missing required field '" +
                                              std::string(req) + "'");
    }
    KnotRecord rec;
    if (!obj["name"].is_string() || obj["name"].get<std::string>().empty())
      throw DataError(where + ": name must be a non-empty string");
    rec.name = obj["name"].get<std::string>();
    where += " (" + rec.name + ")";
    if (!obj["crossings"].is_number_integer() || obj["crossings"].get<long long>() <= 0)
      throw DataError(where + ": crossings must be a positive integer");
    rec.crossing_number = obj["crossings"].get<int>();
    if (!obj["alternating"].is_boolean()) throw DataError(where + ": alternating must be boolean");
    rec.alternating = obj["alternating"].get<bool>();

    const auto& jo = obj["jones"];
    if (!jo.is_object() || !jo.contains("min_exp") || !jo.contains("coeffs") ||
        !jo["min_exp"].is_number_integer() || !jo["coeffs"].is_array() || jo["coeffs"].empty())
      throw DataError(where + ": jones must be {min_exp: int, coeffs: [int, ...]}");
    std::vector<std::int64_t> coeffs;
    for (const auto& c : jo["coeffs"]) {
      if (!c.is_number_integer()) throw DataError(where + ": non-integer jones coefficient");
      coeffs.push_back(c.get<std::int64_t>());
    }
    try {
      rec.jones = LaurentPoly1(jo["min_exp"].get<int>(), std::move(coeffs));
    } catch (const DataError& e) {
      throw DataError(where + ": jones: " + e.what());
    }

    for (const auto& f : kHyperbolicFields) {
      if (!obj.contains(f.name) || obj[f.name].is_null()) continue;
      const auto& v = obj[f.name];
      if (!v.is_number() || !std::isfinite(v.get<double>()))
        throw DataError(where + ": " + std::string(f.name) + " must be a finite number or null");
      rec.hyperbolic.*f.member = v.get<double>();
    }
    check_hyperbolic(rec.hyperbolic, where);

    if (obj.contains("khovanov") && !obj["khovanov"].is_null()) {
      const auto& kh = obj["khovanov"];
      if (!kh.is_array()) throw DataError(where + ": khovanov must be an array of {i,j,c}");
      std::vector<KhovanovTerm> terms;
      for (const auto& t : kh) {
        if (!t.is_object() || !t.contains("i") || !t.contains("j") || !t.contains("c") ||
            !t["i"].is_number_integer() || !t["j"].is_number_integer() ||
            !t["c"].is_number_integer())
          throw DataError(where + ": khovanov terms must be integer {i,j,c}");
        terms.push_back({t["i"].get<int>(), t["j"].get<int>(), t["c"].get<std::int64_t>()});
      }
      try {
        rec.khovanov = LaurentPoly2(terms);
      } catch (const DataError& e) {
        throw DataError(where + ": " + e.what());
      }
    }
    if (!names.insert(rec.name).second) throw DataError(where + ": duplicate name '" + rec.name + "'");
    records.push_back(std::move(rec));
  }
  return Dataset(std::move(records), std::move(provenance));
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

KnotClass parse_knot_class(std::string_view text) {
  if (text == "all") return KnotClass::All;
  if (text == "alt" || text == "alternating") return KnotClass::Alternating;
  if (text == "nonalt" || text == "non-alternating") return KnotClass::NonAlternating;
  throw UsageError("unknown knot class '" + std::string(text) + "' (expected all, alt, nonalt)");
}

std::string_view to_string(KnotClass c) noexcept {
  switch (c) {
    case KnotClass::All: return "all";
    case KnotClass::Alternating: return "alt";
    case KnotClass::NonAlternating: return "nonalt";
  }
  return "all";
}

double normalize_chern_simons(double value) {
  double r = std::fmod(value, 0.5);
  if (r < 0) r += 0.5;
  if (r >= 0.5) r = 0.0;  // -tiny + 0.5 can round up to 0.5
  return r;
}

Dataset::Dataset(std::vector<KnotRecord> records, std::string provenance)
    : records_(std::move(records)), provenance_(std::move(provenance)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& r : records_) {
    if (!seen.insert(r.name).second) throw DataError("duplicate name '" + r.name + "'");
  }
}

DataFormat parse_data_format(std::string_view text) {
  if (text == "csv") return DataFormat::Csv;
  if (text == "json") return DataFormat::Json;
  throw UsageError("unknown data format '" + std::string(text) + "' (expected csv or json)");
}

DataFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".json" ? DataFormat::Json : DataFormat::Csv;
}

Dataset parse_dataset(const std::filesystem::path& path, std::optional<DataFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_dataset_text(buf.str(), format.value_or(format_for_path(path)), path.string());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Dataset parse_dataset_text(std::string_view text, DataFormat format, std::string provenance) {
  // A "# provenance:" line inside a CSV file wins over the file path.
  if (format == DataFormat::Csv) {
    auto ds = parse_csv(text, {});
    if (!ds.provenance().empty() || provenance.empty()) return ds;
    return Dataset(ds.records(), std::move(provenance));
  }
  return parse_json(text, std::move(provenance));
}

std::string serialize_dataset(const Dataset& ds, DataFormat format) {
  if (format == DataFormat::Json) {
    json arr = json::array();
    for (const auto& r : ds) {
      json o;
      o["name"] = r.name;
      o["crossings"] = r.crossing_number;
      o["alternating"] = r.alternating;
      o["jones"] = {{"min_exp", r.jones.min_exp()},
                    {"coeffs", std::vector<std::int64_t>(r.jones.coeffs().begin(),
                                                         r.jones.coeffs().end())}};
      for (const auto& f : kHyperbolicFields) {
        const auto& v = r.hyperbolic.*f.member;
        o[std::string(f.name)] = v ? json(*v) : json(nullptr);
      }
      if (r.khovanov) {
        json kh = json::array();
        for (const auto& [ij, c] : r.khovanov->terms())
          kh.push_back({{"i", ij.first}, {"j", ij.second}, {"c", c}});
        o["khovanov"] = std::move(kh);
      } else {
        o["khovanov"] = nullptr;
      }
      arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
  }

  std::string out;
  if (!ds.provenance().empty()) out += "# provenance: " + ds.provenance() + "\n";
  for (std::size_t k = 0; k < kColumns.size(); ++k) {
    if (k) out += ',';
    out += kColumns[k];
  }
  out += '\n';
  for (const auto& r : ds) {
    out += csv_quote(r.name) + ',' + std::to_string(r.crossing_number) + ',' +
           (r.alternating ? "true" : "false") + ',';
    out += std::to_string(r.jones.min_exp()) + ';';
    for (std::size_t i = 0; i < r.jones.coeffs().size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(r.jones.coeffs()[i]);
    }
    for (const auto& f : kHyperbolicFields) {
      out += ',';
      if (const auto& v = r.hyperbolic.*f.member) out += format_double(*v);
    }
    out += ',';
    if (r.khovanov && !r.khovanov->empty()) {
      std::string kh;
      for (const auto& [ij, c] : r.khovanov->terms()) {
        if (!kh.empty()) kh += ';';
        kh += std::to_string(ij.first) + ',' + std::to_string(ij.second) + ',' + std::to_string(c);
      }
      out += csv_quote(kh);
    }
    out += '\n';
  }
  return out;
}

Dataset filter_class(const Dataset& ds, KnotClass c) {
  if (c == KnotClass::All) return ds;
  std::vector<KnotRecord> kept;
  for (const auto& r : ds) {
    if (r.alternating == (c == KnotClass::Alternating)) kept.push_back(r);
  }
  return Dataset(std::move(kept), ds.provenance());
}

JonesMatrix vectorize_jones(const Dataset& ds) {
  if (ds.empty()) throw DataError("cannot vectorize an empty dataset");
  JonesWindow w{std::numeric_limits<int>::max(), std::numeric_limits<int>::min()};
  for (const auto& r : ds) {
    w.min_exp = std::min(w.min_exp, r.jones.min_exp());
    w.max_exp = std::max(w.max_exp, r.jones.max_exp());
  }
  return vectorize_jones(ds, w);
}

JonesMatrix vectorize_jones(const Dataset& ds, const JonesWindow& window) {
  if (window.max_exp < window.min_exp) throw DataError("empty Jones window");
  JonesMatrix m{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ds.size()), window.width()),
                window};
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const auto& p = ds[r].jones;
    if (p.min_exp() < window.min_exp || p.max_exp() > window.max_exp)
      throw DataError(ds[r].name + ": Jones exponents [" + std::to_string(p.min_exp()) + "," +
                      std::to_string(p.max_exp()) + "] fall outside the feature window [" +
                      std::to_string(window.min_exp) + "," + std::to_string(window.max_exp) + "]");
    for (int e = p.min_exp(); e <= p.max_exp(); ++e)
      m.values(static_cast<Eigen::Index>(r), e - window.min_exp) =
          static_cast<double>(p.coefficient(e));
  }
  return m;
}

KhovanovMatrix vectorize_khovanov(const Dataset& ds) {
  if (ds.empty()) throw DataError("cannot vectorize an empty dataset");
  KhovanovGrid g{std::numeric_limits<int>::max(), std::numeric_limits<int>::min(),
                 std::numeric_limits<int>::max(), std::numeric_limits<int>::min()};
  bool any = false;
  for (const auto& r : ds) {
    if (!r.khovanov) throw DataError(r.name + ": no Khovanov data");
    for (const auto& [ij, c] : r.khovanov->terms()) {
      any = true;
      g.i_min = std::min(g.i_min, ij.first);
      g.i_max = std::max(g.i_max, ij.first);
      g.j_min = std::min(g.j_min, ij.second);
      g.j_max = std::max(g.j_max, ij.second);
    }
  }
  if (!any) throw DataError("no Khovanov terms in dataset");
  return vectorize_khovanov(ds, g);
}

KhovanovMatrix vectorize_khovanov(const Dataset& ds, const KhovanovGrid& grid) {
  if (grid.i_max < grid.i_min || grid.j_max < grid.j_min) throw DataError("empty Khovanov grid");
  const int nj = grid.j_max - grid.j_min + 1;
  KhovanovMatrix m{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ds.size()), grid.width()),
                   grid};
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (!ds[r].khovanov) throw DataError(ds[r].name + ": no Khovanov data");
    for (const auto& [ij, c] : ds[r].khovanov->terms()) {
      auto [i, j] = ij;
      if (i < grid.i_min || i > grid.i_max || j < grid.j_min || j > grid.j_max)
        throw DataError(ds[r].name + ": Khovanov term (" + std::to_string(i) + "," +
                        std::to_string(j) + ") falls outside the feature grid");
      m.values(static_cast<Eigen::Index>(r), (i - grid.i_min) * nj + (j - grid.j_min)) =
          static_cast<double>(c);
    }
  }
  return m;
}

bool check_khovanov_alternating(const KnotRecord& rec) {
  if (!rec.khovanov) throw DataError(rec.name + ": no Khovanov data");
  const auto& terms = rec.khovanov->terms();
  if (terms.empty()) return false;

  const int offset = terms.begin()->first.second - 2 * terms.begin()->first.first;
  int i_min = std::numeric_limits<int>::max(), i_max = std::numeric_limits<int>::min();
  for (const auto& [ij, c] : terms) {
    if (ij.second - 2 * ij.first != offset) return false;
    i_min = std::min(i_min, ij.first);
    i_max = std::max(i_max, ij.first);
  }
  const auto jones = rec.jones.coeffs();
  if (static_cast<std::size_t>(i_max - i_min + 1) != jones.size()) return false;

  std::vector<std::int64_t> diag;
  for (int i = i_min; i <= i_max; ++i) diag.push_back(rec.khovanov->coefficient(i, offset + 2 * i));

  // Sign conventions: global sign, alternating homological sign, and the
  // mirror ordering all occur in published tables.
  for (bool reversed : {false, true}) {
    for (bool alternate : {false, true}) {
      for (int sign : {1, -1}) {
        bool ok = true;
        for (std::size_t k = 0; k < diag.size() && ok; ++k) {
          std::int64_t expect = jones[reversed ? jones.size() - 1 - k : k] * sign;
          if (alternate && (k % 2)) expect = -expect;
          ok = diag[k] == expect;
        }
        if (ok) return true;
      }
    }
  }
  return false;
}

ValidationReport validate(const Dataset& ds) {
  ValidationReport rep;
  rep.total = ds.size();
  for (const auto& f : kHyperbolicFields) rep.missing[std::string(f.name)] = 0;
  rep.missing["khovanov"] = 0;
  for (const auto& r : ds) {
    (r.alternating ? rep.alternating : rep.non_alternating)++;
    for (const auto& f : kHyperbolicFields) {
      if (!(r.hyperbolic.*f.member)) rep.missing[std::string(f.name)]++;
    }
    if (r.khovanov) {
      rep.with_khovanov++;
      if (r.alternating && !check_khovanov_alternating(r))
        rep.warnings.push_back(r.name + ": alternating knot whose Khovanov terms do not lie on "
                                        "one diagonal matching its Jones polynomial");
    } else {
      rep.missing["khovanov"]++;
    }
    if (r.jones.degree() < 2)
      rep.warnings.push_back(r.name + ": Jones degree " + std::to_string(r.jones.degree()) +
                             " < 2, excluded from rescaled invariants");
  }
  return rep;
}

}  // namespace knotstat

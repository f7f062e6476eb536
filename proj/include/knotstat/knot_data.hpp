#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knotstat/laurent.hpp"

namespace knotstat {

enum class KnotClass { All, Alternating, NonAlternating };

/// Accepts "all", "alt"/"alternating", "nonalt"/"non-alternating".
KnotClass parse_knot_class(std::string_view text);
std::string_view to_string(KnotClass c) noexcept;

/// Hyperbolic targets as ingested. Every field may be missing in a source.
/// chern_simons is stored as its representative in [0, 0.5).
struct HyperbolicInvariants {
  std::optional<double> vol;
  std::optional<double> longitude_length;
  std::optional<double> meridian_length;
  std::optional<double> mu_x;
  std::optional<double> mu_y;
  std::optional<double> cusp_volume;
  std::optional<double> chern_simons;

  friend bool operator==(const HyperbolicInvariants&, const HyperbolicInvariants&) = default;
};

/// Reduces a Chern-Simons value modulo 1/2 into [0, 0.5).
double normalize_chern_simons(double value);

struct KnotRecord {
  std::string name;
  int crossing_number = 0;
  bool alternating = false;
  LaurentPoly1 jones = LaurentPoly1::monomial(0);
  std::optional<LaurentPoly2> khovanov;
  HyperbolicInvariants hyperbolic;

  friend bool operator==(const KnotRecord&, const KnotRecord&) = default;
};

/// Immutable ordered collection of records with pairwise distinct names.
class Dataset {
 public:
  Dataset() = default;
  /// Throws DataError on a repeated name.
  explicit Dataset(std::vector<KnotRecord> records, std::string provenance = {});

  const std::vector<KnotRecord>& records() const noexcept { return records_; }
  const std::string& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const KnotRecord& operator[](std::size_t i) const { return records_[i]; }
  auto begin() const noexcept { return records_.begin(); }
  auto end() const noexcept { return records_.end(); }

 private:
  std::vector<KnotRecord> records_;
  std::string provenance_;
};

enum class DataFormat { Csv, Json };

DataFormat parse_data_format(std::string_view text);
/// Format from the file extension (.json -> Json, anything else -> Csv).
DataFormat format_for_path(const std::filesystem::path& path);

/// Loads a dataset file. Missing files raise IoError; schema violations raise
/// DataError naming the offending row (CSV line number or JSON array index).
Dataset parse_dataset(const std::filesystem::path& path, std::optional<DataFormat> format = {});
Dataset parse_dataset_text(std::string_view text, DataFormat format, std::string provenance = {});
std::string serialize_dataset(const Dataset& ds, DataFormat format);

/// Records of the given class in their original order.
Dataset filter_class(const Dataset& ds, KnotClass c);

struct JonesWindow {
  int min_exp = 0;
  int max_exp = 0;
  int width() const noexcept { return max_exp - min_exp + 1; }
  friend bool operator==(const JonesWindow&, const JonesWindow&) = default;
};

struct JonesMatrix {
  Eigen::MatrixXd values;  // one row per record
  JonesWindow window;
};

/// Zero-padded coefficient rows over the union of all exponent ranges.
JonesMatrix vectorize_jones(const Dataset& ds);
/// Same layout over a fixed window; a record reaching outside it is a DataError.
JonesMatrix vectorize_jones(const Dataset& ds, const JonesWindow& window);

struct KhovanovGrid {
  int i_min = 0;
  int i_max = 0;
  int j_min = 0;
  int j_max = 0;
  int width() const noexcept { return (i_max - i_min + 1) * (j_max - j_min + 1); }
  friend bool operator==(const KhovanovGrid&, const KhovanovGrid&) = default;
};

struct KhovanovMatrix {
  Eigen::MatrixXd values;  // row-major over the grid: i outer, j inner
  KhovanovGrid grid;
};

KhovanovMatrix vectorize_khovanov(const Dataset& ds);
KhovanovMatrix vectorize_khovanov(const Dataset& ds, const KhovanovGrid& grid);

/// True iff every Khovanov term sits on one diagonal j - 2i = const and the
/// coefficients along it, ordered by i, reproduce the Jones coefficients up to
/// a global sign or an alternating sign pattern. Throws DataError when the
/// record carries no Khovanov data.
bool check_khovanov_alternating(const KnotRecord& rec);

struct ValidationReport {
  std::size_t total = 0;
  std::size_t alternating = 0;
  std::size_t non_alternating = 0;
  std::size_t with_khovanov = 0;
  std::map<std::string, std::size_t> missing;  // field name -> records lacking it
  std::vector<std::string> warnings;
};

ValidationReport validate(const Dataset& ds);

}  // namespace knotstat

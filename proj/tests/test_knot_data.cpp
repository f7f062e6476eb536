#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>

#include "knotstat/error.hpp"
#include "knotstat/knot_data.hpp"

using namespace knotstat;

namespace {

const std::string kHeader =
    "name,crossings,alternating,jones,vol,longitude_length,meridian_length,mu_x,mu_y,cusp_volume,"
    "chern_simons,khovanov\n";

KnotRecord make_record(std::string name, bool alt, int min_exp, std::vector<std::int64_t> coeffs) {
  KnotRecord r;
  r.name = std::move(name);
  r.crossing_number = 5;
  r.alternating = alt;
  r.jones = LaurentPoly1(min_exp, std::move(coeffs));
  return r;
}

std::filesystem::path fixture(const char* name) { return std::filesystem::path(KNOTSTAT_FIXTURE_DIR) / name; }

}  // namespace

TEST(ParseCsv, FigureEightRow) {
  const auto ds = parse_dataset_text("name,crossings,alternating,jones,vol\n4_1,4,true,-2;1 -1 1 -1 1,2.0298832\n",
                                     DataFormat::Csv);
  ASSERT_EQ(ds.size(), 1u);
  const auto& r = ds[0];
  EXPECT_EQ(r.name, "4_1");
  EXPECT_EQ(r.crossing_number, 4);
  EXPECT_TRUE(r.alternating);
  EXPECT_EQ(r.jones, LaurentPoly1(-2, {1, -1, 1, -1, 1}));
  ASSERT_TRUE(r.hyperbolic.vol);
  EXPECT_DOUBLE_EQ(*r.hyperbolic.vol, 2.0298832);
  EXPECT_FALSE(r.hyperbolic.cusp_volume);
  EXPECT_FALSE(r.khovanov);
}

TEST(ParseCsv, TrailingEmptyFieldMeansAbsent) {
  const auto ds = parse_dataset_text(kHeader + "4_1,4,true,-2;1 -1 1 -1 1,2.0298832,,,,,,,\n", DataFormat::Csv);
  EXPECT_TRUE(ds[0].hyperbolic.vol);
  EXPECT_FALSE(ds[0].hyperbolic.longitude_length);
  EXPECT_FALSE(ds[0].khovanov);
}

TEST(ParseCsv, HeaderOnlyGivesEmptyDataset) {
  EXPECT_EQ(parse_dataset_text(kHeader, DataFormat::Csv).size(), 0u);
}

TEST(ParseCsv, DuplicateNameIsRejected) {
  const std::string text = kHeader + "4_1,4,true,-2;1 -1 1 -1 1,2.03\n4_1,4,true,-2;1 -1 1 -1 1,2.03\n";
  EXPECT_THROW(parse_dataset_text(text, DataFormat::Csv), DataError);
}

TEST(ParseCsv, ErrorsNameTheLine) {
  const std::string text = kHeader + "4_1,4,true,-2;1 -1 1 -1 1,2.03\n5_2,5,maybe,1;1 -1,2.8\n";
  try {
    parse_dataset_text(text, DataFormat::Csv);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ParseCsv, RejectsMalformedFields) {
  for (const std::string row : {"x,4,true,-2;1 0 1,abc\n", "x,4,true,1 2 3,2\n", "x,4,true,-2;1 -1 1,-2\n",
                                "x,zero,true,0;1,2\n", "x,4,true,-2;0 0,2\n", "x,4,true,0;1,2,,,,,,\"0,0\"\n"}) {
    EXPECT_THROW(parse_dataset_text(kHeader + row, DataFormat::Csv), DataError) << row;
  }
}

TEST(ParseCsv, UnknownColumnIsRejected) {
  EXPECT_THROW(parse_dataset_text("name,crossings,alternating,jones,color\n", DataFormat::Csv), DataError);
}

TEST(ParseCsv, ChernSimonsIsNormalized) {
  const auto ds = parse_dataset_text(kHeader + "5_2,5,true,1;1 -1 2 -1 1 -1,2.83,,,,,,-0.153204133,\n",
                                     DataFormat::Csv);
  ASSERT_TRUE(ds[0].hyperbolic.chern_simons);
  EXPECT_NEAR(*ds[0].hyperbolic.chern_simons, 0.5 - 0.153204133, 1e-12);
}

TEST(NormalizeChernSimons, LandsInHalfOpenInterval) {
  for (double v : {-1.3, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 3.1}) {
    const double n = normalize_chern_simons(v);
    EXPECT_GE(n, 0.0);
    EXPECT_LT(n, 0.5);
    const double k = (v - n) / 0.5;
    EXPECT_NEAR(k, std::round(k), 1e-12) << v;
  }
}

TEST(ParseCsv, ProvenanceCommentIsKept) {
  const auto ds = parse_dataset_text("# provenance: hand table\n" + kHeader, DataFormat::Csv);
  EXPECT_EQ(ds.provenance(), "hand table");
}

TEST(ParseDataset, MissingFileIsIoError) {
  EXPECT_THROW(parse_dataset("/nonexistent/knots.csv"), IoError);
}

TEST(ParseDataset, FixtureCsvAndJsonAgree) {
  const auto csv = parse_dataset(fixture("micro.csv"));
  const auto json = parse_dataset(fixture("micro.json"));
  ASSERT_EQ(csv.size(), 11u);
  EXPECT_EQ(csv.records(), json.records());
}

TEST(ParseDataset, FixtureValues) {
  const auto ds = parse_dataset(fixture("micro.csv"));
  const auto& fig8 = ds[0];
  EXPECT_EQ(fig8.name, "4_1");
  EXPECT_EQ(fig8.jones, LaurentPoly1(-2, {1, -1, 1, -1, 1}));
  EXPECT_NEAR(*fig8.hyperbolic.vol, 2.0298832128, 1e-10);
  for (const auto& r : ds) {
    // Every Jones polynomial satisfies J(1) = 1.
    std::int64_t sum = 0;
    for (auto c : r.jones.coeffs()) sum += c;
    EXPECT_EQ(sum, 1) << r.name;
  }
}

TEST(Serialize, RoundTripBothFormats) {
  const auto ds = parse_dataset(fixture("micro.csv"));
  for (auto fmt : {DataFormat::Csv, DataFormat::Json}) {
    const auto again = parse_dataset_text(serialize_dataset(ds, fmt), fmt);
    EXPECT_EQ(again.records(), ds.records());
  }
  EXPECT_EQ(parse_dataset_text(serialize_dataset(ds, DataFormat::Csv), DataFormat::Csv).provenance(),
            ds.provenance());
}

TEST(ParseJson, NullFieldsAreAbsentAndErrorsNameTheIndex) {
  const auto ds = parse_dataset_text(
      R"([{"name":"4_1","crossings":4,"alternating":true,"jones":{"min_exp":-2,"coeffs":[1,-1,1,-1,1]},"vol":null,"khovanov":null}])",
      DataFormat::Json);
  EXPECT_FALSE(ds[0].hyperbolic.vol);
  try {
    parse_dataset_text(R"([{"name":"a","crossings":3,"alternating":true,"jones":{"min_exp":0,"coeffs":[1]}},
                           {"name":"b","crossings":3,"alternating":"yes","jones":{"min_exp":0,"coeffs":[1]}}])",
                       DataFormat::Json);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
}

TEST(FilterClass, SplitsByAlternation) {
  std::vector<KnotRecord> recs;
  for (int i = 0; i < 5; ++i) recs.push_back(make_record("k" + std::to_string(i), i < 3, 0, {1, -1, 1}));
  const Dataset ds(recs);
  EXPECT_EQ(filter_class(ds, KnotClass::Alternating).size(), 3u);
  EXPECT_EQ(filter_class(ds, KnotClass::NonAlternating).size(), 2u);
  EXPECT_EQ(filter_class(ds, KnotClass::All).records(), ds.records());

  const Dataset alt_only(std::vector<KnotRecord>(recs.begin(), recs.begin() + 3));
  EXPECT_TRUE(filter_class(alt_only, KnotClass::NonAlternating).empty());
}

TEST(FilterClass, PartsUnionToWhole) {
  const auto ds = parse_dataset(fixture("micro.csv"));
  auto a = filter_class(ds, KnotClass::Alternating).records();
  const auto n = filter_class(ds, KnotClass::NonAlternating).records();
  a.insert(a.end(), n.begin(), n.end());
  auto names = [](std::vector<KnotRecord> v) {
    std::vector<std::string> out;
    for (auto& r : v) out.push_back(r.name);
    std::sort(out.begin(), out.end());
    return out;
  };
  EXPECT_EQ(names(a), names(ds.records()));
}

TEST(KnotClass, ParsesAliases) {
  EXPECT_EQ(parse_knot_class("alternating"), KnotClass::Alternating);
  EXPECT_EQ(parse_knot_class("nonalt"), KnotClass::NonAlternating);
  EXPECT_THROW(parse_knot_class("torus"), UsageError);
}

TEST(VectorizeJones, PadsToUnionWindow) {
  const Dataset ds({make_record("a", true, -2, {1, 2, 3, 4, 5}), make_record("b", true, 0, {6, 7, 8, 9})});
  const auto m = vectorize_jones(ds);
  EXPECT_EQ(m.window, (JonesWindow{-2, 3}));
  EXPECT_EQ(m.window.width(), 6);
  Eigen::MatrixXd expect(2, 6);
  expect << 1, 2, 3, 4, 5, 0, 0, 0, 6, 7, 8, 9;
  EXPECT_EQ(m.values, expect);
}

TEST(VectorizeJones, SingleRecordHasNoPadding) {
  const Dataset ds({make_record("a", true, 3, {1, -1, 1})});
  const auto m = vectorize_jones(ds);
  EXPECT_EQ(m.values.cols(), 3);
  EXPECT_EQ(m.values(0, 1), -1);
}

TEST(VectorizeJones, RowsReconstructPolynomialsUnderPermutation) {
  auto recs = parse_dataset(fixture("micro.csv")).records();
  std::mt19937 gen(7);
  std::shuffle(recs.begin(), recs.end(), gen);
  const Dataset ds(recs);
  const auto m = vectorize_jones(ds);
  EXPECT_EQ(m.window, vectorize_jones(parse_dataset(fixture("micro.csv"))).window);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    std::vector<std::int64_t> coeffs;
    for (int c = 0; c < m.window.width(); ++c)
      coeffs.push_back(static_cast<std::int64_t>(m.values(static_cast<Eigen::Index>(r), c)));
    EXPECT_EQ(LaurentPoly1(m.window.min_exp, coeffs), ds[r].jones);
  }
}

TEST(VectorizeJones, FixedWindowRejectsOutsideRecords) {
  const Dataset ds({make_record("a", true, -2, {1, 2, 3})});
  EXPECT_EQ(vectorize_jones(ds, JonesWindow{-3, 1}).values.cols(), 5);
  EXPECT_THROW(vectorize_jones(ds, JonesWindow{-1, 3}), DataError);
}

TEST(VectorizeKhovanov, FlattensOverGrid) {
  auto a = make_record("a", true, 0, {1});
  auto b = make_record("b", true, 0, {1});
  const std::vector<KhovanovTerm> ta{{0, 0, 1}};
  const std::vector<KhovanovTerm> tb{{1, 2, -3}};
  a.khovanov = LaurentPoly2(ta);
  b.khovanov = LaurentPoly2(tb);
  const auto m = vectorize_khovanov(Dataset({a, b}));
  EXPECT_EQ(m.grid, (KhovanovGrid{0, 1, 0, 2}));
  EXPECT_EQ(m.grid.width(), 6);
  Eigen::MatrixXd expect(2, 6);
  expect << 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -3;
  EXPECT_EQ(m.values, expect);

  const auto single = vectorize_khovanov(Dataset({b}));
  EXPECT_EQ(single.values.size(), 1);
  EXPECT_EQ(single.values(0, 0), -3);
}

TEST(CheckKhovanov, DiagonalMatchingJones) {
  auto r = make_record("a", true, -2, {1, -1, 1, -1, 1});
  std::vector<KhovanovTerm> terms;
  for (int i = 0; i < 5; ++i) terms.push_back({i - 2, 2 * (i - 2) + 1, r.jones.coeffs()[static_cast<std::size_t>(i)]});
  r.khovanov = LaurentPoly2(terms);
  EXPECT_TRUE(check_khovanov_alternating(r));

  terms.push_back({0, 7, 1});
  r.khovanov = LaurentPoly2(terms);
  EXPECT_FALSE(check_khovanov_alternating(r));

  r.khovanov = LaurentPoly2();
  EXPECT_FALSE(check_khovanov_alternating(r));

  r.khovanov.reset();
  EXPECT_THROW(check_khovanov_alternating(r), DataError);
}

TEST(CheckKhovanov, FixtureAlternatingKnotsPass) {
  for (const auto& r : parse_dataset(fixture("micro.csv")))
    if (r.alternating) EXPECT_TRUE(check_khovanov_alternating(r)) << r.name;
}

TEST(Validate, CountsAndWarnings) {
  auto low = make_record("low", true, 0, {1, 0});
  const Dataset ds({make_record("a", true, 0, {1, -1, 1}), make_record("b", false, 0, {1, -1, 1}), low});
  const auto rep = validate(ds);
  EXPECT_EQ(rep.total, 3u);
  EXPECT_EQ(rep.alternating, 2u);
  EXPECT_EQ(rep.non_alternating, 1u);
  EXPECT_EQ(rep.missing.at("vol"), 3u);
  EXPECT_EQ(rep.missing.at("khovanov"), 3u);
  ASSERT_EQ(rep.warnings.size(), 1u);
  EXPECT_NE(rep.warnings[0].find("low"), std::string::npos);
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "knotstat/derived.hpp"
#include "knotstat/error.hpp"

using namespace knotstat;

namespace {

const LaurentPoly1 kFigureEight(-2, {1, -1, 1, -1, 1});

// Integer polynomial from its factors, tracking roots for the Jensen oracle.
struct Factored {
  std::vector<std::int64_t> coeffs{1};  // ascending powers
  std::vector<Complex> roots;
  std::int64_t leading = 1;

  void times(const std::vector<std::int64_t>& f) {
    std::vector<std::int64_t> out(coeffs.size() + f.size() - 1, 0);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) out[i + j] += coeffs[i] * f[j];
    coeffs = out;
  }
};

// Term-by-term evaluation with std::polar, independent of eval_poly's Horner scheme.
Complex brute_force(const LaurentPoly1& p, double theta) {
  Complex sum(0.0);
  for (int e = p.min_exp(); e <= p.max_exp(); ++e)
    sum += static_cast<double>(p.coefficient(e)) * std::polar(1.0, theta * e);
  return sum;
}

}  // namespace

TEST(EvalPoly, HandCases) {
  EXPECT_NEAR(std::abs(eval_poly(kFigureEight, -1.0) - Complex(5.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(eval_poly(LaurentPoly1::monomial(3), 2.0) - Complex(8.0)), 0.0, 1e-12);
  const LaurentPoly1 p(-3, {2, -7, 0, 4, 9});
  EXPECT_NEAR(eval_poly(p, 1.0).real(), 8.0, 1e-12);
}

TEST(EvalPoly, ZeroArgument) {
  EXPECT_THROW(eval_poly(kFigureEight, 0.0), NumericError);
  EXPECT_EQ(eval_poly(LaurentPoly1(0, {4, 1}), 0.0), Complex(4.0));
  EXPECT_EQ(eval_poly(LaurentPoly1(2, {4, 1}), 0.0), Complex(0.0));
}

TEST(EvalPoly, MatchesTermwiseEvaluation) {
  const LaurentPoly1 p(-4, {3, -1, 0, 5, -2, 1, 7});
  for (double theta : {0.1, 1.3, 2.9, -0.7}) {
    EXPECT_NEAR(std::abs(eval_poly(p, std::polar(1.0, theta)) - brute_force(p, theta)), 0.0, 1e-12);
  }
}

TEST(Determinant, HandCases) {
  EXPECT_EQ(determinant(kFigureEight), 5);
  EXPECT_EQ(determinant(LaurentPoly1::monomial(0)), 1);
  EXPECT_EQ(determinant(LaurentPoly1(0, {-1, 2})), 3);  // J(-1) = -3
  EXPECT_THROW(determinant(LaurentPoly1(0, {1, 1})), DataError);
}

TEST(Determinant, EqualsModulusAtMinusOne) {
  const LaurentPoly1 p(1, {1, -2, 3, -2, 3, -2, 1, -1});  // 7_4
  EXPECT_EQ(determinant(p), std::llround(root_of_unity_modulus(p, 1, 2)));
  EXPECT_EQ(determinant(p), 15);
}

TEST(JensenOracle, HandCases) {
  const std::vector<Complex> minus_two{-2.0};
  EXPECT_DOUBLE_EQ(mahler_jensen_oracle(minus_two, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(mahler_jensen_oracle({}, 3.0), 3.0);
  const std::vector<Complex> on_circle{Complex(0.0, 1.0)};
  EXPECT_DOUBLE_EQ(mahler_jensen_oracle(on_circle, 1.0), 1.0);
}

TEST(Mahler, HandCases) {
  for (int k : {-3, 0, 5}) EXPECT_NEAR(mahler_measure(LaurentPoly1::monomial(k)), 1.0, 1e-12);
  EXPECT_NEAR(mahler_measure(LaurentPoly1::monomial(1, 2)), 2.0, 1e-12);
  EXPECT_NEAR(mahler_measure(LaurentPoly1(0, {-2, 1})), 2.0, 1e-8);
  EXPECT_THROW(mahler_measure(kFigureEight, 32), UsageError);
}

TEST(Mahler, AgreesWithJensenOnFactoredPolynomials) {
  std::mt19937 gen(2024);
  const std::vector<int> lin{-3, -2, 2, 3};
  for (int trial = 0; trial < 50; ++trial) {
    Factored f;
    int deg = 0;
    const int target = 1 + static_cast<int>(gen() % 8);
    while (deg < target) {
      const auto kind = gen() % 3;
      const int a = lin[gen() % lin.size()];
      if (kind == 0) {  // t - a
        f.times({-a, 1});
        f.roots.emplace_back(a);
        deg += 1;
      } else if (kind == 1) {  // a t - 1
        f.times({-1, a});
        f.roots.emplace_back(1.0 / a);
        f.leading *= a;
        deg += 1;
      } else if (deg + 2 <= 8) {  // t^2 + b t + c with complex roots of modulus sqrt(c)
        const int b = static_cast<int>(gen() % 5) - 2;
        const int c = std::vector<int>{2, 3, 5}[gen() % 3];
        f.times({c, b, 1});
        const Complex disc = std::sqrt(Complex(b * b - 4.0 * c));
        f.roots.push_back((-static_cast<double>(b) + disc) / 2.0);
        f.roots.push_back((-static_cast<double>(b) - disc) / 2.0);
        deg += 2;
      }
    }
    const int shift = static_cast<int>(gen() % 7) - 3;
    const LaurentPoly1 p(shift, f.coeffs);
    const double expect = mahler_jensen_oracle(f.roots, static_cast<double>(f.leading));
    EXPECT_NEAR(mahler_measure(p), expect, 1e-8) << "trial " << trial;
  }
}

TEST(Mahler, ShiftInvariantAndAtLeastOne) {
  const LaurentPoly1 p(1, {1, -1, 2, -2, 2, -1, 1, -1});
  const double m = mahler_measure(p);
  EXPECT_NEAR(mahler_measure(p.shifted(-7)), m, 1e-12);
  EXPECT_GE(m, 1.0 - 1e-9);
  EXPECT_GE(mahler_measure(kFigureEight), 1.0 - 1e-9);
}

TEST(Mahler, AdaptiveDoublingConverges) {
  const LaurentPoly1 p(0, {1, -3, 5, -2});
  const auto est = mahler_measure_adaptive(p, 1e-9, 256);
  EXPECT_TRUE(est.converged);
  EXPECT_NEAR(est.value, mahler_measure(p, est.n_points / 2), 1e-9);
  EXPECT_NEAR(mahler_measure(p, 2048), mahler_measure(p, 4096), 1e-9);
}

TEST(RootOfUnity, HandCases) {
  EXPECT_NEAR(root_of_unity_modulus(kFigureEight, 1, 2), 5.0, 1e-12);
  for (int k = 1; k < 7; ++k) EXPECT_NEAR(root_of_unity_modulus(LaurentPoly1::monomial(4, -1), k, 7), 1.0, 1e-12);
  // 1 - 2 cos(6 pi/5) + 2 cos(12 pi/5) = 1 + sqrt(5).
  EXPECT_NEAR(root_of_unity_modulus(kFigureEight, 3, 5), 1.0 + std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(root_of_unity_modulus(kFigureEight, 3, 5), std::abs(brute_force(kFigureEight, 6 * std::numbers::pi / 5)),
              1e-12);
}

TEST(RootOfUnity, ConjugatePairsAgreeExactly) {
  const LaurentPoly1 p(-3, {-1, 2, -2, 3, -2, 2, -1, 5});
  for (int n = 2; n <= 13; ++n)
    for (int k = 1; k < n; ++k) EXPECT_EQ(root_of_unity_modulus(p, k, n), root_of_unity_modulus(p, n - k, n));
  EXPECT_EQ(root_of_unity_modulus(p, 3, 5), root_of_unity_modulus(p, 6, 10));
}

TEST(RootOfUnity, RejectsBadIndices) {
  EXPECT_THROW(root_of_unity_modulus(kFigureEight, 0, 5), UsageError);
  EXPECT_THROW(root_of_unity_modulus(kFigureEight, 5, 5), UsageError);
  EXPECT_THROW(root_of_unity_modulus(kFigureEight, 1, 0), UsageError);
}

TEST(Rescale, HandCases) {
  EXPECT_NEAR(rescale(5.0, 4), std::log(5.0) / std::log(4.0), 1e-15);
  EXPECT_NEAR(rescale(5.0, 4), 1.16096, 1e-5);
  EXPECT_EQ(rescale(1.0, 3), 0.0);
  EXPECT_DOUBLE_EQ(rescale(4.0, 2), 2.0);
  EXPECT_THROW(rescale(0.0, 4), DataError);
  EXPECT_THROW(rescale(2.0, 1), DataError);
}

TEST(Degree, HandCases) {
  EXPECT_EQ(degree(kFigureEight), 4);
  EXPECT_EQ(degree(LaurentPoly1::monomial(9)), 0);
}

#include <gtest/gtest.h>

#include <vector>

#include "knotstat/error.hpp"
#include "knotstat/laurent.hpp"

using knotstat::DataError;
using knotstat::KhovanovTerm;
using knotstat::LaurentPoly1;
using knotstat::LaurentPoly2;

TEST(LaurentPoly1, TrimsZerosAtBothEnds) {
  const LaurentPoly1 p(-3, {0, 0, 1, -1, 0});
  EXPECT_EQ(p.min_exp(), -1);
  EXPECT_EQ(p.max_exp(), 0);
  ASSERT_EQ(p.coeffs().size(), 2u);
  EXPECT_EQ(p.coeffs()[0], 1);
  EXPECT_EQ(p.coeffs()[1], -1);
}

TEST(LaurentPoly1, ZeroPolynomialIsRejected) {
  EXPECT_THROW(LaurentPoly1(0, {0, 0}), DataError);
  EXPECT_THROW(LaurentPoly1(0, {}), DataError);
}

TEST(LaurentPoly1, DegreeIsExponentSpan) {
  EXPECT_EQ(LaurentPoly1(-2, {1, -1, 1, -1, 1}).degree(), 4);
  EXPECT_EQ(LaurentPoly1::monomial(7, 3).degree(), 0);
  EXPECT_EQ(LaurentPoly1(5, std::vector<std::int64_t>(7, 1)).degree(), 6);
}

TEST(LaurentPoly1, CoefficientOutsideRangeIsZero) {
  const LaurentPoly1 p(1, {2, 0, -3});
  EXPECT_EQ(p.coefficient(0), 0);
  EXPECT_EQ(p.coefficient(1), 2);
  EXPECT_EQ(p.coefficient(2), 0);
  EXPECT_EQ(p.coefficient(3), -3);
  EXPECT_EQ(p.coefficient(4), 0);
}

TEST(LaurentPoly1, ShiftMovesExponentsOnly) {
  const LaurentPoly1 p(-2, {1, -1, 1});
  const auto q = p.shifted(5);
  EXPECT_EQ(q.min_exp(), 3);
  EXPECT_EQ(q.max_exp(), 5);
  EXPECT_TRUE(std::equal(p.coeffs().begin(), p.coeffs().end(), q.coeffs().begin()));
}

TEST(LaurentPoly2, DropsZeroCoefficients) {
  const std::vector<KhovanovTerm> terms{{0, 0, 1}, {1, 2, 0}, {2, 4, -3}};
  const LaurentPoly2 p(terms);
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.coefficient(2, 4), -3);
  EXPECT_EQ(p.coefficient(1, 2), 0);
}

TEST(LaurentPoly2, DuplicatePairIsRejected) {
  const std::vector<KhovanovTerm> terms{{0, 0, 1}, {0, 0, 2}};
  EXPECT_THROW(LaurentPoly2{terms}, DataError);
}

TEST(LaurentPoly2, TermOrderDoesNotMatter) {
  const std::vector<KhovanovTerm> a{{0, 0, 1}, {1, 2, -3}, {-1, 5, 4}};
  const std::vector<KhovanovTerm> b{{-1, 5, 4}, {0, 0, 1}, {1, 2, -3}};
  EXPECT_EQ(LaurentPoly2(a), LaurentPoly2(b));
}

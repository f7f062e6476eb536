#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace knotstat {

/// One-variable integer Laurent polynomial sum_i coeffs[i] * t^(min_exp + i),
/// always held in trimmed form: non-empty, first and last coefficient non-zero.
class LaurentPoly1 {
 public:
  /// Trims leading/trailing zeros. Throws DataError for the zero polynomial.
  LaurentPoly1(int min_exp, std::vector<std::int64_t> coeffs);

  static LaurentPoly1 monomial(int exponent, std::int64_t coeff = 1);

  int min_exp() const noexcept { return min_exp_; }
  int max_exp() const noexcept { return min_exp_ + static_cast<int>(coeffs_.size()) - 1; }
  std::span<const std::int64_t> coeffs() const noexcept { return coeffs_; }
  /// Coefficient of t^exponent, zero outside the stored range.
  std::int64_t coefficient(int exponent) const noexcept;
  /// Exponent span max_exp - min_exp.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  LaurentPoly1 shifted(int by) const { return {min_exp_ + by, coeffs_}; }

  friend bool operator==(const LaurentPoly1&, const LaurentPoly1&) = default;

 private:
  int min_exp_;
  std::vector<std::int64_t> coeffs_;
};

struct KhovanovTerm {
  int i;
  int j;
  std::int64_t c;
};

/// Sparse two-variable integer Laurent polynomial, keyed by (i, j).
class LaurentPoly2 {
 public:
  using Terms = std::map<std::pair<int, int>, std::int64_t>;

  LaurentPoly2() = default;
  /// Zero coefficients are dropped; a repeated (i, j) pair throws DataError.
  explicit LaurentPoly2(std::span<const KhovanovTerm> terms);

  const Terms& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  std::int64_t coefficient(int i, int j) const noexcept;

  friend bool operator==(const LaurentPoly2&, const LaurentPoly2&) = default;

 private:
  Terms terms_;
};

}  // namespace knotstat

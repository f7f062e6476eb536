#include "knotstat/laurent.hpp"

#include <algorithm>
#include <string>

#include "knotstat/error.hpp"

namespace knotstat {

LaurentPoly1::LaurentPoly1(int min_exp, std::vector<std::int64_t> coeffs)
    : min_exp_(min_exp), coeffs_(std::move(coeffs)) {
  auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](auto c) { return c != 0; });
  if (first == coeffs_.end()) throw DataError("zero polynomial");
  auto last = std::find_if(coeffs_.rbegin(), coeffs_.rend(), [](auto c) { return c != 0; });
  min_exp_ += static_cast<int>(first - coeffs_.begin());
  coeffs_.erase(last.base(), coeffs_.end());
  coeffs_.erase(coeffs_.begin(), first);
}

LaurentPoly1 LaurentPoly1::monomial(int exponent, std::int64_t coeff) {
  return LaurentPoly1(exponent, {coeff});
}

std::int64_t LaurentPoly1::coefficient(int exponent) const noexcept {
  if (exponent < min_exp_ || exponent > max_exp()) return 0;
  return coeffs_[static_cast<std::size_t>(exponent - min_exp_)];
}

LaurentPoly2::LaurentPoly2(std::span<const KhovanovTerm> terms) {
  for (const auto& t : terms) {
    if (!terms_.emplace(std::pair{t.i, t.j}, t.c).second)
      throw DataError("duplicate Khovanov term (" + std::to_string(t.i) + "," +
                      std::to_string(t.j) + ")");
  }
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
}

std::int64_t LaurentPoly2::coefficient(int i, int j) const noexcept {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? 0 : it->second;
}

}  // namespace knotstat

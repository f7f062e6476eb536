#include "knotstat/derived.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "knotstat/error.hpp"

namespace knotstat {

namespace {

Complex ipow(Complex z, int e) {
  if (e < 0) return Complex(1.0) / ipow(z, -e);
  Complex result(1.0);
  while (e) {
    if (e & 1) result *= z;
    z *= z;
    e >>= 1;
  }
  return result;
}

// Horner over the stored coefficients, i.e. p(z) / z^min_exp.
Complex eval_shifted(const LaurentPoly1& p, Complex z) {
  const auto c = p.coeffs();
  Complex acc(0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + static_cast<double>(*it);
  return acc;
}

// Phase of e^{2 pi i k/n} with k folded into (-n/2, n/2] so that (k, n) and
// (n - k, n) produce exactly conjugate points.
double folded_phase(int k, int n) {
  int kk = k % n;
  if (kk < 0) kk += n;
  if (2 * kk > n) kk -= n;
  return 2.0 * std::numbers::pi * (static_cast<double>(kk) / static_cast<double>(n));
}

}  // namespace

double RootOfUnity::phase() const noexcept { return folded_phase(k, n); }

Complex eval_poly(const LaurentPoly1& p, Complex z) {
  if (z == Complex(0.0)) {
    if (p.min_exp() < 0) throw NumericError("cannot evaluate a Laurent polynomial with negative "
                                            "exponents at 0");
    return p.min_exp() == 0 ? Complex(static_cast<double>(p.coefficient(0))) : Complex(0.0);
  }
  return eval_shifted(p, z) * ipow(z, p.min_exp());
}

std::int64_t determinant(const LaurentPoly1& p) {
  // Exact integer evaluation at t = -1.
  std::int64_t sum = 0;
  for (int e = p.min_exp(); e <= p.max_exp(); ++e) {
    auto c = p.coefficient(e);
    sum += (e % 2 == 0) ? c : -c;
  }
  if (sum == 0) throw DataError("determinant |J(-1)| is 0; knot determinants are odd");
  return sum < 0 ? -sum : sum;
}

double mahler_measure(const LaurentPoly1& p, std::size_t n_points) {
  if (n_points < 64) throw UsageError("mahler_measure needs at least 64 quadrature nodes");
  // |z^min_exp| = 1 on the unit circle, so the exponent offset drops out.
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n_points);
  double sum = 0.0;
  for (std::size_t j = 0; j < n_points; ++j) {
    const double theta = step * (static_cast<double>(j) + 0.5);
    const double mod = std::abs(eval_shifted(p, std::polar(1.0, theta)));
    sum += std::log(std::max(mod, 1e-300));
  }
  return std::exp(sum / static_cast<double>(n_points));
}

MahlerEstimate mahler_measure_adaptive(const LaurentPoly1& p, double tol, std::size_t start,
                                       std::size_t max_points) {
  std::size_t n = start;
  double prev = mahler_measure(p, n);
  while (2 * n <= max_points) {
    n *= 2;
    const double cur = mahler_measure(p, n);
    if (std::abs(cur - prev) < tol) return {cur, n, true};
    prev = cur;
  }
  return {prev, n, false};
}

double mahler_jensen_oracle(std::span<const Complex> roots, Complex leading) {
  double m = std::abs(leading);
  for (const auto& r : roots) m *= std::max(1.0, std::abs(r));
  return m;
}

double unit_circle_modulus(const LaurentPoly1& p, double phase) {
  return std::abs(eval_shifted(p, std::polar(1.0, phase)));
}

double root_of_unity_modulus(const LaurentPoly1& p, int k, int n) {
  if (n <= 0 || k <= 0 || k >= n)
    throw UsageError("root of unity needs 0 < k < n, got k=" + std::to_string(k) +
                     " n=" + std::to_string(n));
  return unit_circle_modulus(p, folded_phase(k, n));
}

double rescale(double value, int jones_degree) {
  if (!(value > 0)) throw DataError("cannot rescale non-positive value " + std::to_string(value));
  if (jones_degree < 2)
    throw DataError("Jones degree " + std::to_string(jones_degree) +
                    " < 2 makes ln(degree) degenerate");
  return std::log(value) / std::log(static_cast<double>(jones_degree));
}

}  // namespace knotstat

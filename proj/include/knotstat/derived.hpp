#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

#include "knotstat/laurent.hpp"

namespace knotstat {

using Complex = std::complex<double>;

inline constexpr std::size_t kDefaultMahlerPoints = 4096;

/// Primitive k/n root of unity selector, 0 < k < n.
struct RootOfUnity {
  int k = 3;
  int n = 5;
  double phase() const noexcept;
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
};

/// sum_i coeffs[i] * z^(min_exp + i). Horner in z, then a single power for the
/// exponent offset. Throws NumericError for z = 0 with negative exponents.
Complex eval_poly(const LaurentPoly1& p, Complex z);

/// |J(-1)| rounded; throws DataError when it rounds to 0.
std::int64_t determinant(const LaurentPoly1& p);

/// exp of the mean of ln|p(e^{i theta})| over midpoint nodes
/// theta_j = 2 pi (j + 1/2) / n_points. Requires n_points >= 64.
double mahler_measure(const LaurentPoly1& p, std::size_t n_points = kDefaultMahlerPoints);

struct MahlerEstimate {
  double value;
  std::size_t n_points;
  bool converged;  // last doubling moved the value by less than tol
};

/// Doubles the node count from `start` until successive estimates differ by
/// less than tol or max_points is reached. Unit-circle roots make ln|p|
/// singular and convergence only algebraic, so the cap matters there.
MahlerEstimate mahler_measure_adaptive(const LaurentPoly1& p, double tol = 1e-9,
                                       std::size_t start = kDefaultMahlerPoints,
                                       std::size_t max_points = std::size_t{1} << 22);

/// Jensen's formula: |leading| * prod max(1, |root|).
double mahler_jensen_oracle(std::span<const Complex> roots, Complex leading);

/// |p(e^{2 pi i k / n})|.
double root_of_unity_modulus(const LaurentPoly1& p, int k, int n);
/// |p(e^{i phase})|.
double unit_circle_modulus(const LaurentPoly1& p, double phase);

/// ln(value) / ln(jones_degree). DataError for value <= 0 or degree < 2.
double rescale(double value, int jones_degree);

inline int degree(const LaurentPoly1& p) noexcept { return p.degree(); }

}  // namespace knotstat

#pragma once
// Complex dilogarithm Li(z) and the function
//   B(z) = (arg z * log|1 - z| + Im Li(z)) / pi.
// Principal branches throughout. Points on the cut [1, inf) are taken as the
// limit from the upper half plane, whatever the sign of the zero imaginary part.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"

namespace fivevertex {

using ComplexPoint = std::complex<double>;

namespace detail {

// Li(z) = sum_{n>=0} b_n v^{n+1}, v = -log(1 - z), b_n = B_n/(n+1)!.
// Only n = 0, 1 and even n contribute.
inline constexpr std::array<double, 12> kBernoulliEven = {
    0.027777777777777776,    -0.0002777777777777778,   4.72411186696901e-06,
    -9.185773074661964e-08,  1.8978869988971e-09,      -4.0647616451442256e-11,
    8.921691020456452e-13,   -1.9939295860721074e-14,  4.518980029619918e-16,
    -1.0356517612181247e-17, 2.395218621026187e-19,    -5.581785874325009e-21};

inline ComplexPoint dilog_small(ComplexPoint z) {
  // |z| <= 1/2: direct series, 2^-k convergence
  ComplexPoint sum = 0, p = z;
  for (int k = 1; k < 60; ++k) {
    ComplexPoint term = p / double(k * k);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    p *= z;
  }
  return sum;
}

inline ComplexPoint dilog_bernoulli(ComplexPoint z) {
  // |z| <= 1, Re z <= 1/2, so |v| stays near pi/3
  const ComplexPoint v = -std::log(1.0 - z);
  const ComplexPoint v2 = v * v;
  ComplexPoint sum = v - 0.25 * v2;
  ComplexPoint p = v2 * v;
  for (double b : kBernoulliEven) {
    sum += b * p;
    p *= v2;
  }
  return sum;
}

// |z| <= 1
inline ComplexPoint dilog_disk(ComplexPoint z) {
  constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  if (std::abs(z) <= 0.5) return dilog_small(z);
  if (z.real() <= 0.5) return dilog_bernoulli(z);
  if (z == ComplexPoint(1.0, 0.0)) return pi2_6;
  // reflection z -> 1 - z
  const ComplexPoint w = 1.0 - z;
  const ComplexPoint inner = std::abs(w) <= 0.5 ? dilog_small(w) : dilog_bernoulli(w);
  return pi2_6 - std::log(z) * std::log(w) - inner;
}

}  // namespace detail

inline ComplexPoint dilog(ComplexPoint z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::invalid_argument("dilog: non-finite argument");
  constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  if (z.imag() == 0.0) z = ComplexPoint(z.real(), 0.0);  // drop a negative zero
  if (std::abs(z) <= 1.0) return detail::dilog_disk(z);
  // inversion z -> 1/z; for real z > 1 the +0 imaginary part selects the upper side
  const ComplexPoint l = std::log(-z);
  ComplexPoint zi = 1.0 / z;
  if (z.imag() == 0.0) zi = ComplexPoint(zi.real(), 0.0);
  return -pi2_6 - 0.5 * l * l - detail::dilog_disk(zi);
}

inline double bfunc(ComplexPoint z) {
  if (z == ComplexPoint(0.0, 0.0) || z == ComplexPoint(1.0, 0.0))
    throw singular_argument_error("bfunc: argument is 0 or 1");
  if (z.imag() == 0.0) z = ComplexPoint(z.real(), 0.0);
  const double a = std::arg(z);
  return (a * std::log(std::abs(1.0 - z)) + dilog(z).imag()) / std::numbers::pi;
}

}  // namespace fivevertex

#pragma once
// Bivariate polynomial sum_k A_k prod_{i<k}(1 - A_i x) prod_{i>k}(1 - A_i y)
// and its coefficient identity against elementary symmetric polynomials.
// Templated on the scalar so the check can run exactly (rationals) or in double.

#include <cmath>
#include <algorithm>
#include <type_traits>
#include <vector>

namespace fivevertex {

// coeffs[i][j] multiplies x^i y^j; dimension (n+1) x (n+1) for n+1 inputs.
template <class T>
using BivariatePoly = std::vector<std::vector<T>>;

template <class T>
BivariatePoly<T> apoly_expand(const std::vector<T>& A) {
  const std::size_t L = A.size();
  BivariatePoly<T> P(L, std::vector<T>(L, T(0)));
  for (std::size_t k = 0; k < L; ++k) {
    // running product, starting from the constant A_k
    BivariatePoly<T> Q(L, std::vector<T>(L, T(0)));
    Q[0][0] = A[k];
    auto mul = [&](const T& a, bool in_x) {
      BivariatePoly<T> R = Q;
      for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j) {
          if (Q[i][j] == T(0)) continue;
          if (in_x && i + 1 < L) R[i + 1][j] -= a * Q[i][j];
          if (!in_x && j + 1 < L) R[i][j + 1] -= a * Q[i][j];
        }
      Q = std::move(R);
    };
    for (std::size_t i = 0; i < k; ++i) mul(A[i], true);
    for (std::size_t i = k + 1; i < L; ++i) mul(A[i], false);
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t j = 0; j < L; ++j) P[i][j] += Q[i][j];
  }
  return P;
}

// e[k] = k-th elementary symmetric polynomial, k = 0..L
template <class T>
std::vector<T> elementary_symmetric(const std::vector<T>& A) {
  std::vector<T> e(A.size() + 1, T(0));
  e[0] = T(1);
  for (std::size_t m = 0; m < A.size(); ++m)
    for (std::size_t k = m + 1; k >= 1; --k) e[k] += A[m] * e[k - 1];
  return e;
}

template <class T>
struct ApolyReport {
  BivariatePoly<T> coeffs;
  BivariatePoly<T> expected;
  bool exact_match = true;
  double max_residual = 0;  // meaningful for floating T
  bool symmetric = true;
};

template <class T>
ApolyReport<T> apoly_check(const std::vector<T>& A) {
  ApolyReport<T> rep;
  if (A.empty()) return rep;
  const std::size_t L = A.size();
  rep.coeffs = apoly_expand(A);
  const auto e = elementary_symmetric(A);
  rep.expected.assign(L, std::vector<T>(L, T(0)));
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j) {
      const std::size_t k = i + j + 1;
      T v = k < e.size() ? e[k] : T(0);
      if ((i + j) % 2) v = -v;
      rep.expected[i][j] = v;
      if (rep.coeffs[i][j] != v) rep.exact_match = false;
      if (rep.coeffs[i][j] != rep.coeffs[j][i]) rep.symmetric = false;
      if constexpr (std::is_floating_point_v<T>)
        rep.max_residual = std::max(rep.max_residual, double(std::abs(rep.coeffs[i][j] - v)));
    }
  return rep;
}

}  // namespace fivevertex

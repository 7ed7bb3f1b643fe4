#pragma once
// Dense transfer matrices on a width-N cylinder, for small N.
//
// Row transfer T: basis = n-subsets of occupied vertical edges below a row,
// mapped to those above it. Column transfer C: basis = occupied horizontal
// edges east of a column, mapped to those west of it. Both are built from
// the five local vertex rules, one vertex at a time around the ring.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "model.hpp"

namespace fivevertex {

inline std::vector<std::uint32_t> subsets_of_size(int N, int n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1u << N); ++m)
    if (std::popcount(m) == n) out.push_back(m);
  return out;
}

struct TransferMatrix {
  int N = 0, n = 0;
  double beta = 0;  // row weight (row transfer) or column weight (column transfer)
  FieldPoint fields;
  std::vector<std::uint32_t> basis;
  std::vector<double> entries;  // entries[i * dim + j] = weight of basis[j] -> basis[i]

  std::size_t dim() const { return basis.size(); }
  double at(std::size_t i, std::size_t j) const { return entries[i * dim() + j]; }
  std::size_t index(std::uint32_t m) const {
    return std::size_t(std::lower_bound(basis.begin(), basis.end(), m) - basis.begin());
  }
};

namespace detail {

// One ring of N vertices. in_bits are the edges entering each vertex across
// the ring (S for rows, E for columns); the carry runs along the ring (E->W
// for rows, S->N for columns). order[k] is the k-th vertex visited; the carry
// leaving the last vertex must equal the one entering the first.
// weight_of(pos) gives r at that vertex; carry_field and out_field are the
// per-edge field factors of the carry edges and the out edges.
template <class R>
void ring_transitions(int N, std::uint32_t in_bits, const std::vector<int>& order, R&& r_at, double carry_field,
                      double out_field, std::vector<std::pair<std::uint32_t, double>>& acc) {
  for (int c = 0; c <= 1; ++c) {
    // depth-first over the two-way choices
    struct Frame {
      int k, carry;
      std::uint32_t out;
      double w;
    };
    std::vector<Frame> stack{{0, c, 0u, 1.0}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (f.k == N) {
        if (f.carry == c) acc.push_back({f.out, f.w});
        continue;
      }
      const int pos = order[f.k];
      const int in = (in_bits >> pos) & 1;
      const double r = r_at(pos);
      if (in + f.carry > 1) continue;  // crossing
      if (in + f.carry == 0) {
        stack.push_back({f.k + 1, 0, f.out, f.w * std::abs(1 - r * r)});
        continue;
      }
      const double w_straight = 1.0, w_turn = r;
      const bool from_in = in == 1;
      // out edge occupied, carry free
      stack.push_back({f.k + 1, 0, f.out | (1u << pos), f.w * (from_in ? w_straight : w_turn) * out_field});
      // carry occupied, out edge free
      stack.push_back({f.k + 1, 1, f.out, f.w * (from_in ? w_turn : w_straight) * carry_field});
    }
  }
}

inline TransferMatrix assemble(int N, int n, double beta, FieldPoint f, bool rows, const FundamentalDomain& d,
                               long line) {
  TransferMatrix T;
  T.N = N, T.n = n, T.beta = beta, T.fields = f;
  T.basis = subsets_of_size(N, n);
  const std::size_t dim = T.basis.size();
  T.entries.assign(dim * dim, 0.0);
  std::vector<int> order(N);
  for (int k = 0; k < N; ++k) order[k] = rows ? N - 1 - k : k;  // rows sweep east to west, columns south to north
  std::vector<std::pair<std::uint32_t, double>> acc;
  for (std::size_t j = 0; j < dim; ++j) {
    acc.clear();
    if (rows)
      ring_transitions(N, T.basis[j], order, [&](int x) { return d.alpha(x) * beta; }, std::exp(f.Y),
                       std::exp(f.X), acc);
    else
      ring_transitions(N, T.basis[j], order, [&](int y) { return beta * d.beta(y); }, std::exp(f.X),
                       std::exp(f.Y), acc);
    for (auto [m, w] : acc) T.entries[T.index(m) * dim + j] += w;
  }
  (void)line;
  return T;
}

}  // namespace detail

// Row of weight beta: r(x) = alpha_x * beta.
inline TransferMatrix build_transfer_matrix(int N, int n, double beta, const FundamentalDomain& d, FieldPoint f) {
  if (n < 0 || n > N) throw std::invalid_argument("build_transfer_matrix: need 0 <= n <= N");
  return detail::assemble(N, n, beta, f, true, d, 0);
}

// Column of weight alpha: r(y) = alpha * beta_y.
inline TransferMatrix build_column_transfer_matrix(int N, int n, double alpha, const FundamentalDomain& d,
                                                   FieldPoint f) {
  if (n < 0 || n > N) throw std::invalid_argument("build_column_transfer_matrix: need 0 <= n <= N");
  return detail::assemble(N, n, alpha, f, false, d, 0);
}

inline std::vector<double> matmul(const std::vector<double>& A, const std::vector<double>& B, std::size_t n) {
  std::vector<double> C(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double a = A[i * n + k];
      if (a == 0) continue;
      for (std::size_t j = 0; j < n; ++j) C[i * n + j] += a * B[k * n + j];
    }
  return C;
}

// max |T1 T2 - T2 T1| / max |T1 T2|
inline double check_commutation(int N, int n, double beta1, double beta2, const FundamentalDomain& d, FieldPoint f) {
  const auto A = build_transfer_matrix(N, n, beta1, d, f), B = build_transfer_matrix(N, n, beta2, d, f);
  const std::size_t m = A.dim();
  const auto AB = matmul(A.entries, B.entries, m), BA = matmul(B.entries, A.entries, m);
  double res = 0, scale = 0;
  for (std::size_t i = 0; i < m * m; ++i) {
    res = std::max(res, std::abs(AB[i] - BA[i]));
    scale = std::max(scale, std::abs(AB[i]));
  }
  return scale > 0 ? res / scale : res;
}

// Z_N = sum_n Tr(T_{N-1} ... T_0), dense; small N only.
inline double partition_function_rows(int N, const FundamentalDomain& d, FieldPoint f) {
  double Z = 0;
  for (int n = 0; n <= N; ++n) {
    std::vector<double> P;
    std::size_t m = 0;
    for (int y = 0; y < N; ++y) {
      const auto T = build_transfer_matrix(N, n, d.beta(y), d, f);
      m = T.dim();
      P = P.empty() ? T.entries : matmul(T.entries, P, m);
    }
    for (std::size_t i = 0; i < m; ++i) Z += P[i * m + i];
  }
  return Z;
}

// Same partition function through column transfer: sum_n Tr(C_0 C_1 ... C_{N-1}).
inline double partition_function_columns(int N, const FundamentalDomain& d, FieldPoint f) {
  double Z = 0;
  for (int n = 0; n <= N; ++n) {
    std::vector<double> P;
    std::size_t m = 0;
    for (int x = N - 1; x >= 0; --x) {
      const auto C = build_column_transfer_matrix(N, n, d.alpha(x), d, f);
      m = C.dim();
      P = P.empty() ? C.entries : matmul(C.entries, P, m);
    }
    for (std::size_t i = 0; i < m; ++i) Z += P[i * m + i];
  }
  return Z;
}

// Per-sector traces of the row product (sector = vertical edges per row).
inline std::vector<double> sector_sums_rows(int N, const FundamentalDomain& d, FieldPoint f) {
  std::vector<double> out;
  for (int n = 0; n <= N; ++n) {
    std::vector<double> P;
    std::size_t m = 0;
    for (int y = 0; y < N; ++y) {
      const auto T = build_transfer_matrix(N, n, d.beta(y), d, f);
      m = T.dim();
      P = P.empty() ? T.entries : matmul(T.entries, P, m);
    }
    double z = 0;
    for (std::size_t i = 0; i < m; ++i) z += P[i * m + i];
    out.push_back(z);
  }
  return out;
}

}  // namespace fivevertex

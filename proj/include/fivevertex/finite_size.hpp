#pragma once
// Finite-size free energy (1/N^2) log Z_N on the N x N torus.
//
// Rows are applied as N single-vertex updates on vectors indexed by
// occupied-edge masks of fixed popcount, so nothing dense is ever formed.
// The trace over a particle sector uses translation orbits (shift by m1):
// only one representative per orbit is propagated.
// Sectors are added in order of a Collatz-Wielandt upper bound on their
// trace; the sum stops once the bounds of all remaining sectors are below
// tol times what has been accumulated, so the truncation is rigorous.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace fivevertex {

struct FiniteSizeOptions {
  double tol = 1e-12;
  int batch = 16;
  bool auto_direction = true;
  int power_iterations = 60;
};

struct FiniteSizeResult {
  int N = 0;
  double f = 0;
  double logZ = 0;
  int sectors_used = 0;
  int sectors_skipped = 0;
  double log_skipped_bound = -INFINITY;  // log of the summed upper bounds of skipped sectors
  bool transposed = false;
};

namespace detail {

inline double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

class RowEngine {
 public:
  RowEngine(int N, const FundamentalDomain& d, FieldPoint f) : N_(N), d_(d), f_(f) {
    if (N < 1 || N > 24) throw size_error("finite-size engine supports 1 <= N <= 24");
    rank_.assign(std::size_t(1) << N, 0);
    masks_.resize(N + 2);
    for (std::uint32_t m = 0; m < (1u << N); ++m) {
      const int p = std::popcount(m);
      rank_[m] = std::uint32_t(masks_[p].size());
      masks_[p].push_back(m);
    }
    lists_.resize(N + 2);
  }

  int N() const { return N_; }
  std::size_t dim(int n) const { return n >= 0 && n <= N_ ? masks_[n].size() : 0; }
  const std::vector<std::uint32_t>& masks(int n) const { return masks_[n]; }
  std::uint32_t rank(std::uint32_t m) const { return rank_[m]; }

  // V: dim(n) x B, row-major in the state index. Applies the row of weight
  // beta_y in place (result in V). Returns nothing; multiplies by e^{nX}.
  void apply_row(int n, int y, std::vector<double>& V, int B) {
    const std::size_t D = dim(n);
    out_.assign(D * B, 0.0);
    // carry 0 at the seam: k = n, start in A0
    a0_.assign(V.begin(), V.end());
    a1_.assign(dim(n - 1) * B, 0.0);
    sweep(n, y, B);
    for (std::size_t i = 0; i < D * B; ++i) out_[i] = a0_[i];
    // carry 1 at the seam: k = n + 1, start in A1
    if (n + 1 <= N_ + 1) {
      a0_.assign(dim(n + 1) * B, 0.0);
      a1_.assign(V.begin(), V.end());
      sweep(n + 1, y, B);
      for (std::size_t i = 0; i < D * B; ++i) out_[i] += a1_[i];
    }
    const double ex = std::exp(n * f_.X);
    for (std::size_t i = 0; i < D * B; ++i) V[i] = out_[i] * ex;
  }

 private:
  struct Lists {
    bool built = false;
    // per bit x: empty-vertex indices in A0, blocked indices in A1, pairs (A0 index, A1 index)
    std::vector<std::vector<std::uint32_t>> empty, blocked;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> pairs;
  };

  const Lists& lists(int k) {
    Lists& L = lists_[k];
    if (L.built) return L;
    L.empty.resize(N_), L.blocked.resize(N_), L.pairs.resize(N_);
    for (int x = 0; x < N_; ++x) {
      const std::uint32_t bx = 1u << x;
      if (k <= N_)
        for (std::uint32_t m : masks_[k])
          if (!(m & bx)) L.empty[x].push_back(rank_[m]);
      if (k >= 1)
        for (std::uint32_t q : masks_[k - 1]) {
          if (q & bx)
            L.blocked[x].push_back(rank_[q]);
          else if (k <= N_)
            L.pairs[x].push_back({rank_[q | bx], rank_[q]});
        }
    }
    L.built = true;
    return L;
  }

  // A0 holds states with carry 0 (popcount k), A1 with carry 1 (popcount k-1).
  // Vertices visited east to west; bit x switches from S input to N output.
  void sweep(int k, int y, int B) {
    const Lists& L = lists(k);
    const double eY = std::exp(f_.Y);
    for (int x = N_ - 1; x >= 0; --x) {
      const double r = d_.alpha(x) * d_.beta(y);
      const double e = std::abs(1 - r * r);
      for (std::uint32_t i : L.empty[x]) {
        double* p = &a0_[std::size_t(i) * B];
        for (int b = 0; b < B; ++b) p[b] *= e;
      }
      for (auto [i0, i1] : L.pairs[x]) {
        double* p = &a0_[std::size_t(i0) * B];
        double* q = &a1_[std::size_t(i1) * B];
        for (int b = 0; b < B; ++b) {
          const double P = p[b], Q = q[b];
          p[b] = P + r * Q;
          q[b] = eY * (r * P + Q);
        }
      }
      for (std::uint32_t i : L.blocked[x]) {
        double* q = &a1_[std::size_t(i) * B];
        for (int b = 0; b < B; ++b) q[b] = 0;
      }
    }
  }

  int N_;
  FundamentalDomain d_;
  FieldPoint f_;
  std::vector<std::uint32_t> rank_;
  std::vector<std::vector<std::uint32_t>> masks_;
  std::vector<Lists> lists_;
  std::vector<double> a0_, a1_, out_;
};

// Rotation by s bits inside N bits.
inline std::uint32_t rotate_mask(std::uint32_t m, int s, int N) {
  const std::uint32_t full = N == 32 ? ~0u : ((1u << N) - 1);
  s %= N;
  if (s == 0) return m;
  return ((m << s) | (m >> (N - s))) & full;
}

struct Orbit {
  std::uint32_t rep;
  int size;
};

inline std::vector<Orbit> translation_orbits(const std::vector<std::uint32_t>& masks, int N, int step) {
  std::vector<Orbit> out;
  for (std::uint32_t m : masks) {
    std::uint32_t best = m;
    int size = 1;
    for (std::uint32_t c = rotate_mask(m, step, N); c != m; c = rotate_mask(c, step, N)) {
      best = std::min(best, c);
      ++size;
    }
    if (best == m) out.push_back({m, size});
  }
  return out;
}

struct SectorBound {
  int n;
  double log_upper;     // log of a rigorous upper bound on the sector trace
  double log_estimate;  // k log(power-iteration eigenvalue)
  double cost;
};

class SectorSolver {
 public:
  SectorSolver(int N, const FundamentalDomain& d, FieldPoint f, const FiniteSizeOptions& o)
      : N_(N), d_(d), o_(o), eng_(N, d, f) {}

  // Bound on Tr(P^k) with P one vertical period and k = N/m2.
  SectorBound bound(int n) {
    const std::size_t D = eng_.dim(n);
    const int k = N_ / d_.m2();
    std::vector<double> v(D, 1.0), w;
    double lam = 0;
    for (int it = 0; it < o_.power_iterations; ++it) {
      w = v;
      period(n, w, 1);
      const double mx = *std::max_element(w.begin(), w.end());
      if (mx <= 0) return {n, -INFINITY, -INFINITY, 0};
      lam = mx / *std::max_element(v.begin(), v.end());
      for (std::size_t i = 0; i < D; ++i) v[i] = w[i] / mx;
    }
    const double delta = 1e-6;
    std::vector<double> vd(D);
    for (std::size_t i = 0; i < D; ++i) vd[i] = v[i] + delta;
    w = vd;
    period(n, w, 1);
    double cw = 0;
    for (std::size_t i = 0; i < D; ++i) cw = std::max(cw, w[i] / vd[i]);
    SectorBound b;
    b.n = n;
    b.log_upper = std::log(double(D)) + k * std::log(cw);
    b.log_estimate = k * std::log(lam);
    const double pairs = double(eng_.dim(n)) + double(eng_.dim(n + 1 <= N_ ? n + 1 : N_));
    b.cost = double(translation_orbits(eng_.masks(n), N_, d_.m1()).size()) * pairs * N_ * N_;
    return b;
  }

  // log Tr over sector n of the full N-row product.
  double log_trace(int n) {
    const auto orbits = translation_orbits(eng_.masks(n), N_, d_.m1());
    const std::size_t D = eng_.dim(n);
    double acc = -INFINITY;
    for (std::size_t start = 0; start < orbits.size(); start += o_.batch) {
      const int B = int(std::min<std::size_t>(o_.batch, orbits.size() - start));
      std::vector<double> V(D * B, 0.0);
      for (int b = 0; b < B; ++b) V[std::size_t(eng_.rank(orbits[start + b].rep)) * B + b] = 1.0;
      std::vector<double> logscale(B, 0.0);
      for (int y = 0; y < N_; ++y) {
        eng_.apply_row(n, y, V, B);
        for (int b = 0; b < B; ++b) {
          double mx = 0;
          for (std::size_t i = 0; i < D; ++i) mx = std::max(mx, V[i * B + b]);
          if (mx > 0) {
            for (std::size_t i = 0; i < D; ++i) V[i * B + b] /= mx;
            logscale[b] += std::log(mx);
          }
        }
      }
      for (int b = 0; b < B; ++b) {
        const double diag = V[std::size_t(eng_.rank(orbits[start + b].rep)) * B + b];
        if (diag > 0) acc = log_add(acc, std::log(double(orbits[start + b].size)) + std::log(diag) + logscale[b]);
      }
    }
    return acc;
  }

  int N() const { return N_; }

 private:
  void period(int n, std::vector<double>& v, int B) {
    for (int y = 0; y < d_.m2(); ++y) eng_.apply_row(n, y, v, B);
  }

  int N_;
  FundamentalDomain d_;
  FiniteSizeOptions o_;
  RowEngine eng_;
};

struct Plan {
  std::vector<SectorBound> bounds;  // sorted by log_upper, descending
  double cost = 0;
};

inline Plan plan_sectors(SectorSolver& S, double tol) {
  Plan p;
  for (int n = 0; n <= S.N(); ++n) p.bounds.push_back(S.bound(n));
  std::sort(p.bounds.begin(), p.bounds.end(),
            [](const SectorBound& a, const SectorBound& b) { return a.log_upper > b.log_upper; });
  // predicted cost, using the eigenvalue estimate for what gets accumulated
  double incl = -INFINITY;
  for (std::size_t i = 0; i < p.bounds.size(); ++i) {
    double rest = -INFINITY;
    for (std::size_t j = i; j < p.bounds.size(); ++j) rest = log_add(rest, p.bounds[j].log_upper);
    if (incl != -INFINITY && rest <= std::log(tol) + incl) break;
    incl = log_add(incl, p.bounds[i].log_estimate);
    p.cost += p.bounds[i].cost;
  }
  return p;
}

inline FiniteSizeResult run_plan(SectorSolver& S, const Plan& p, double tol) {
  FiniteSizeResult res;
  res.N = S.N();
  double incl = -INFINITY;
  std::size_t i = 0;
  for (; i < p.bounds.size(); ++i) {
    double rest = -INFINITY;
    for (std::size_t j = i; j < p.bounds.size(); ++j) rest = log_add(rest, p.bounds[j].log_upper);
    if (incl != -INFINITY && rest <= std::log(tol) + incl) {
      res.log_skipped_bound = rest;
      break;
    }
    if (p.bounds[i].log_upper == -INFINITY) continue;
    incl = log_add(incl, S.log_trace(p.bounds[i].n));
    ++res.sectors_used;
  }
  res.sectors_skipped = int(p.bounds.size() - i);
  res.logZ = incl;
  res.f = incl / (double(S.N()) * S.N());
  return res;
}

}  // namespace detail

inline FiniteSizeResult finite_size_free_energy_detail(int N, const FundamentalDomain& d, FieldPoint f,
                                                       const FiniteSizeOptions& o = {}) {
  if (N <= 0 || N % d.m1() || N % d.m2())
    throw std::invalid_argument("finite_size_free_energy: N must be a positive multiple of m1 and m2");
  detail::SectorSolver direct(N, d, f, o);
  auto plan = detail::plan_sectors(direct, o.tol);
  if (o.auto_direction) {
    // same torus seen with rows and columns exchanged
    detail::SectorSolver flipped(N, reflect_antidiagonal(d), swap_fields(f), o);
    auto plan_t = detail::plan_sectors(flipped, o.tol);
    if (plan_t.cost < plan.cost) {
      auto r = detail::run_plan(flipped, plan_t, o.tol);
      r.transposed = true;
      return r;
    }
  }
  return detail::run_plan(direct, plan, o.tol);
}

inline double finite_size_free_energy(int N, const FundamentalDomain& d, FieldPoint f,
                                      const FiniteSizeOptions& o = {}) {
  return finite_size_free_energy_detail(N, d, f, o).f;
}

}  // namespace fivevertex

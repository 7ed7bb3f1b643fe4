#pragma once
// Surface tension sigma(s,t), free energy F(X,Y) and the coexistence curve.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "conformal.hpp"

namespace fivevertex {

struct SlopePoint {
  double s = 0;
  double t = 0;
};

inline bool in_triangle(SlopePoint p, double tol = 0) {
  return p.s >= -tol && p.t >= -tol && p.s + p.t <= 1 + tol;
}

// Double-sum closed form at the slope (s(u), t(u)).
inline double sigma_at_u(ComplexPoint u, const FundamentalDomain& d) {
  require_upper(u);
  const auto [s, t] = slopes_from_u(u, d);
  double acc = 0;
  for (double a : d.alphas) {
    const ComplexPoint w = u / (u + a * a);
    const double bw = bfunc(w);
    const double lw = std::log(std::abs(w * (1.0 - w)));
    for (double b : d.betas) {
      const ComplexPoint z = 1.0 / (1.0 + b * b * u);
      const double b2 = bfunc((1.0 - w) / z), b3 = bfunc((z + w - 1.0) / w);
      if (d.small()) acc += (1 - s - t) * bw + (1 - s) * b2 + s * b3;
      else acc += (1 - s - t) * (-bw + lw) - (1 - s) * b2 - s * b3;
    }
  }
  return acc / (d.m1() * d.m2());
}

struct ConformalFreeEnergy {
  FieldPoint fields;
  double F = 0;
  double s = 0, t = 0, sigma = 0;
};

inline ConformalFreeEnergy free_energy_conformal(ComplexPoint u, const FundamentalDomain& d) {
  require_upper(u);
  ConformalFreeEnergy r;
  std::tie(r.s, r.t) = slopes_from_u(u, d);
  std::tie(r.fields.X, r.fields.Y) = fields_from_u(u, d);
  r.sigma = sigma_at_u(u, d);
  r.F = -r.sigma + r.s * r.fields.X + r.t * r.fields.Y;
  return r;
}

// ---------------------------------------------------------------- boundary of the triangle

namespace detail {

// max over p in [0,1]^m with mean p = s of -(1/m) sum (1 - p_i) L_i:
// occupy the most negative L first.
inline double greedy_edge(std::vector<double> L, double s) {
  const int m = int(L.size());
  std::sort(L.begin(), L.end());
  double budget = s * m, acc = 0;
  for (double l : L) {
    const double p = std::clamp(budget, 0.0, 1.0);
    budget -= p;
    acc += (1 - p) * l;
  }
  return -acc / m;
}

inline std::vector<double> column_logs(const FundamentalDomain& d) {
  std::vector<double> L;
  for (double a : d.alphas) {
    double acc = 0;
    for (double b : d.betas) acc += std::log(std::abs(1 - a * a * b * b));
    L.push_back(acc / d.m2());
  }
  return L;
}

inline double mean_log_r(const FundamentalDomain& d) {
  double acc = 0;
  for (double a : d.alphas) acc += std::log(a) / d.m1();
  for (double b : d.betas) acc += std::log(b) / d.m2();
  return acc;
}

}  // namespace detail

inline double mean_log_empty(const FundamentalDomain& d) {
  double acc = 0;
  for (double a : d.alphas)
    for (double b : d.betas) acc += std::log(std::abs(1 - a * a * b * b));
  return acc / (d.m1() * d.m2());
}

// sigma on the boundary of the triangle (combinatorial: straight paths on the
// two axes, densest packing on the hypotenuse).
inline double boundary_sigma(SlopePoint p, const FundamentalDomain& d) {
  constexpr double eps = 1e-15;
  if (p.t <= eps) return detail::greedy_edge(detail::column_logs(d), std::clamp(p.s, 0.0, 1.0));
  if (p.s <= eps) return detail::greedy_edge(detail::column_logs(transpose(d)), std::clamp(p.t, 0.0, 1.0));
  if (d.small()) return 0.0;
  const double s = std::clamp(p.s, 0.0, 1.0);
  return -2.0 * std::min(s, 1.0 - s) * detail::mean_log_r(d);
}

inline bool on_triangle_boundary(SlopePoint p, double tol = 1e-15) {
  return p.s <= tol || p.t <= tol || p.s + p.t >= 1 - tol;
}

inline double surface_tension(SlopePoint p, const FundamentalDomain& d, const SlopeInverter* inv = nullptr) {
  if (!in_triangle(p, 1e-15)) throw domain_error("surface_tension: slope outside the triangle");
  if (on_triangle_boundary(p)) return boundary_sigma(p, d);
  if (in_coexistence(p.s, p.t, d)) return 0.0;
  const InversionResult r = inv ? inv->invert(p.s, p.t) : u_from_slopes(p.s, p.t, d);
  return sigma_at_u(r.u, d);
}

// Slopes where a frozen or semi-frozen phase can sit: triangle corners,
// (i/m1, 0), (0, j/m2), and (1/2, 1/2) for large r.
inline std::vector<SlopePoint> frozen_candidates(const FundamentalDomain& d) {
  std::vector<SlopePoint> c{{0, 0}, {1, 0}, {0, 1}};
  for (int i = 1; i < d.m1(); ++i) c.push_back({double(i) / d.m1(), 0});
  for (int j = 1; j < d.m2(); ++j) c.push_back({0, double(j) / d.m2()});
  if (!d.small()) c.push_back({0.5, 0.5});
  return c;
}

// ---------------------------------------------------------------- Legendre transform

enum class Phase { Disordered, Frozen, Boundary };

inline const char* phase_name(Phase p) {
  return p == Phase::Disordered ? "disordered" : p == Phase::Frozen ? "frozen" : "boundary";
}

struct LegendreResult {
  double F = 0;
  Phase phase = Phase::Frozen;
  SlopePoint slope;           // maximizing slope
  ComplexPoint u{0, 0};       // preimage when disordered
  double runner_up = -1e300;  // best competing candidate value
};

// F(X,Y) = max_p (-sigma(p) + sX + tY). The interior stationary point comes
// from inverting u -> (X,Y); the boundary maximum is attained at a candidate
// because sigma is piecewise linear there.
inline LegendreResult solve_legendre(FieldPoint f, const FundamentalDomain& d, const FieldInverter& inv) {
  LegendreResult best;
  double second = -1e300;
  best.F = -1e300;
  for (auto p : frozen_candidates(d)) {
    const double v = -boundary_sigma(p, d) + p.s * f.X + p.t * f.Y;
    if (v > best.F) second = best.F, best.F = v, best.slope = p;
    else second = std::max(second, v);
  }
  best.phase = Phase::Frozen;
  ComplexPoint u;
  if (inv.invert(f, u)) {
    const auto c = free_energy_conformal(u, d);
    if (c.F >= best.F - 1e-12) {
      second = best.F;
      best.F = std::max(c.F, best.F);
      best.slope = {c.s, c.t};
      best.u = u;
      best.phase = Phase::Disordered;
      if (u.imag() < 1e-9 * std::max(1.0, std::abs(u))) best.phase = Phase::Boundary;
    }
  }
  best.runner_up = second;
  if (best.phase == Phase::Frozen && best.F - second <= 1e-9 * std::max(1.0, std::abs(best.F)))
    best.phase = Phase::Boundary;
  return best;
}

inline double free_energy(FieldPoint f, const FundamentalDomain& d) {
  return solve_legendre(f, d, FieldInverter(d)).F;
}

// ---------------------------------------------------------------- coexistence

inline SlopePoint coexistence_boundary(const FundamentalDomain& d, double R) {
  if (!d.small()) throw regime_error("coexistence_boundary: large r has no coexistence phase");
  if (!(R > 0)) throw std::invalid_argument("coexistence_boundary: R must be positive");
  auto [s, t] = coexistence_point(d, R);
  return {s, t};
}

// ---------------------------------------------------------------- Hessian checks

struct Hessian {
  double ss = 0, st = 0, tt = 0;
  double det() const { return ss * tt - st * st; }
};

// Largest g <= cap with the 3x3 stencil of half-width g inside the pure phase.
inline double stencil_room(double s0, double t0, const FundamentalDomain& d, double cap = 0.05) {
  auto fits = [&](double g) {
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j)
        if (!in_pure_phase(s0 + i * g, t0 + j * g, d)) return false;
    return true;
  };
  if (fits(cap)) return cap;
  double lo = 0, hi = cap;
  for (int it = 0; it < 40; ++it) (fits(0.5 * (lo + hi)) ? lo : hi) = 0.5 * (lo + hi);
  return lo;
}

// Second central differences of sigma around (s(u), t(u)), steps h and h/2
// combined by one Richardson level. h <= 0 picks the step from the distance
// to the edge of the pure phase: sigma is not smooth across it.
inline Hessian sigma_hessian(ComplexPoint u, const FundamentalDomain& d, double h = 0) {
  require_upper(u);
  const auto [s0, t0] = slopes_from_u(u, d);
  if (h <= 0) h = std::clamp(stencil_room(s0, t0, d) / 20, 2e-6, 1e-4);
  const SlopeInverter inv(d);
  auto xi0 = detail::xi_of(u);
  auto sig = [&](double s, double t) {
    if (!in_pure_phase(s, t, d)) throw stencil_error("hessian: stencil leaves the pure phase");
    double rho = xi0.first, q = xi0.second;
    if (!inv.refine(s, t, rho, q)) return surface_tension({s, t}, d, &inv);
    return sigma_at_u(detail::u_of(rho, q), d);
  };
  const double c = sig(s0, t0);
  auto at = [&](double k) {
    Hessian H;
    H.ss = (sig(s0 + k, t0) - 2 * c + sig(s0 - k, t0)) / (k * k);
    H.tt = (sig(s0, t0 + k) - 2 * c + sig(s0, t0 - k)) / (k * k);
    H.st = (sig(s0 + k, t0 + k) - sig(s0 + k, t0 - k) - sig(s0 - k, t0 + k) + sig(s0 - k, t0 - k)) / (4 * k * k);
    return H;
  };
  const Hessian a = at(h), b = at(h / 2);
  return {(4 * b.ss - a.ss) / 3, (4 * b.st - a.st) / 3, (4 * b.tt - a.tt) / 3};
}

// |sqrt(det H) - theta^2/pi| / (theta^2/pi)
inline double hessian_identity(ComplexPoint u, const FundamentalDomain& d, double h = 0) {
  const Hessian H = sigma_hessian(u, d, h);
  const double th = theta_of(u, d.regime);
  const double k = th * th / kPi;
  return std::abs(std::sqrt(std::max(0.0, H.det())) - k) / k;
}

// Pull the Hessian back to (Re u, Im u): J^T H J should be a multiple of the
// identity. Returns the relative gap between its two eigenvalues.
inline double intrinsic_anisotropy(ComplexPoint u, const FundamentalDomain& d, double h = 0) {
  const Hessian H = sigma_hessian(u, d, h);
  const Derivatives D = derivatives(u, d);
  // s_x = 2 Re s_u, s_y = -2 Im s_u
  const double sx = 2 * D.s_u.real(), sy = -2 * D.s_u.imag();
  const double tx = 2 * D.t_u.real(), ty = -2 * D.t_u.imag();
  const double a = sx * (H.ss * sx + H.st * tx) + tx * (H.st * sx + H.tt * tx);
  const double b = sx * (H.ss * sy + H.st * ty) + tx * (H.st * sy + H.tt * ty);
  const double c = sy * (H.ss * sy + H.st * ty) + ty * (H.st * sy + H.tt * ty);
  const double mean = 0.5 * (a + c), rad = std::hypot(0.5 * (a - c), b);
  return 2 * rad / (std::abs(mean) + rad);
}

}  // namespace fivevertex

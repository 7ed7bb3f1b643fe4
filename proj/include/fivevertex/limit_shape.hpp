#pragma once
// Limit shapes from harmonic boundary data G on the real u axis. The surface
// is the envelope of the planes h = s(u) x + t(u) y + G(u)/theta(u); the
// envelope condition s_u x + t_u y + (G/theta)_u = 0 is one complex equation
// giving (x,y) at each u.

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "phase_diagram.hpp"

namespace fivevertex {

// G(u) = c0 + sum_k c_k arg(u - p_k): piecewise constant on the real axis,
// jumping by -pi c_k when u crosses p_k left to right.
struct HarmonicBoundaryData {
  double c0 = 0;
  std::vector<double> breakpoints;
  std::vector<double> coeffs;
  std::string tag;

  // values: v[0] on (-inf, p_1), v[k] on (p_k, p_{k+1}), v[K] on (p_K, inf)
  static HarmonicBoundaryData from_steps(const std::vector<double>& p, const std::vector<double>& v) {
    if (v.size() != p.size() + 1) throw std::invalid_argument("from_steps: need one more value than breakpoints");
    if (!std::is_sorted(p.begin(), p.end())) throw std::invalid_argument("from_steps: breakpoints must be sorted");
    HarmonicBoundaryData g;
    g.c0 = v.back();
    g.breakpoints = p;
    for (std::size_t k = 0; k < p.size(); ++k) g.coeffs.push_back((v[k] - v[k + 1]) / kPi);
    return g;
  }

  double operator()(ComplexPoint u) const {
    double g = c0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) g += coeffs[k] * std::arg(u - breakpoints[k]);
    return g;
  }

  // holomorphic derivative: d/du arg(u - p) = 1/(2i(u - p))
  ComplexPoint derivative(ComplexPoint u) const {
    ComplexPoint g = 0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) g += coeffs[k] / (2.0 * kI * (u - breakpoints[k]));
    return g;
  }

  // boundary value on the real axis away from breakpoints
  double on_axis(double x) const {
    double g = c0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) g += coeffs[k] * (x < breakpoints[k] ? kPi : 0.0);
    return g;
  }
};

enum class BuiltinG { SemiBoxedLargeR, SemiBoxedSmallR };

inline BuiltinG builtin_from_name(const std::string& n) {
  if (n == "semi_boxed_large_r") return BuiltinG::SemiBoxedLargeR;
  if (n == "semi_boxed_small_r") return BuiltinG::SemiBoxedSmallR;
  throw parameter_error("unknown example '" + n + "'");
}

// Admissible a for the small-r semi-boxed shape: the liquid region stays in
// {x < 1, y > 0} exactly when -1/beta_max^2 < a < -alpha_max^2.
inline std::pair<double, double> small_r_a_range(const FundamentalDomain& d) {
  const double amax = *std::max_element(d.alphas.begin(), d.alphas.end());
  const double bmax = *std::max_element(d.betas.begin(), d.betas.end());
  return {-1.0 / (bmax * bmax), -amax * amax};
}

inline HarmonicBoundaryData builtin_G(BuiltinG which, const FundamentalDomain& d, std::optional<double> a = {}) {
  HarmonicBoundaryData g;
  if (which == BuiltinG::SemiBoxedLargeR) {
    if (d.small()) throw regime_error("semi_boxed_large_r needs a large-r domain");
    // -pi on u > 0, 0 on u < 0
    g = HarmonicBoundaryData::from_steps({0.0}, {0.0, -kPi});
    g.tag = "semi_boxed_large_r";
    return g;
  }
  if (!d.small()) throw regime_error("semi_boxed_small_r needs a small-r domain");
  const auto [lo, hi] = small_r_a_range(d);
  const double av = a.value_or(0.5 * (lo + hi));
  if (!(av > lo && av < hi))
    throw parameter_error("semi_boxed_small_r: a must lie in (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
  // G = (1/m1) sum_i arg(u + alpha_i^2) - arg(u - a)
  std::vector<std::pair<double, double>> terms{{av, -1.0}};
  for (double al : d.alphas) terms.push_back({-al * al, 1.0 / d.m1()});
  std::sort(terms.begin(), terms.end());
  for (auto [p, c] : terms) {
    if (!g.breakpoints.empty() && g.breakpoints.back() == p) {
      g.coeffs.back() += c;
      continue;
    }
    g.breakpoints.push_back(p);
    g.coeffs.push_back(c);
  }
  g.tag = "semi_boxed_small_r";
  return g;
}

struct EnvelopePoint {
  ComplexPoint u;
  double x = 0, y = 0, h = 0, s = 0, t = 0;
};

inline EnvelopePoint envelope_point(ComplexPoint u, const HarmonicBoundaryData& G, const FundamentalDomain& d) {
  require_upper(u);
  const Derivatives D = derivatives(u, d);
  const double g = G(u);
  const ComplexPoint gq_u = (G.derivative(u) - g / D.theta * D.th_u) / D.theta;  // (G/theta)_u
  const double a11 = D.s_u.real(), a12 = D.t_u.real(), a21 = D.s_u.imag(), a22 = D.t_u.imag();
  const double det = a11 * a22 - a12 * a21;
  const double scale = std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
  if (!(std::abs(det) > 1e-12 * scale * scale)) throw critical_point_error("envelope_point: degenerate system");
  EnvelopePoint e;
  e.u = u;
  e.s = D.s, e.t = D.t;
  e.x = (-gq_u.real() * a22 + gq_u.imag() * a12) / det;
  e.y = (-a11 * gq_u.imag() + a21 * gq_u.real()) / det;
  e.h = e.s * e.x + e.t * e.y + g / D.theta;
  return e;
}

// ---------------------------------------------------------------- frozen boundary

struct FrozenPoint {
  double u_re = 0;
  double x = 0, y = 0;
  int flag = 0;  // 0 ok, 1 gap (breakpoint of G or pinch point), 2 limit not resolved in double precision
};

inline std::vector<double> special_points(const HarmonicBoundaryData& G, const FundamentalDomain& d) {
  std::set<double> s;
  for (double p : pinch_points(d)) s.insert(p);
  for (double p : G.breakpoints) s.insert(p);
  return {s.begin(), s.end()};
}

// Real-axis limit of the envelope at x0 from u = x0 + i e, e relative to the
// distance to the nearest special point. The system degenerates as e -> 0, so
// the limit is extrapolated (Richardson in e, e/2) at two scales of e and
// flagged when the two disagree.
inline FrozenPoint frozen_point(double x0, const HarmonicBoundaryData& G, const FundamentalDomain& d,
                                double rel_eps = 1e-3) {
  FrozenPoint f;
  f.u_re = x0;
  double dist = std::max(1.0, std::abs(x0));
  for (double p : special_points(G, d)) dist = std::min(dist, std::abs(x0 - p));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (dist < 1e-12 * std::max(1.0, std::abs(x0))) {
    f.flag = 1;
    f.x = f.y = nan;
    return f;
  }
  auto limit = [&](double e) {
    const EnvelopePoint a = envelope_point({x0, e}, G, d), b = envelope_point({x0, e / 2}, G, d);
    return std::pair<double, double>{2 * b.x - a.x, 2 * b.y - a.y};
  };
  try {
    const auto c = limit(rel_eps * dist), r = limit(10 * rel_eps * dist);
    f.x = c.first, f.y = c.second;
    const double gap = std::hypot(c.first - r.first, c.second - r.second);
    if (!(gap <= 1e-3 * (1 + std::hypot(c.first, c.second)))) f.flag = 2;
  } catch (const critical_point_error&) {
    f.flag = 1;
    f.x = f.y = nan;
  }
  return f;
}

inline std::vector<FrozenPoint> frozen_boundary(const HarmonicBoundaryData& G, const FundamentalDomain& d,
                                                int n_samples = 2000) {
  std::set<double> acc;
  for (double p : special_points(G, d)) acc.insert(p);
  std::vector<double> bp(acc.begin(), acc.end());
  const int per = std::max(8, n_samples / int(bp.size() + 1));
  std::vector<double> xs;
  auto tail = [&](double p, double sign) {
    for (int k = 1; k <= per; ++k) {
      const double e = std::exp(std::log(1e-7) + (std::log(1e7) - std::log(1e-7)) * k / (per + 1));
      xs.push_back(p + sign * e * std::max(1.0, std::abs(p)));
    }
  };
  tail(bp.front(), -1.0);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double a = bp[i], b = bp[i + 1], half = 0.5 * (b - a);
    for (int k = 1; k < per; ++k) {
      const double f = double(k) / per;
      xs.push_back(f < 0.5 ? a + std::pow(1e-7, 1 - 2 * f) * half : b - std::pow(1e-7, 2 * f - 1) * half);
    }
    xs.push_back(0.5 * (a + b));
  }
  tail(bp.back(), 1.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<FrozenPoint> out;
  for (double x : xs) out.push_back(frozen_point(x, G, d));
  return out;
}

// ---------------------------------------------------------------- mesh

struct MeshSpec {
  int n_radial = 60;
  int n_angular = 60;
  double r_min = 1e-3;
  double r_max = 1e3;
};

struct MeshPoint {
  EnvelopePoint p;
  int flag = 0;  // 0 ok, 1 degenerate system, 2 non-finite
};

inline std::vector<MeshPoint> limit_shape_mesh(const HarmonicBoundaryData& G, const FundamentalDomain& d,
                                               const MeshSpec& spec) {
  std::vector<MeshPoint> out;
  for (int i = 0; i < spec.n_radial; ++i) {
    const double rho = std::exp(std::log(spec.r_min) +
                                (std::log(spec.r_max) - std::log(spec.r_min)) * i / std::max(1, spec.n_radial - 1));
    for (int j = 0; j < spec.n_angular; ++j) {
      const double phi = kPi * (j + 0.5) / spec.n_angular;
      MeshPoint m;
      m.p.u = std::polar(rho, phi);
      try {
        m.p = envelope_point(m.p.u, G, d);
        if (!std::isfinite(m.p.x) || !std::isfinite(m.p.y) || !std::isfinite(m.p.h)) m.flag = 2;
      } catch (const critical_point_error&) {
        m.flag = 1;
      }
      out.push_back(m);
    }
  }
  return out;
}

}  // namespace fivevertex

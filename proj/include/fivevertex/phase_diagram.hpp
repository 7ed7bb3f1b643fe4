#pragma once
// Amoeba boundary in the (X,Y) plane (image of the real u axis) and phase
// classification of a field point.

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "thermodynamics.hpp"

namespace fivevertex {

inline constexpr double kFieldCap = 30.0;

// branch_flag: 0 regular sample, 1 beyond the field cap (clipped),
// 2 on a tentacle asymptote (within 1e-3 relative of a divergent pinch point)
struct AmoebaPoint {
  ComplexPoint u;
  double X = 0, Y = 0;
  int branch_flag = 0;
};

// Points where the image of the real axis runs off to infinity.
inline std::vector<double> pinch_points(const FundamentalDomain& d) {
  std::set<double> p{0.0};
  for (double a : d.alphas) p.insert(-a * a);
  for (double b : d.betas) p.insert(-1.0 / (b * b));
  return {p.begin(), p.end()};
}

// A cover of the real line, log-spaced toward every accumulation point:
// the pinch points, their mirrors, and +-infinity.
inline std::vector<double> real_axis_cover(const FundamentalDomain& d, int n_samples, double far = 1e6) {
  std::set<double> acc;
  for (double p : pinch_points(d)) acc.insert(p), acc.insert(-p);
  std::vector<double> bp(acc.begin(), acc.end());
  const int gaps = int(bp.size()) + 1;
  const int per = std::max(4, n_samples / gaps);
  std::vector<double> xs;
  auto tail = [&](double p, double sign) {
    // from p outward to sign*far, accumulating at p and at infinity
    for (int k = 1; k <= per; ++k) {
      const double e = std::exp(std::log(1e-6) + (std::log(far) - std::log(1e-6)) * k / (per + 1));
      xs.push_back(p + sign * e * std::max(1.0, std::abs(p)));
    }
  };
  tail(bp.front(), -1.0);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double a = bp[i], b = bp[i + 1], half = 0.5 * (b - a);
    // geometric in the distance to the nearer endpoint
    for (int k = 0; k < per; ++k) {
      const double f = double(k) / per;  // 0..1 across the gap
      const double g = f < 0.5 ? std::pow(1e-6, 1 - 2 * f) * half : half;
      xs.push_back(f < 0.5 ? a + g : b - std::pow(1e-6, 2 * f - 1) * half);
    }
    xs.push_back(0.5 * (a + b));
  }
  tail(bp.back(), 1.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

// A tentacle is a pair of parallel asymptotes of the boundary, produced by an
// accumulation point of the real axis where X,Y diverge logarithmically.
struct Tentacle {
  double where = 0;  // pinch point on the real u axis; +inf for the far end
  double dir_X = 0, dir_Y = 0;
};

inline std::vector<Tentacle> tentacles(const FundamentalDomain& d) {
  auto probe = [&](double x) {
    const double dist = std::max(1e-300, std::abs(x));
    auto [X, Y] = fields_from_u({x, 1e-3 * dist}, d);
    return std::pair<double, double>{X, Y};
  };
  std::vector<Tentacle> out;
  std::vector<double> spots = pinch_points(d);
  spots.push_back(std::numeric_limits<double>::infinity());
  for (double p : spots) {
    double grow = 1e300;
    std::pair<double, double> far{0, 0};
    for (double side : {-1.0, 1.0}) {
      auto at = [&](double delta) {
        if (std::isinf(p)) return probe(side / delta);
        const double sc = std::max(1.0, std::abs(p)) * delta;
        auto [X, Y] = fields_from_u({p + side * sc, 1e-3 * sc}, d);
        return std::pair<double, double>{X, Y};
      };
      const auto a = at(1e-4), b = at(1e-10);
      grow = std::min(grow, std::hypot(b.first, b.second) - std::hypot(a.first, a.second));
      far.first += b.first - a.first;
      far.second += b.second - a.second;
    }
    // logarithmic divergence gains about 7 per six decades; bounded limits gain ~0
    if (grow > 3.0) {
      const double n = std::hypot(far.first, far.second);
      out.push_back({p, far.first / n, far.second / n});
    }
  }
  return out;
}

inline AmoebaPoint clip_to_cap(AmoebaPoint p) {
  const double m = std::max(std::abs(p.X), std::abs(p.Y));
  if (m > kFieldCap || !std::isfinite(m)) {
    p.branch_flag = 1;
    if (std::isfinite(m)) p.X *= kFieldCap / m, p.Y *= kFieldCap / m;
    else p.X = std::clamp(p.X, -kFieldCap, kFieldCap), p.Y = std::clamp(p.Y, -kFieldCap, kFieldCap);
  }
  return p;
}

// Fields along u = x + i e and x + i e/10, extrapolated linearly to e = 0.
// e = epsilon times the distance from x to the nearest pinch point (at most
// max(1,|x|)), so the offset stays small on the scale where X,Y vary.
inline std::vector<AmoebaPoint> amoeba_boundary(const FundamentalDomain& d, double epsilon, int n_samples) {
  if (!(epsilon > 0 && epsilon <= 0.1)) throw std::invalid_argument("amoeba_boundary: epsilon must be in (0, 0.1]");
  if (n_samples < 100) throw std::invalid_argument("amoeba_boundary: need at least 100 samples");
  const auto pins = pinch_points(d);
  const auto tent = tentacles(d);
  std::vector<AmoebaPoint> out;
  for (double x : real_axis_cover(d, n_samples)) {
    double dist = std::max(1.0, std::abs(x));
    for (double p : pins) dist = std::min(dist, std::abs(x - p));
    if (dist < 1e-9) continue;
    const double e1 = epsilon * dist, e2 = e1 / 10;
    auto [X1, Y1] = fields_from_u({x, e1}, d);
    auto [X2, Y2] = fields_from_u({x, e2}, d);
    AmoebaPoint p;
    p.u = {x, 0.0};
    p.X = X2 - (X1 - X2) / 9.0;
    p.Y = Y2 - (Y1 - Y2) / 9.0;
    for (const auto& tn : tent) {
      const bool near = std::isinf(tn.where) ? std::abs(x) > 1e3 : std::abs(x - tn.where) < 1e-3 * std::max(1.0, std::abs(tn.where));
      if (near) p.branch_flag = 2;
    }
    out.push_back(clip_to_cap(p));
  }
  return out;
}

// distinct alpha^2, distinct beta^-2, and for large r the two asymptotes
// from u -> 0 and u -> inf (small r: those limits are the single point X=Y=0).
inline int expected_tentacles(const FundamentalDomain& d) {
  std::set<double> a, b;
  for (double x : d.alphas) a.insert(x * x);
  for (double y : d.betas) b.insert(1.0 / (y * y));
  return int(a.size() + b.size()) + (d.small() ? 0 : 2);
}

struct PhaseResult {
  Phase phase = Phase::Frozen;
  SlopePoint slope;
  ComplexPoint u{0, 0};
  double F = 0;
};

inline PhaseResult classify_phase(FieldPoint f, const FundamentalDomain& d, const FieldInverter& inv) {
  const LegendreResult r = solve_legendre(f, d, inv);
  return {r.phase, r.slope, r.u, r.F};
}

inline PhaseResult classify_phase(FieldPoint f, const FundamentalDomain& d) {
  return classify_phase(f, d, FieldInverter(d));
}

}  // namespace fivevertex

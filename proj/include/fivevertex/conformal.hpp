#pragma once
// Spectral curve 1 - z - w + (1 - r^2) z w = 0 and the global coordinate u in
// the upper half plane: w_i = u/(u + alpha_i^2), z_j = 1/(1 + beta_j^2 u).
// Maps u to slopes (s,t) and fields (X,Y), and back from slopes.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "special_functions.hpp"

namespace fivevertex {

inline constexpr double kPi = std::numbers::pi;
inline constexpr ComplexPoint kI{0.0, 1.0};

inline ComplexPoint solve_spectral(ComplexPoint w, double r) {
  if (!(r > 0) || r == 1.0) throw std::invalid_argument("solve_spectral: r must be positive and != 1");
  const ComplexPoint den = 1.0 - (1.0 - r * r) * w;
  if (std::abs(den) == 0.0) throw singular_argument_error("solve_spectral: pole 1 - (1-r^2) w = 0");
  return (1.0 - w) / den;
}

inline ComplexPoint spectral_residual(ComplexPoint z, ComplexPoint w, double r) {
  return 1.0 - z - w + (1.0 - r * r) * z * w;
}

struct ConformalState {
  ComplexPoint u;
  std::vector<ComplexPoint> w;
  std::vector<ComplexPoint> z;
  double theta = 0;
  double s = 0, t = 0;
  double X = 0, Y = 0;
};

inline void require_upper(ComplexPoint u) {
  if (!(u.imag() > 0) || !std::isfinite(u.real()) || !std::isfinite(u.imag()))
    throw domain_error("u must lie in the open upper half plane");
}

inline double theta_of(ComplexPoint u, Regime reg) {
  const double a = std::arg(u);
  return reg == Regime::SmallR ? a : 2 * kPi - a;
}

// slopes only; the hot path of every inversion
inline std::pair<double, double> slopes_from_u(ComplexPoint u, const FundamentalDomain& d) {
  const double au = std::arg(u);
  double ss = 0, tt = 0;
  for (double a : d.alphas) ss += au - std::arg(u + a * a);           // arg w_i
  for (double b : d.betas) tt += std::arg(1.0 + b * b * u);           // arg(1/z_j)
  ss /= d.m1();
  tt /= d.m2();
  if (d.small()) return {ss / au, tt / au};
  const double th = 2 * kPi - au;
  return {(kPi - ss) / th, (kPi - tt) / th};
}

inline std::pair<double, double> fields_from_u(ComplexPoint u, const FundamentalDomain& d) {
  double X = 0, Y = 0;
  for (double b : d.betas) {
    const ComplexPoint z = 1.0 / (1.0 + b * b * u);
    X += d.small() ? -bfunc(std::conj(z)) : bfunc(std::conj(z)) - std::log(std::abs(z * (1.0 - z)));
  }
  for (double a : d.alphas) {
    const ComplexPoint w = u / (u + a * a);
    Y += d.small() ? -bfunc(w) : bfunc(w) - std::log(std::abs(w * (1.0 - w)));
  }
  return {X / d.m2(), Y / d.m1()};
}

inline ConformalState coords_from_u(ComplexPoint u, const FundamentalDomain& d) {
  require_upper(u);
  ConformalState c;
  c.u = u;
  for (double a : d.alphas) c.w.push_back(u / (u + a * a));
  for (double b : d.betas) c.z.push_back(1.0 / (1.0 + b * b * u));
  c.theta = theta_of(u, d.regime);
  std::tie(c.s, c.t) = slopes_from_u(u, d);
  std::tie(c.X, c.Y) = fields_from_u(u, d);
  return c;
}

// Holomorphic (Wirtinger) derivatives at u.
//   (s theta)_u, (t theta)_u, theta_u are exact; s_u = ((s theta)_u - s theta_u)/theta.
//   Y_u = i k theta^2/pi s_u and X_u = -i k theta^2/pi t_u with k = -1 for
//   small r (u -> (s,t) keeps orientation) and k = +1 for large r.
struct Derivatives {
  double theta, s, t;
  ComplexPoint sth_u, tth_u, th_u;
  ComplexPoint s_u, t_u, X_u, Y_u;
};

inline Derivatives derivatives(ComplexPoint u, const FundamentalDomain& d) {
  Derivatives D{};
  D.theta = theta_of(u, d.regime);
  std::tie(D.s, D.t) = slopes_from_u(u, d);
  ComplexPoint m = 0, b = 0;
  double am = 0;
  for (double al : d.alphas) m += 1.0 / (u + al * al), am += std::arg(u + al * al);
  for (double be : d.betas) b += 1.0 / (u + 1.0 / (be * be));
  m /= double(d.m1());
  am /= d.m1();
  const double sign = d.small() ? 1.0 : -1.0;
  D.sth_u = sign * (1.0 / u - m) / (2.0 * kI);
  D.tth_u = sign * b / (2.0 * kI * double(d.m2()));
  D.th_u = sign / (2.0 * kI * u);
  // 1 - s taken from the args directly: near u = 0 both terms of sth_u - s th_u are ~1/u
  const double one_minus_s = (d.small() ? am : kPi - am) / D.theta;
  D.s_u = sign * (one_minus_s / u - m) / (2.0 * kI) / D.theta;
  D.t_u = (D.tth_u - D.t * D.th_u) / D.theta;
  const double k = (d.small() ? -1.0 : 1.0) * D.theta * D.theta / kPi;
  D.X_u = -kI * k * D.t_u;
  D.Y_u = kI * k * D.s_u;
  return D;
}

// ---------------------------------------------------------------- coexistence

// Small r: the limit of (s,t) along u = R + i0, R > 0.
inline std::pair<double, double> coexistence_point(const FundamentalDomain& d, double R) {
  double s = 0, t = 0;
  for (double a : d.alphas) s += a * a / (R + a * a);
  for (double b : d.betas) t += b * b * R / (1.0 + b * b * R);
  return {s / d.m1(), t / d.m2()};
}

// R with coexistence s(R) = s, for s in (0,1). s(R) is strictly decreasing.
inline double coexistence_R(const FundamentalDomain& d, double s) {
  double lo = -60, hi = 60;  // log R
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (coexistence_point(d, std::exp(mid)).first > s) lo = mid;
    else hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

inline bool strictly_inside_triangle(double s, double t) { return s > 0 && t > 0 && s + t < 1; }

// Small r only: true when (s,t) lies on or above the coexistence curve.
inline bool in_coexistence(double s, double t, const FundamentalDomain& d) {
  if (!d.small()) return false;
  if (s <= 0 || s >= 1) return s + t >= 1;
  const double R = coexistence_R(d, s);
  return t >= coexistence_point(d, R).second;
}

inline bool in_pure_phase(double s, double t, const FundamentalDomain& d) {
  return strictly_inside_triangle(s, t) && !in_coexistence(s, t, d);
}

// ---------------------------------------------------------------- inversion

namespace detail {

// u = exp(rho + i pi sigmoid(q))
inline double sigmoid(double q) { return 1.0 / (1.0 + std::exp(-q)); }
inline ComplexPoint u_of(double rho, double q) { return std::polar(std::exp(rho), kPi * sigmoid(q)); }
inline std::pair<double, double> xi_of(ComplexPoint u) {
  const double p = std::arg(u) / kPi;
  return {std::log(std::abs(u)), std::log(p / (1.0 - p))};
}

// Newton on a map u -> (f,g) given its Wirtinger derivatives.
template <class Eval>
bool newton_xi(Eval&& eval, double& rho, double& q, double target_f, double target_g, double tol, int max_it,
               int* iters, bool quit_on_creep = false) {
  auto value = [&](double r_, double q_, double& f, double& g, ComplexPoint& fu, ComplexPoint& gu) {
    return eval(u_of(r_, q_), f, g, fu, gu);
  };
  double f, g;
  ComplexPoint fu, gu;
  if (!value(rho, q, f, g, fu, gu)) return false;
  double res = std::hypot(f - target_f, g - target_g);
  double res_mark = res;
  for (int it = 0; it < max_it; ++it) {
    if (iters) *iters = it;
    if (res < tol) return true;
    // creeping toward the edge of the image: target likely has no preimage
    if (quit_on_creep && it > 0 && it % 10 == 0) {
      if (res > 0.9 * res_mark && res > 1e-6) return false;
      res_mark = res;
    }
    const ComplexPoint u = u_of(rho, q);
    const double sg = sigmoid(q);
    const ComplexPoint du_dq = kI * u * (kPi * sg * (1 - sg));
    const double a11 = 2 * (fu * u).real(), a12 = 2 * (fu * du_dq).real();
    const double a21 = 2 * (gu * u).real(), a22 = 2 * (gu * du_dq).real();
    const double det = a11 * a22 - a12 * a21;
    if (!std::isfinite(det) || det == 0) return false;
    const double r1 = target_f - f, r2 = target_g - g;
    double dr = (a22 * r1 - a12 * r2) / det;
    double dq = (-a21 * r1 + a11 * r2) / det;
    const double cap = 2.0;  // keep steps inside the trust region of the log chart
    const double big = std::max(std::abs(dr), std::abs(dq));
    if (big > cap) {
      dr *= cap / big;
      dq *= cap / big;
    }
    double lam = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k, lam *= 0.5) {
      double f2, g2;
      ComplexPoint fu2, gu2;
      const double rn = rho + lam * dr, qn = q + lam * dq;
      if (!value(rn, qn, f2, g2, fu2, gu2)) continue;
      const double r2n = std::hypot(f2 - target_f, g2 - target_g);
      if (r2n < res) {
        rho = rn, q = qn, f = f2, g = g2, fu = fu2, gu = gu2, res = r2n;
        moved = true;
        break;
      }
    }
    // stalled: accept when the residual is at the rounding floor of u near a pinch point
    if (!moved) return res < std::max(tol * 100, 1e-9);
  }
  return res < tol * 100;
}

}  // namespace detail

struct InversionResult {
  ComplexPoint u;
  int iterations = 0;
  bool large_u = false;  // |u| beyond 1e6: slope sits next to a degenerate limit
};

// Slope inverter with a precomputed 64x64 seed grid in (log|u|, logit(arg u / pi)).
class SlopeInverter {
 public:
  static constexpr int kGrid = 64;

  explicit SlopeInverter(const FundamentalDomain& d) : d_(d) {
    for (int i = 0; i < kGrid; ++i)
      for (int j = 0; j < kGrid; ++j) {
        const double rho = -14.0 + 28.0 * i / (kGrid - 1);
        const double q = -20.0 + 40.0 * j / (kGrid - 1);
        auto [s, t] = slopes_from_u(detail::u_of(rho, q), d_);
        seeds_.push_back({rho, q, s, t});
      }
  }

  const FundamentalDomain& domain() const { return d_; }

  InversionResult invert(double s, double t) const {
    if (!in_pure_phase(s, t, d_)) throw out_of_phase_error("u_from_slopes: target slope outside the pure phase");
    const Seed* best = &seeds_[0];
    double bd = 1e300;
    for (const auto& sd : seeds_) {
      const double dd = std::hypot(sd.s - s, sd.t - t);
      if (dd < bd) bd = dd, best = &sd;
    }
    std::vector<std::pair<double, double>> starts{{best->rho, best->q}};
    // fallback starts in case the nearest seed sits in a bad basin
    for (int k = 0; k < 8; ++k) starts.push_back({-6.0 + 1.5 * k, 0.0});
    for (auto [rho, q] : starts) {
      InversionResult r;
      if (refine(s, t, rho, q, &r.iterations)) {
        r.u = detail::u_of(rho, q);
        r.large_u = std::abs(r.u) > 1e6;
        return r;
      }
    }
    throw convergence_error("u_from_slopes: Newton did not converge");
  }

  bool refine(double s, double t, double& rho, double& q, int* iters = nullptr) const {
    auto eval = [&](ComplexPoint u, double& f, double& g, ComplexPoint& fu, ComplexPoint& gu) {
      if (!(u.imag() > 0) || !std::isfinite(std::abs(u))) return false;
      const Derivatives D = derivatives(u, d_);
      f = D.s, g = D.t, fu = D.s_u, gu = D.t_u;
      return std::isfinite(f) && std::isfinite(g);
    };
    return detail::newton_xi(eval, rho, q, s, t, 1e-14, 200, iters);
  }

 private:
  struct Seed {
    double rho, q, s, t;
  };
  FundamentalDomain d_;
  std::vector<Seed> seeds_;
};

inline InversionResult u_from_slopes(double s, double t, const FundamentalDomain& d) {
  return SlopeInverter(d).invert(s, t);
}

// Inverse of u -> (X,Y). Only fields inside the amoeba have a preimage;
// returns false when Newton fails to converge.
class FieldInverter {
 public:
  static constexpr int kGrid = 48;

  explicit FieldInverter(const FundamentalDomain& d) : d_(d) {
    for (int i = 0; i < kGrid; ++i)
      for (int j = 0; j < kGrid; ++j) {
        const double rho = -12.0 + 24.0 * i / (kGrid - 1);
        const double q = -7.0 + 14.0 * j / (kGrid - 1);
        auto [X, Y] = fields_from_u(detail::u_of(rho, q), d_);
        seeds_.push_back({rho, q, X, Y});
      }
  }

  bool invert(FieldPoint f, ComplexPoint& u_out, double tol = 1e-12) const {
    std::vector<const Seed*> order;
    for (const auto& s : seeds_) order.push_back(&s);
    const std::size_t k = std::min<std::size_t>(16, order.size());
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](const Seed* a, const Seed* b) {
      return std::hypot(a->X - f.X, a->Y - f.Y) < std::hypot(b->X - f.X, b->Y - f.Y);
    });
    auto eval = [&](ComplexPoint u, double& X, double& Y, ComplexPoint& Xu, ComplexPoint& Yu) {
      if (!(u.imag() > 0) || !std::isfinite(std::abs(u))) return false;
      const Derivatives D = derivatives(u, d_);
      try {
        std::tie(X, Y) = fields_from_u(u, d_);
      } catch (const singular_argument_error&) {
        return false;  // w or z rounded onto 0 or 1
      }
      Xu = D.X_u, Yu = D.Y_u;
      return std::isfinite(X) && std::isfinite(Y);
    };
    auto attempt = [&](const Seed* sd) {
      double rho = sd->rho, q = sd->q;
      if (!detail::newton_xi(eval, rho, q, f.X, f.Y, tol, 200, nullptr, true)) return false;
      u_out = detail::u_of(rho, q);
      return true;
    };
    for (std::size_t i = 0; i < k; ++i)
      if (attempt(order[i])) return true;
    // Small r sends both u -> 0 and u -> inf to X = Y = 0, so near the origin the
    // nearest seeds can all sit at the wrong end. Retry with the best seed per |u|.
    std::vector<const Seed*> rows;
    for (int i = 0; i < kGrid; ++i) {
      const Seed* best = nullptr;
      for (int j = 0; j < kGrid; ++j) {
        const Seed* sd = &seeds_[std::size_t(i) * kGrid + j];
        if (!best || std::hypot(sd->X - f.X, sd->Y - f.Y) < std::hypot(best->X - f.X, best->Y - f.Y)) best = sd;
      }
      if (std::find(order.begin(), order.begin() + k, best) == order.begin() + k) rows.push_back(best);
    }
    std::sort(rows.begin(), rows.end(), [&](const Seed* a, const Seed* b) {
      return std::hypot(a->X - f.X, a->Y - f.Y) < std::hypot(b->X - f.X, b->Y - f.Y);
    });
    for (const Seed* sd : rows)
      if (attempt(sd)) return true;
    return false;
  }

 private:
  struct Seed {
    double rho, q, X, Y;
  };
  FundamentalDomain d_;
  std::vector<Seed> seeds_;
};

// ---------------------------------------------------------------- Wirtinger check

// Numerical Y_u/s_u and X_u/t_u: central differences with one Richardson
// level, f_u = (f_x - i f_y)/2.
inline std::pair<ComplexPoint, ComplexPoint> wirtinger_ratios(ComplexPoint u, const FundamentalDomain& d,
                                                              double rel_step = 1e-5) {
  require_upper(u);
  const double h = rel_step * std::max(1.0, std::abs(u));
  auto all = [&](ComplexPoint v) {
    auto [s, t] = slopes_from_u(v, d);
    auto [X, Y] = fields_from_u(v, d);
    return std::array<double, 4>{s, t, X, Y};
  };
  auto diff = [&](double step) {
    std::array<ComplexPoint, 4> out{};
    const auto xp = all(u + step), xm = all(u - step);
    const auto yp = all(u + kI * step), ym = all(u - kI * step);
    for (int k = 0; k < 4; ++k) {
      const double fx = (xp[k] - xm[k]) / (2 * step), fy = (yp[k] - ym[k]) / (2 * step);
      out[k] = 0.5 * ComplexPoint(fx, -fy);
    }
    return out;
  };
  const auto d1 = diff(h), d2 = diff(h / 2);
  std::array<ComplexPoint, 4> D;
  for (int k = 0; k < 4; ++k) D[k] = (4.0 * d2[k] - d1[k]) / 3.0;
  return {D[3] / D[0], D[2] / D[1]};
}

// Residuals of Y_u/s_u = i theta^2/pi and X_u/t_u = -i theta^2/pi, as written.
// These hold for large r only; small r is orientation preserving and both
// signs flip (see wirtinger_check_oriented).
inline std::pair<double, double> wirtinger_check(ComplexPoint u, const FundamentalDomain& d, double rel_step = 1e-5) {
  const auto [a, b] = wirtinger_ratios(u, d, rel_step);
  const double th = theta_of(u, d.regime);
  const ComplexPoint k = kI * th * th / kPi;
  return {std::abs(a - k), std::abs(b + k)};
}

// Same identities with the sign of the Jacobian of u -> (s,t) folded in.
inline std::pair<double, double> wirtinger_check_oriented(ComplexPoint u, const FundamentalDomain& d,
                                                          double rel_step = 1e-5) {
  const auto [a, b] = wirtinger_ratios(u, d, rel_step);
  const double th = theta_of(u, d.regime);
  const ComplexPoint k = (d.small() ? -1.0 : 1.0) * kI * th * th / kPi;
  return {std::abs(a - k), std::abs(b + k)};
}

// Jacobian determinant of u -> (s,t) in (Re u, Im u) coordinates.
inline double slope_jacobian(ComplexPoint u, const FundamentalDomain& d) {
  const Derivatives D = derivatives(u, d);
  return 4 * (D.s_u * std::conj(D.t_u)).imag();
}

}  // namespace fivevertex

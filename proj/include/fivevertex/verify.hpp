#pragma once
// Invariant suite for one fundamental domain, used by `verify`.

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "apoly.hpp"
#include "conformal.hpp"
#include "enumeration.hpp"
#include "phase_diagram.hpp"
#include "thermodynamics.hpp"
#include "transfer.hpp"

namespace fivevertex {

struct CheckResult {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

inline std::vector<ComplexPoint> sample_u_points(int n_radii = 5, int n_angles = 3) {
  std::vector<ComplexPoint> out;
  for (int i = 0; i < n_radii; ++i) {
    const double rho = std::exp(std::log(0.05) + (std::log(20.0) - std::log(0.05)) * i / std::max(1, n_radii - 1));
    for (int j = 0; j < n_angles; ++j) out.push_back(std::polar(rho, kPi * (j + 0.5) / n_angles));
  }
  return out;
}

inline std::vector<CheckResult> run_verification(const FundamentalDomain& d) {
  std::vector<CheckResult> out;
  auto check = [&](const std::string& name, double tol, const std::function<std::pair<double, std::string>()>& f) {
    CheckResult c;
    c.name = name;
    c.tolerance = tol;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto [r, detail] = f();
      c.residual = r;
      c.detail = detail;
      c.pass = r <= tol;
    } catch (const std::exception& e) {
      c.residual = INFINITY;
      c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(c);
  };
  const auto us = sample_u_points();

  check("spectral_curve_residual", 1e-12, [&] {
    double worst = 0;
    for (auto u : us)
      for (double a : d.alphas) {
        const ComplexPoint w = u / (u + a * a);
        for (double b : d.betas) {
          const double r = a * b;
          worst = std::max(worst, std::abs(spectral_residual(solve_spectral(w, r), w, r)));
        }
      }
    return std::pair{worst, std::string("max |P(z,w)| over sample points")};
  });

  check("slope_inversion_roundtrip", 1e-8, [&] {
    SlopeInverter inv(d);
    double worst = 0;
    for (auto u : us) {
      auto [s, t] = slopes_from_u(u, d);
      worst = std::max(worst, std::abs(inv.invert(s, t).u - u) / std::abs(u));
    }
    return std::pair{worst, std::string("relative |u - u(s(u),t(u))|")};
  });

  check("legendre_duality", 1e-8, [&] {
    FieldInverter finv(d);
    SlopeInverter sinv(d);
    double worst = 0;
    for (auto u : us) {
      const auto c = free_energy_conformal(u, d);
      const double sig = surface_tension({c.s, c.t}, d, &sinv);
      worst = std::max(worst, std::abs(-sig + c.s * c.fields.X + c.t * c.fields.Y - c.F));
      const auto L = solve_legendre(c.fields, d, finv);
      worst = std::max(worst, std::abs(L.F - c.F));
    }
    return std::pair{worst, std::string("|F - (-sigma + sX + tY)| and |F_legendre - F|")};
  });

  check("hessian_determinant", 1e-3, [&] {
    // slopes on a grid whose stencil of half-width 0.02 stays in the pure phase
    SlopeInverter inv(d);
    double worst = 0;
    int n = 0;
    for (int i = 1; i < 10; ++i)
      for (int j = 1; i + j < 10; ++j) {
        const double s = 0.1 * i, t = 0.1 * j;
        if (stencil_room(s, t, d) < 0.02) continue;
        worst = std::max(worst, hessian_identity(inv.invert(s, t).u, d));
        ++n;
      }
    return std::pair{worst, "relative |sqrt(det H) - theta^2/pi| at " + std::to_string(n) + " interior slopes"};
  });

  check("wirtinger_oriented", 1e-5, [&] {
    double worst = 0;
    for (auto u : us) {
      auto [a, b] = wirtinger_check_oriented(u, d);
      worst = std::max({worst, a, b});
    }
    return std::pair{worst, std::string("|Y_u/s_u - i k|, |X_u/t_u + i k|, k = +-theta^2/pi by orientation")};
  });

  check("jacobian_sign", 0, [&] {
    int bad = 0;
    for (auto u : us) {
      const double J = slope_jacobian(u, d);
      if (d.small() ? !(J > 0) : !(J < 0)) ++bad;
    }
    return std::pair{double(bad), std::string(d.small() ? "expect J > 0" : "expect J < 0")};
  });

  check("tentacle_count", 0, [&] {
    const int got = int(tentacles(d).size()), want = expected_tentacles(d);
    return std::pair{double(std::abs(got - want)),
                     "found " + std::to_string(got) + ", expected " + std::to_string(want)};
  });

  if (d.small())
    check("coexistence_endpoints", 1e-9, [&] {
      auto [s0, t0] = coexistence_point(d, 1e-12);
      auto [s1, t1] = coexistence_point(d, 1e12);
      const double r = std::max({std::abs(s0 - 1), std::abs(t0), std::abs(s1), std::abs(t1 - 1)});
      return std::pair{r, std::string("R -> 0 gives (1,0), R -> inf gives (0,1)")};
    });

  check("oracle_equivalence", 1e-12, [&] {
    double worst = 0;
    const FieldPoint f{0.17, -0.23};
    for (int N = 1; N <= 4 * std::max(d.m1(), d.m2()) && N <= 4; ++N) {
      if (N % d.m1() || N % d.m2()) continue;
      const double Ze = partition_function(enumerate_torus(N, d, f));
      worst = std::max({worst, std::abs(partition_function_rows(N, d, f) - Ze) / Ze,
                        std::abs(partition_function_columns(N, d, f) - Ze) / Ze});
    }
    return std::pair{worst, std::string("enumeration vs row and column transfer, N <= 4")};
  });

  check("commutation", 1e-12, [&] {
    // second row weights stay in the regime of the domain
    const double bmin = *std::min_element(d.betas.begin(), d.betas.end());
    const double bmax = *std::max_element(d.betas.begin(), d.betas.end());
    const double b1 = d.small() ? 0.9 * bmin : 1.1 * bmax, b2 = d.small() ? 0.5 * bmin : 1.7 * bmax;
    double worst = 0;
    for (int n = 0; n <= 3; ++n) worst = std::max(worst, check_commutation(6, n, b1, b2, d, {0.1, -0.2}));
    return std::pair{worst, std::string("N = 6, n = 0..3")};
  });

  check("apoly_identity", 1e-12, [&] {
    std::vector<double> A;
    for (double a : d.alphas) A.push_back(a);
    for (double b : d.betas) A.push_back(b);
    const auto rep = apoly_check(A);
    return std::pair{rep.max_residual, std::string("weights as A, against (-1)^(i+j) e_(i+j+1)")};
  });

  return out;
}

}  // namespace fivevertex

#include <gtest/gtest.h>

#include <random>

#include "fivevertex/thermodynamics.hpp"
#include "oracles.hpp"

using namespace fivevertex;
using oracle::cplx;

namespace {

const FundamentalDomain kSmall = build_domain({0.2, 0.9}, {0.2, 0.9});
const FundamentalDomain kLarge = build_domain({2, 1.25}, {2, 1.25});

cplx random_upper(std::mt19937_64& g) {
  std::uniform_real_distribution<double> L(-2, 2), A(0.05, 3.09);
  return std::polar(std::pow(10.0, L(g)), A(g));
}

}  // namespace

TEST(SimplyPeriodic, SmallSigmaAndF) {
  const auto d = build_domain({0.5}, {1});
  std::mt19937_64 g(21);
  for (int k = 0; k < 50; ++k) {
    const cplx u = random_upper(g);
    const cplx w = u / (u + 0.25), z = 1.0 / (1.0 + u);
    const auto c = free_energy_conformal(u, d);
    EXPECT_NEAR(c.sigma, oracle::sigma_simple_small(c.s, c.t, w, z), 1e-12);
    EXPECT_NEAR(c.F, oracle::free_energy_simple_small(c.s, w, z), 1e-12);
  }
}

TEST(SimplyPeriodic, LargeF) {
  const auto d = build_domain({2}, {1});
  std::mt19937_64 g(22);
  for (int k = 0; k < 50; ++k) {
    const cplx u = random_upper(g);
    const cplx w = u / (u + 4.0), z = 1.0 / (1.0 + u);
    const auto c = free_energy_conformal(u, d);
    EXPECT_NEAR(c.F, oracle::free_energy_simple_large(c.s, w, z), 1e-11);
  }
}

TEST(Sigma, TransposeSymmetry) {
  const auto d = build_domain({0.2, 0.9}, {0.5, 0.7, 0.3});
  for (auto [s, t] : {std::pair{0.2, 0.3}, {0.1, 0.1}, {0.4, 0.2}, {0.0, 0.4}, {0.3, 0.0}})
    EXPECT_NEAR(surface_tension({s, t}, d), surface_tension({t, s}, transpose(d)), 1e-10) << s << ' ' << t;
}

TEST(Sigma, ZeroInCoexistence) {
  EXPECT_EQ(surface_tension({0.45, 0.5}, kSmall), 0.0);
  EXPECT_EQ(surface_tension({0.3, 0.7}, kSmall), 0.0);
  EXPECT_GT(std::abs(surface_tension({0.1, 0.1}, kSmall)), 0.0);
}

TEST(Sigma, OutsideTriangleThrows) {
  EXPECT_THROW(surface_tension({0.7, 0.7}, kSmall), domain_error);
  EXPECT_THROW(surface_tension({-0.1, 0.2}, kLarge), domain_error);
}

TEST(Sigma, MidpointConvex) {
  std::mt19937_64 g(23);
  std::uniform_real_distribution<double> U(0.01, 0.99);
  for (const auto* d : {&kSmall, &kLarge}) {
    SlopeInverter inv(*d);
    for (int k = 0; k < 40; ++k) {
      SlopePoint a{U(g), U(g)}, b{U(g), U(g)};
      if (a.s + a.t >= 0.99 || b.s + b.t >= 0.99) continue;
      const SlopePoint m{0.5 * (a.s + b.s), 0.5 * (a.t + b.t)};
      const double lhs = surface_tension(m, *d, &inv);
      const double rhs = 0.5 * (surface_tension(a, *d, &inv) + surface_tension(b, *d, &inv));
      EXPECT_LE(lhs, rhs + 1e-10);
    }
  }
}

TEST(Sigma, ContinuousAtTheBoundary) {
  for (const auto* d : {&kSmall, &kLarge}) {
    EXPECT_NEAR(surface_tension({0.3, 1e-7}, *d), surface_tension({0.3, 0}, *d), 1e-4);
    EXPECT_NEAR(surface_tension({1e-7, 0.6}, *d), surface_tension({0, 0.6}, *d), 1e-4);
  }
  EXPECT_NEAR(surface_tension({0.5 - 1e-6, 0.5 - 1e-6}, kLarge), surface_tension({0.5, 0.5}, kLarge), 1e-3);
}

TEST(Legendre, Duality) {
  std::mt19937_64 g(24);
  for (const auto* d : {&kSmall, &kLarge}) {
    SlopeInverter inv(*d);
    for (int k = 0; k < 30; ++k) {
      const auto c = free_energy_conformal(random_upper(g), *d);
      EXPECT_NEAR(c.sigma + c.F - c.s * c.fields.X - c.t * c.fields.Y, 0, 1e-10);
      EXPECT_NEAR(surface_tension({c.s, c.t}, *d, &inv), c.sigma, 1e-9);
    }
  }
}

TEST(Legendre, MatchesBruteForceSup) {
  for (const auto* d : {&kSmall, &kLarge}) {
    FieldInverter inv(*d);
    for (FieldPoint f : {FieldPoint{0, 0}, FieldPoint{-1, 0.5}, FieldPoint{2, -1}, FieldPoint{-8, -8}}) {
      const double F = solve_legendre(f, *d, inv).F;
      const double bf = oracle::legendre_bruteforce(f, *d, 80);
      EXPECT_GE(F, bf - 1e-10);
      EXPECT_LE(F - bf, 5e-3) << f.X << ' ' << f.Y;
    }
  }
}

TEST(Legendre, FrozenCornerAndConvexity) {
  EXPECT_NEAR(free_energy({-10, -10}, kSmall), mean_log_empty(kSmall), 1e-12);
  EXPECT_NEAR(free_energy({-10, -10}, kLarge), mean_log_empty(kLarge), 1e-12);
  std::mt19937_64 g(25);
  std::uniform_real_distribution<double> U(-4, 4);
  for (const auto* d : {&kSmall, &kLarge}) {
    FieldInverter inv(*d);
    for (int k = 0; k < 20; ++k) {
      FieldPoint a{U(g), U(g)}, b{U(g), U(g)};
      const double m = solve_legendre({0.5 * (a.X + b.X), 0.5 * (a.Y + b.Y)}, *d, inv).F;
      EXPECT_LE(m, 0.5 * (solve_legendre(a, *d, inv).F + solve_legendre(b, *d, inv).F) + 1e-10);
    }
  }
}

TEST(Coexistence, PointAtROne) {
  const auto p = coexistence_boundary(kSmall, 1.0);
  // direct sums: s = mean a^2/(1+a^2), t = mean b^2/(1+b^2)
  const double want = 0.5 * (0.04 / 1.04 + 0.81 / 1.81);
  EXPECT_NEAR(want, 0.2429877, 1e-7);
  EXPECT_NEAR(p.s, want, 1e-15);
  EXPECT_NEAR(p.t, want, 1e-15);
}

TEST(Coexistence, EndpointsAndErrors) {
  const auto a = coexistence_boundary(kSmall, 1e-14), b = coexistence_boundary(kSmall, 1e14);
  EXPECT_NEAR(a.s, 1, 1e-12);
  EXPECT_NEAR(a.t, 0, 1e-12);
  EXPECT_NEAR(b.s, 0, 1e-12);
  EXPECT_NEAR(b.t, 1, 1e-12);
  EXPECT_THROW(coexistence_boundary(kLarge, 1.0), regime_error);
  EXPECT_THROW(coexistence_boundary(kSmall, 0.0), std::invalid_argument);
}

TEST(Coexistence, CurveBelowHypotenuseAndMonotone) {
  double prev_s = 2, prev_t = -1;
  for (int i = 0; i <= 60; ++i) {
    const auto p = coexistence_boundary(kSmall, std::exp(-15.0 + 0.5 * i));
    EXPECT_LT(p.s, prev_s);
    EXPECT_GT(p.t, prev_t);
    EXPECT_LE(p.s + p.t, 1 + 1e-15);
    prev_s = p.s, prev_t = p.t;
  }
}

TEST(Hessian, DeterminantIsArgSquaredOverPi) {
  for (const auto* d : {&kSmall, &kLarge}) {
    SlopeInverter inv(*d);
    for (SlopePoint p : {SlopePoint{0.2, 0.2}, SlopePoint{0.1, 0.5}, SlopePoint{0.6, 0.1}, SlopePoint{0.3, 0.05}}) {
      if (stencil_room(p.s, p.t, *d) < 0.02) continue;
      EXPECT_LE(hessian_identity(inv.invert(p.s, p.t).u, *d), 1e-4) << p.s << ' ' << p.t;
    }
  }
}

TEST(Hessian, StepShrinksNearTheCoexistenceCurve) {
  // slope about 4e-5 below the curve; a fixed step of 1e-3 would cross it
  const cplx u(8.49022, 2.2879);
  const auto d = build_domain({0.5}, {1});
  auto [s, t] = slopes_from_u(u, d);
  EXPECT_LT(stencil_room(s, t, d), 1e-4);
  EXPECT_THROW(sigma_hessian(u, d, 1e-3), stencil_error);
  EXPECT_NO_THROW(sigma_hessian(u, d));
}

TEST(Hessian, StencilOutsidePhaseThrows) {
  // near the hypotenuse for small r the stencil reaches the coexistence region
  const double R = 1.0;
  const cplx u(R, 1e-7);
  EXPECT_THROW(sigma_hessian(u, kSmall, 1e-3), stencil_error);
}

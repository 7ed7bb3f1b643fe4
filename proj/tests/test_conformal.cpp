#include <gtest/gtest.h>

#include <random>

#include "fivevertex/conformal.hpp"
#include "fivevertex/thermodynamics.hpp"

using namespace fivevertex;
using cplx = std::complex<double>;

namespace {

const FundamentalDomain kSmall = build_domain({0.2, 0.9}, {0.2, 0.9});
const FundamentalDomain kLarge = build_domain({2, 1.25}, {2, 1.25});

cplx random_upper(std::mt19937_64& g) {
  std::uniform_real_distribution<double> L(-2.5, 2.5), A(0.02, 3.12);
  return std::polar(std::pow(10.0, L(g)), A(g));
}

}  // namespace

TEST(Spectral, Examples) {
  EXPECT_EQ(solve_spectral(cplx(0, 0), 0.7), cplx(1, 0));
  const cplx z = solve_spectral(cplx(0, 1), 0.5);
  EXPECT_NEAR(z.real(), 1.12, 1e-15);
  EXPECT_NEAR(z.imag(), -0.16, 1e-15);
  EXPECT_LE(std::abs(spectral_residual(z, cplx(0, 1), 0.5)), 1e-15);
}

TEST(Spectral, RandomResiduals) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> U(-5, 5), R(0.05, 4);
  for (int k = 0; k < 100; ++k) {
    const cplx w(U(g), U(g));
    double r = R(g);
    if (std::abs(r - 1) < 1e-3) r = 0.5;
    const cplx z = solve_spectral(w, r);
    EXPECT_LE(std::abs(spectral_residual(z, w, r)), 1e-14 * std::max(1.0, std::abs(z) * std::abs(w)));
  }
}

TEST(Spectral, Errors) {
  EXPECT_THROW(solve_spectral(cplx(-0.125, 0), 3.0), singular_argument_error);
  EXPECT_THROW(solve_spectral(cplx(0.3, 0.1), 1.0), std::invalid_argument);
  EXPECT_THROW(solve_spectral(cplx(0.3, 0.1), -1.0), std::invalid_argument);
}

TEST(Coords, UnitAlphaAtI) {
  const auto c = coords_from_u(cplx(0, 1), build_domain({1}, {0.5}));
  EXPECT_NEAR(c.w[0].real(), 0.5, 1e-15);
  EXPECT_NEAR(c.w[0].imag(), 0.5, 1e-15);
}

TEST(Coords, DefiningRelations) {
  std::mt19937_64 g(12);
  for (const auto* d : {&kSmall, &kLarge})
    for (int k = 0; k < 200; ++k) {
      const cplx u = random_upper(g);
      const auto c = coords_from_u(u, *d);
      for (int i = 0; i < d->m1(); ++i) {
        const double a2 = d->alphas[i] * d->alphas[i];
        EXPECT_LE(std::abs(c.w[i] * (u + a2) - u), 1e-12 * (std::abs(u) + a2));
        for (int j = 0; j < d->m2(); ++j) {
          const double r = d->alphas[i] * d->betas[j];
          EXPECT_LE(std::abs(spectral_residual(c.z[j], c.w[i], r)), 1e-12);
        }
      }
      for (int j = 0; j < d->m2(); ++j) {
        const double b2 = d->betas[j] * d->betas[j];
        EXPECT_LE(std::abs(c.z[j] * (1.0 + b2 * u) - 1.0), 1e-12);
      }
      EXPECT_TRUE(strictly_inside_triangle(c.s, c.t));
    }
}

TEST(Coords, SimplyPeriodicSlopes) {
  const auto d = build_domain({0.5}, {1});
  std::mt19937_64 g(13);
  for (int k = 0; k < 50; ++k) {
    const cplx u = random_upper(g);
    const auto c = coords_from_u(u, d);
    const cplx w = c.w[0], z = c.z[0];
    EXPECT_NEAR(c.s, std::arg(w) / std::arg(w / (1.0 - w)), 1e-12);
    EXPECT_NEAR(c.t, std::arg(z) / std::arg(z / (1.0 - z)), 1e-12);
  }
}

TEST(Coords, LowerHalfPlaneRejected) {
  EXPECT_THROW(coords_from_u(cplx(1, 0), kSmall), domain_error);
  EXPECT_THROW(coords_from_u(cplx(1, -1), kSmall), domain_error);
}

TEST(Coords, ThetaBranchPerRegime) {
  const cplx u(-1, 1);
  EXPECT_NEAR(coords_from_u(u, kSmall).theta, 0.75 * kPi, 1e-15);
  EXPECT_NEAR(coords_from_u(u, kLarge).theta, 1.25 * kPi, 1e-15);
}

TEST(Coords, ExactDerivativesMatchFiniteDifferences) {
  std::mt19937_64 g(14);
  for (const auto* d : {&kSmall, &kLarge})
    for (int k = 0; k < 20; ++k) {
      const cplx u = random_upper(g);
      const auto D = derivatives(u, *d);
      const double h = 1e-6 * std::abs(u);
      auto su = [&](cplx v) { return slopes_from_u(v, *d); };
      const auto xp = su(u + h), xm = su(u - h), yp = su(u + cplx(0, h)), ym = su(u - cplx(0, h));
      const cplx s_fd = 0.5 * cplx((xp.first - xm.first) / (2 * h), -(yp.first - ym.first) / (2 * h));
      const cplx t_fd = 0.5 * cplx((xp.second - xm.second) / (2 * h), -(yp.second - ym.second) / (2 * h));
      EXPECT_LE(std::abs(D.s_u - s_fd), 1e-6 * std::abs(D.s_u) + 1e-9) << u;
      EXPECT_LE(std::abs(D.t_u - t_fd), 1e-6 * std::abs(D.t_u) + 1e-9) << u;
    }
}

TEST(Inversion, RoundTrip) {
  std::mt19937_64 g(15);
  for (const auto* d : {&kSmall, &kLarge}) {
    SlopeInverter inv(*d);
    for (int k = 0; k < 200; ++k) {
      std::uniform_real_distribution<double> L(-2, 2), A(0.05, 3.09);
      const cplx u = std::polar(std::pow(10.0, L(g)), A(g));
      auto [s, t] = slopes_from_u(u, *d);
      const auto r = inv.invert(s, t);
      EXPECT_LE(std::abs(r.u - u) / std::abs(u), 1e-8) << u;
      auto [s2, t2] = slopes_from_u(r.u, *d);
      EXPECT_LE(std::hypot(s2 - s, t2 - t), 1e-10);
    }
  }
}

TEST(Inversion, OutOfPhase) {
  auto [s, t] = coexistence_point(kSmall, 1.0);
  EXPECT_THROW(u_from_slopes(s, t + 0.01, kSmall), out_of_phase_error);
  EXPECT_THROW(u_from_slopes(0.6, 0.6, kLarge), out_of_phase_error);
  EXPECT_NO_THROW(u_from_slopes(s, t - 0.01, kSmall));
}

TEST(Inversion, HalfHalfSitsOnThePositiveAxis) {
  // large r: (1/2,1/2) is the image of the whole positive real axis
  const auto r = u_from_slopes(0.5 - 1e-4, 0.5 - 1e-4, kLarge);
  EXPECT_GT(r.u.real(), 0);
  EXPECT_LT(std::arg(r.u), 1e-2);
}

TEST(Inversion, NearAPinchPoint) {
  // preimage within 3e-7 of u = -alpha^2, where u is ill conditioned
  const auto r = u_from_slopes(0.3, 1e-7, kSmall);
  EXPECT_NEAR(r.u.real(), -0.81, 1e-4);
  auto [s, t] = slopes_from_u(r.u, kSmall);
  EXPECT_NEAR(s, 0.3, 1e-9);
  EXPECT_NEAR(t, 1e-7, 1e-12);
}

TEST(Orientation, JacobianSignPerRegime) {
  // small r keeps orientation, large r reverses it
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) {
      const cplx u = std::polar(std::exp(-4.0 + 8.0 * i / 29), kPi * (j + 0.5) / 30);
      EXPECT_GT(slope_jacobian(u, kSmall), 0) << u;
      EXPECT_LT(slope_jacobian(u, kLarge), 0) << u;
    }
}

TEST(Wirtinger, LargeRAsWritten) {
  auto [a, b] = wirtinger_check(cplx(-1, 2), kLarge);
  EXPECT_LE(a, 1e-5);
  EXPECT_LE(b, 1e-5);
}

TEST(Wirtinger, SmallRHasOppositeSign) {
  const cplx u(0.3, 0.7);
  auto [a, b] = wirtinger_check(u, kSmall);
  const double th = std::arg(u), k = th * th / kPi;
  // the residual as written is |2k|: Y_u/s_u = -i k exactly
  EXPECT_NEAR(a, 2 * k, 1e-5);
  EXPECT_NEAR(b, 2 * k, 1e-5);
  auto [c, e] = wirtinger_check_oriented(u, kSmall);
  EXPECT_LE(c, 1e-5);
  EXPECT_LE(e, 1e-5);
}

TEST(Wirtinger, SimplyPeriodicInW) {
  // Y_w / s_w = Y_u / s_u since w is a holomorphic function of u
  const auto d = build_domain({0.5}, {1});
  for (cplx u : {cplx(0.2, 0.4), cplx(-3, 1), cplx(10, 20)}) {
    auto [a, b] = wirtinger_ratios(u, d);
    const cplx w = u / (u + 0.25);
    const double th = std::arg(w / (1.0 - w));
    EXPECT_NEAR(std::abs(a), th * th / kPi, 1e-6);
    EXPECT_NEAR(std::abs(b), th * th / kPi, 1e-6);
  }
}

TEST(Coexistence, EndpointsAlongRealAxis) {
  auto [s0, t0] = slopes_from_u(cplx(1e-9, 1e-13), kSmall);
  EXPECT_NEAR(s0, 1, 1e-6);
  EXPECT_NEAR(t0, 0, 1e-6);
  auto [s1, t1] = slopes_from_u(cplx(1e9, 1e-3), kSmall);
  EXPECT_NEAR(s1, 0, 1e-6);
  EXPECT_NEAR(t1, 1, 1e-6);
}

#include <gtest/gtest.h>

#include "fivevertex/mcmc.hpp"

using namespace fivevertex;

namespace {
const FundamentalDomain kLarge = build_domain({2, 1.25}, {2, 1.25});
const FundamentalDomain kSmall = build_domain({0.8, 0.25}, {0.8, 0.25});
}  // namespace

TEST(Region, StaircaseIsAdmissible) {
  const auto R = staircase_box(6, 4);
  EXPECT_TRUE(region_admissible(R));
  EXPECT_EQ(R.width, 8);
  int free = 0;
  for (char c : R.is_free) free += c;
  EXPECT_EQ(free, 36);
}

TEST(Region, SemiBoxedIsAdmissible) {
  const auto R = semi_boxed_region(8, 32);
  EXPECT_TRUE(region_admissible(R));
}

TEST(Region, InfeasibleBoundaryThrows) {
  Region R = staircase_box(3, 4);
  R.h[R.idx(-1, -1)] = 10;  // a fixed face far above its fixed neighbours
  EXPECT_THROW(extend_boundary(R), feasibility_error);
}

TEST(Region, FreeFaceOnTheEdgeThrows) {
  Region R = staircase_box(3, 4);
  R.is_free[R.idx(-1, 1)] = 1;
  EXPECT_THROW(MetropolisChain(R, kLarge, 1), feasibility_error);
}

TEST(Chain, DetailedBalance) {
  for (const auto* d : {&kLarge, &kSmall}) {
    MetropolisChain c(staircase_box(4, 4), *d, 5);
    c.run(2000);
    int checked = 0;
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x)
        for (int delta : {-1, 1}) {
          const double lr = c.log_ratio(x, y, delta);
          if (std::isnan(lr)) continue;
          const Region before = c.state();
          const double fwd = c.log_transition(x, y, delta);
          c.set_height(x, y, before.at(x, y) + delta);
          const double back = c.log_transition(x, y, -delta);
          const double dw = region_log_weight(c.state(), *d) - region_log_weight(before, *d);
          c.set_height(x, y, before.at(x, y));
          EXPECT_NEAR(fwd - back, dw, 1e-12);
          EXPECT_NEAR(lr, dw, 1e-12);
          ++checked;
        }
    EXPECT_GT(checked, 0);
  }
}

TEST(Chain, StaysAdmissible) {
  MetropolisChain c(semi_boxed_region(6, 24), kLarge, 9);
  c.run(50000);
  EXPECT_TRUE(region_admissible(c.state()));
  EXPECT_GT(c.accepted(), 0u);
}

TEST(Chain, ThreadCountDoesNotChangeResults) {
  const auto R = staircase_box(4, 4);
  const auto a = mcmc_chains(R, kLarge, 3000, 17, 5, 1);
  const auto b = mcmc_chains(R, kLarge, 3000, 17, 5, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].h, b[i].h);
}

TEST(Chain, SmallRegionMatchesExactMeans) {
  const auto R = staircase_box(3, 3);
  const auto ex = exact_region_profile(R, kLarge);
  const auto P = empirical_height_profile(mcmc_chains(R, kLarge, 20 * default_moves(9), 3, 600));
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) {
      const auto i = P.idx(x, y);
      // a nearly frozen face can show no variation at all in 600 samples
      const double se = P.stderr_[i] > 0 ? P.stderr_[i] : std::sqrt(ex.var[i] / 600);
      EXPECT_LE(std::abs(P.mean[i] - ex.mean[i]), 4 * se + 1e-12) << x << ' ' << y;
    }
}

TEST(Exact, CountsTinyRegion) {
  // one free face between fixed heights 0 (west, south) and 1 (east, north)
  Region R;
  R.x0 = R.y0 = -1;
  R.width = R.height = 3;
  R.h = {0, 0, 1, 0, 0, 1, 1, 1, 1};
  R.is_free = {0, 0, 0, 0, 1, 0, 0, 0, 0};
  const auto P = exact_region_profile(R, build_domain({1.5}, {1}));
  EXPECT_EQ(P.configurations, 2u);
}

TEST(Profile, SingleSampleHasZeroError) {
  const auto R = staircase_box(3, 3);
  const auto P = empirical_height_profile({R});
  for (double e : P.stderr_) EXPECT_EQ(e, 0);
  EXPECT_THROW(empirical_height_profile({}), std::invalid_argument);
}

TEST(Snapshot, RoundTrip) {
  const auto S = mcmc_sample(semi_boxed_region(6, 24), kLarge, 40000, 4);
  const auto text = encode_snapshot(S);
  const auto back = decode_snapshot(text);
  EXPECT_EQ(back.h, S.h);
  EXPECT_EQ(back.width, S.width);
  EXPECT_EQ(encode_snapshot(back), text);
}

TEST(Snapshot, Bits) {
  const std::vector<int> b{0, 0, 0, 1, 1, 0, 0, 0, 0, 0};
  EXPECT_EQ(rle_encode_bits(b), "3 2 5");
  EXPECT_EQ(rle_decode_bits("3 2 5"), b);
  EXPECT_EQ(rle_encode_bits({1, 1}), "0 2");
  EXPECT_EQ(rle_decode_bits("0 2"), (std::vector<int>{1, 1}));
}

TEST(Snapshot, BadInput) {
  EXPECT_THROW(decode_snapshot("V 1 2\n"), parse_error);
  EXPECT_THROW(decode_snapshot("RLE 0 0 2 2\nV 1 1\nH 1\nB 0\nZ 3\n"), parse_error);
  EXPECT_THROW(decode_snapshot("RLE 0 0 2 2\nV 1\nH 1\nB 0\n"), parse_error);
}

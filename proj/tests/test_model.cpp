#include <gtest/gtest.h>

#include <sstream>

#include "fivevertex/enumeration.hpp"
#include "fivevertex/model.hpp"

using namespace fivevertex;

TEST(Domain, RegimeClassification) {
  EXPECT_EQ(build_domain({2, 1.25}, {2, 1.25}).regime, Regime::LargeR);
  EXPECT_EQ(build_domain({0.2, 0.9}, {0.2, 0.9}).regime, Regime::SmallR);
  EXPECT_EQ(build_domain({0.5}, {3}).regime, Regime::LargeR);
  EXPECT_THROW(build_domain({0.5, 2}, {1}), regime_error);
  EXPECT_THROW(build_domain({0.5}, {2}), critical_weight_error);
  EXPECT_THROW(build_domain({}, {1}), std::invalid_argument);
  EXPECT_THROW(build_domain({-1}, {0.5}), std::invalid_argument);
}

TEST(Domain, PeriodicIndexing) {
  const auto d = build_domain({0.2, 0.9}, {0.3, 0.5, 0.7});
  EXPECT_DOUBLE_EQ(d.r(3, 4), 0.9 * 0.5);
  EXPECT_DOUBLE_EQ(d.r(-1, -1), 0.9 * 0.7);
}

TEST(Vertex, FivePatternsOnly) {
  EXPECT_EQ(classify_vertex(0, 0, 0, 0), VertexType::Empty);
  EXPECT_EQ(classify_vertex(1, 0, 1, 0), VertexType::Vertical);
  EXPECT_EQ(classify_vertex(0, 1, 0, 1), VertexType::Horizontal);
  EXPECT_EQ(classify_vertex(1, 0, 0, 1), VertexType::CornerSW);
  EXPECT_EQ(classify_vertex(0, 1, 1, 0), VertexType::CornerEN);
  EXPECT_THROW(classify_vertex(1, 1, 1, 1), invalid_configuration_error);
  EXPECT_THROW(classify_vertex(1, 0, 0, 0), invalid_configuration_error);
  int valid = 0;
  for (int m = 0; m < 16; ++m) try {
      classify_vertex(m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1);
      ++valid;
    } catch (const invalid_configuration_error&) {
    }
  EXPECT_EQ(valid, 5);
}

TEST(ConfigWeight, EmptyTorus) {
  const auto d = build_domain({0.5}, {1});
  const auto c = MNLPConfig::empty(2, 2, Topology::Torus);
  EXPECT_NEAR(config_weight(c, d, {0, 0}), 0.31640625, 1e-15);
  EXPECT_NEAR(config_weight(c, d, {3, -2}), 0.31640625, 1e-15);
}

TEST(ConfigWeight, HorizontalLoop) {
  const auto d = build_domain({0.2, 0.9}, {0.3, 0.7});
  const int N = 4;
  auto c = MNLPConfig::empty(N, N, Topology::Torus);
  for (int x = 0; x < N; ++x) c.set_H(x, 1, 1);
  double expect = std::exp(N * 0.4);
  for (int y = 0; y < N; ++y)
    for (int x = 0; x < N; ++x)
      if (y != 1) expect *= std::abs(1 - d.r(x, y) * d.r(x, y));
  EXPECT_NEAR(config_weight(c, d, {-0.3, 0.4}) / expect, 1.0, 1e-14);
  const auto hm = height_function(c);
  EXPECT_EQ(hm.Hx, 0);
  EXPECT_EQ(hm.Hy, 1);
}

TEST(ConfigWeight, CornerWeights) {
  // a staircase path: up at x=1 from row 0, turn west at row 1
  const auto d = build_domain({0.5}, {0.8});
  auto c = MNLPConfig::empty(3, 3, Topology::BoundedRegion);
  c.set_V(1, -1, 1);  // enters from the south
  c.set_V(1, 0, 1);   // vertical pass-through at (1,0)
  c.set_H(0, 1, 1);   // corner at (1,1): S in, W out
  c.set_H(-1, 1, 1);  // horizontal pass-through at (0,1), leaves west
  validate(c);
  EXPECT_EQ(c.vertex(1, 0), VertexType::Vertical);
  EXPECT_EQ(c.vertex(1, 1), VertexType::CornerSW);
  EXPECT_EQ(c.vertex(0, 1), VertexType::Horizontal);
  const double r = 0.4, e = 1 - r * r;
  EXPECT_NEAR(config_weight(c, d, {0, 0}), r * std::pow(e, 6), 1e-15);
}

TEST(Config, InvalidPatternRejected) {
  const auto d = build_domain({0.5}, {0.8});
  auto c = MNLPConfig::empty(2, 2, Topology::Torus);
  c.set_V(0, 0, 1);  // a path that stops
  EXPECT_THROW(config_weight(c, d, {0, 0}), invalid_configuration_error);
}

TEST(Height, EmptyAndSinglePath) {
  const auto e = height_function(MNLPConfig::empty(3, 3, Topology::BoundedRegion));
  for (long v : e.h) EXPECT_EQ(v, 0);
  auto c = MNLPConfig::empty(4, 3, Topology::BoundedRegion);
  for (int x = -1; x < 4; ++x) c.set_H(x, 1, 1);
  const auto m = height_function(c);
  for (int x = -1; x < 4; ++x) {
    EXPECT_EQ(m.at(x, -1), 0);
    EXPECT_EQ(m.at(x, 0), 0);
    EXPECT_EQ(m.at(x, 1), 1);
    EXPECT_EQ(m.at(x, 2), 1);
  }
  EXPECT_EQ(config_from_heights(m).horizontal_edges, c.horizontal_edges);
}

TEST(Height, TorusWindingsMatchEdgeCounts) {
  const auto d = build_domain({0.5}, {0.8});
  for (const auto& ec : enumerate_torus(2, d, {0, 0})) {
    const auto m = height_function(ec.config);
    EXPECT_EQ(m.Hx, ec.Hx);
    EXPECT_EQ(m.Hy, ec.Hy);
    // every row carries Hx vertical edges, every column Hy horizontal ones
    EXPECT_EQ(ec.config.h1(), 2 * ec.Hx);
    EXPECT_EQ(ec.config.h2(), 2 * ec.Hy);
    EXPECT_GE(ec.Hx, 0);
    EXPECT_LE(ec.Hx + ec.Hy, 2);
  }
}

TEST(Height, IncrementsMatchEdgesEverywhere) {
  // the height built along one spanning tree must agree with every edge
  auto c = MNLPConfig::empty(3, 3, Topology::BoundedRegion);
  c.set_V(2, -1, 1), c.set_V(2, 0, 1), c.set_H(1, 1, 1), c.set_V(1, 1, 1), c.set_V(1, 2, 1);
  const auto m = height_function(c);
  for (int y = -1; y < 3; ++y)
    for (int x = 0; x < 3; ++x) EXPECT_EQ(m.at(x, y) - m.at(x - 1, y), c.V(x, y));
  for (int y = 0; y < 3; ++y)
    for (int x = -1; x < 3; ++x) EXPECT_EQ(m.at(x, y) - m.at(x, y - 1), c.H(x, y));
}

TEST(ConfigFile, ParsesVariants) {
  std::istringstream a("# weights\nalphas = 2, 1.25\nbetas: [2 1.25]  # trailing\n");
  const auto d = parse_domain(a);
  EXPECT_EQ(d.alphas, (std::vector<double>{2, 1.25}));
  EXPECT_EQ(d.regime, Regime::LargeR);
}

TEST(ConfigFile, LineNumberedErrors) {
  auto line_of = [](const std::string& text) {
    std::istringstream is(text);
    try {
      parse_domain(is);
    } catch (const parse_error& e) {
      return e.line;
    }
    return -1;
  };
  EXPECT_EQ(line_of("alphas = 0.2\n\nbetas = x\n"), 3);
  EXPECT_EQ(line_of("alphas = 0.2\ngammas = 1\n"), 2);
  EXPECT_EQ(line_of("alphas = 0.2\nalphas = 0.3\n"), 2);
  EXPECT_EQ(line_of("alphas = 0.2\n"), 2);
  EXPECT_EQ(line_of("alphas 0.2\n"), 1);
  EXPECT_EQ(line_of("alphas = -1\nbetas = 1\n"), 1);
  EXPECT_EQ(line_of("alphas =\nbetas = 1\n"), 1);
}

TEST(Domain, AntidiagonalReflectionPreservesZ) {
  const auto d = build_domain({0.2, 0.9}, {0.3, 0.7});
  const FieldPoint f{0.3, -0.4};
  const double Z = partition_function(enumerate_torus(4, d, f));
  const double Zr = partition_function(enumerate_torus(4, reflect_antidiagonal(d), swap_fields(f)));
  EXPECT_NEAR(Zr / Z, 1.0, 1e-13);
}

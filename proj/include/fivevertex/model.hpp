#pragma once
// Periodic five-vertex weights r(x,y) = alpha[x mod m1] * beta[y mod m2],
// path configurations, their Boltzmann weight and height function.
//
// Lattice conventions. Vertex (x,y). V(x,y) is the vertical edge from (x,y)
// to (x,y+1); H(x,y) is the horizontal edge from (x,y) to (x+1,y). Paths
// go North and West, so vertex (x,y) has inputs S = V(x,y-1), E = H(x,y)
// and outputs N = V(x,y), W = H(x-1,y). Face (x,y) is the unit square whose
// SW corner is vertex (x,y); h(x,y) - h(x-1,y) = V(x,y) and
// h(x,y) - h(x,y-1) = H(x,y).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace fivevertex {

enum class Regime { SmallR, LargeR };

inline const char* regime_name(Regime r) { return r == Regime::SmallR ? "small_r" : "large_r"; }

inline int pmod(long a, long m) { return int(((a % m) + m) % m); }

struct FundamentalDomain {
  std::vector<double> alphas;
  std::vector<double> betas;
  Regime regime = Regime::SmallR;

  int m1() const { return int(alphas.size()); }
  int m2() const { return int(betas.size()); }
  double alpha(long x) const { return alphas[pmod(x, m1())]; }
  double beta(long y) const { return betas[pmod(y, m2())]; }
  double r(long x, long y) const { return alpha(x) * beta(y); }
  bool small() const { return regime == Regime::SmallR; }
};

inline FundamentalDomain build_domain(std::vector<double> alphas, std::vector<double> betas) {
  if (alphas.empty() || betas.empty())
    throw std::invalid_argument("build_domain: alphas and betas must be nonempty");
  for (double a : alphas)
    if (!(a > 0) || !std::isfinite(a)) throw std::invalid_argument("build_domain: alphas must be positive");
  for (double b : betas)
    if (!(b > 0) || !std::isfinite(b)) throw std::invalid_argument("build_domain: betas must be positive");
  int below = 0, above = 0;
  for (double a : alphas)
    for (double b : betas) {
      const double p = a * b;
      if (p == 1.0) throw critical_weight_error("build_domain: alpha*beta = 1");
      (p < 1.0 ? below : above)++;
    }
  if (below && above) throw regime_error("build_domain: mixed products alpha_i*beta_j < 1 and > 1");
  FundamentalDomain d{std::move(alphas), std::move(betas), below ? Regime::SmallR : Regime::LargeR};
  return d;
}

// swap rows and columns: sigma_{a,b}(s,t) = sigma_{b,a}(t,s)
inline FundamentalDomain transpose(const FundamentalDomain& d) {
  return FundamentalDomain{d.betas, d.alphas, d.regime};
}

struct FieldPoint {
  double X = 0;
  double Y = 0;
};

// Reflection (x,y) -> (-y,-x) maps North/West paths to North/West paths,
// vertical edges to horizontal ones, and r(x,y) to alpha'(x) beta'(y) with
// alpha'(x) = beta(-x), beta'(y) = alpha(-y). Fields swap.
inline FundamentalDomain reflect_antidiagonal(const FundamentalDomain& d) {
  FundamentalDomain e;
  e.regime = d.regime;
  for (int x = 0; x < d.m2(); ++x) e.alphas.push_back(d.beta(-x));
  for (int y = 0; y < d.m1(); ++y) e.betas.push_back(d.alpha(-y));
  return e;
}

inline FieldPoint swap_fields(FieldPoint f) { return {f.Y, f.X}; }

// ---------------------------------------------------------------- vertices

enum class VertexType { Empty, Vertical, Horizontal, CornerSW, CornerEN };

// S,E in; N,W out. Throws on the crossing or a non-conserving pattern.
inline VertexType classify_vertex(int S, int E, int N, int W) {
  if (S + E != N + W || S + E > 1)
    throw invalid_configuration_error("vertex pattern violates the five-vertex rule");
  if (S + E == 0) return VertexType::Empty;
  if (S) return N ? VertexType::Vertical : VertexType::CornerSW;
  return W ? VertexType::Horizontal : VertexType::CornerEN;
}

inline double vertex_weight(VertexType v, double r) {
  switch (v) {
    case VertexType::Empty: return std::abs(1.0 - r * r);
    case VertexType::CornerSW:
    case VertexType::CornerEN: return r;
    default: return 1.0;
  }
}

inline double log_vertex_weight(VertexType v, double r) { return std::log(vertex_weight(v, r)); }

// ---------------------------------------------------------------- configs

enum class Topology { Torus, BoundedRegion };

// Torus: W*H vertical and W*H horizontal edges with wraparound.
// Bounded region: W x H vertices; V(x,y) for y in [-1,H-1] and H(x,y) for
// x in [-1,W-1] so every vertex has all four edges, boundary ones included.
struct MNLPConfig {
  int width = 0;
  int height = 0;
  Topology topology = Topology::Torus;
  std::vector<std::uint8_t> vertical_edges;
  std::vector<std::uint8_t> horizontal_edges;

  static MNLPConfig empty(int w, int h, Topology topo) {
    MNLPConfig c{w, h, topo, {}, {}};
    if (topo == Topology::Torus) {
      c.vertical_edges.assign(std::size_t(w) * h, 0);
      c.horizontal_edges.assign(std::size_t(w) * h, 0);
    } else {
      c.vertical_edges.assign(std::size_t(w) * (h + 1), 0);
      c.horizontal_edges.assign(std::size_t(w + 1) * h, 0);
    }
    return c;
  }

  std::size_t vidx(long x, long y) const {
    if (topology == Topology::Torus) return std::size_t(pmod(y, height)) * width + pmod(x, width);
    return std::size_t(y + 1) * width + x;
  }
  std::size_t hidx(long x, long y) const {
    if (topology == Topology::Torus) return std::size_t(pmod(y, height)) * width + pmod(x, width);
    return std::size_t(y) * (width + 1) + (x + 1);
  }
  int V(long x, long y) const { return vertical_edges[vidx(x, y)]; }
  int H(long x, long y) const { return horizontal_edges[hidx(x, y)]; }
  void set_V(long x, long y, int v) { vertical_edges[vidx(x, y)] = std::uint8_t(v); }
  void set_H(long x, long y, int v) { horizontal_edges[hidx(x, y)] = std::uint8_t(v); }

  VertexType vertex(long x, long y) const { return classify_vertex(V(x, y - 1), H(x, y), V(x, y), H(x - 1, y)); }

  long h1() const { return std::count(vertical_edges.begin(), vertical_edges.end(), 1); }
  long h2() const { return std::count(horizontal_edges.begin(), horizontal_edges.end(), 1); }
};

inline void validate(const MNLPConfig& c) {
  for (int y = 0; y < c.height; ++y)
    for (int x = 0; x < c.width; ++x) (void)c.vertex(x, y);
}

inline double log_config_weight(const MNLPConfig& c, const FundamentalDomain& d, FieldPoint f) {
  double lw = f.X * double(c.h1()) + f.Y * double(c.h2());
  for (int y = 0; y < c.height; ++y)
    for (int x = 0; x < c.width; ++x) lw += log_vertex_weight(c.vertex(x, y), d.r(x, y));
  return lw;
}

inline double config_weight(const MNLPConfig& c, const FundamentalDomain& d, FieldPoint f) {
  return std::exp(log_config_weight(c, d, f));
}

// ---------------------------------------------------------------- heights

// Face heights. Torus: W x H faces anchored h(0,0) = 0, plus the winding
// pair (Hx = vertical edges met along a horizontal cycle, Hy likewise).
// Bounded region: (W+1) x (H+1) faces indexed from (-1,-1), anchored there.
struct HeightMap {
  int width = 0;   // faces per row
  int height = 0;  // face rows
  int offset = 0;  // 1 for bounded regions (face index starts at -1)
  std::vector<long> h;
  long Hx = 0;
  long Hy = 0;
  long at(long x, long y) const { return h[std::size_t(y + offset) * width + (x + offset)]; }
};

inline HeightMap height_function(const MNLPConfig& c) {
  validate(c);
  HeightMap m;
  if (c.topology == Topology::Torus) {
    m.width = c.width;
    m.height = c.height;
    m.h.assign(std::size_t(c.width) * c.height, 0);
    for (int y = 0; y < c.height; ++y)
      for (int x = 0; x < c.width; ++x) {
        long v;
        if (x == 0 && y == 0) v = 0;
        else if (x == 0) v = m.h[std::size_t(y - 1) * c.width] + c.H(0, y);
        else v = m.h[std::size_t(y) * c.width + x - 1] + c.V(x, y);
        m.h[std::size_t(y) * c.width + x] = v;
      }
    for (int x = 0; x < c.width; ++x) m.Hx += c.V(x, 0);
    for (int y = 0; y < c.height; ++y) m.Hy += c.H(0, y);
    return m;
  }
  m.width = c.width + 1;
  m.height = c.height + 1;
  m.offset = 1;
  m.h.assign(std::size_t(m.width) * m.height, 0);
  for (int y = -1; y < c.height; ++y)
    for (int x = -1; x < c.width; ++x) {
      long v;
      if (x == -1 && y == -1) v = 0;
      else if (x == -1) v = m.at(-1, y - 1) + c.H(-1, y);
      else v = m.at(x - 1, y) + c.V(x, y);
      m.h[std::size_t(y + 1) * m.width + (x + 1)] = v;
    }
  return m;
}

// Inverse of height_function on a bounded region: faces (W+1) x (H+1).
inline MNLPConfig config_from_heights(const HeightMap& m) {
  const int w = m.width - 1, hh = m.height - 1;
  MNLPConfig c = MNLPConfig::empty(w, hh, Topology::BoundedRegion);
  for (int y = -1; y < hh; ++y)
    for (int x = 0; x < w; ++x) {
      const long d = m.at(x, y) - m.at(x - 1, y);
      if (d < 0 || d > 1) throw invalid_configuration_error("height step outside {0,1}");
      c.set_V(x, y, int(d));
    }
  for (int y = 0; y < hh; ++y)
    for (int x = -1; x < w; ++x) {
      const long d = m.at(x, y) - m.at(x, y - 1);
      if (d < 0 || d > 1) throw invalid_configuration_error("height step outside {0,1}");
      c.set_H(x, y, int(d));
    }
  validate(c);
  return c;
}

// ---------------------------------------------------------------- config files

// Text format, one key per line, '#' starts a comment:
//   alphas = 2, 1.25
//   betas  = [2, 1.25]
inline FundamentalDomain parse_domain(std::istream& in) {
  std::vector<double> alphas, betas;
  bool have_a = false, have_b = false;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find_first_of("=:");
    if (eq == std::string::npos) throw parse_error(no, "expected 'key = values'");
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    std::string rest = line.substr(eq + 1);
    for (char& ch : rest)
      if (ch == '[' || ch == ']' || ch == ',') ch = ' ';
    std::vector<double>* dst;
    if (key == "alphas") {
      if (have_a) throw parse_error(no, "duplicate key 'alphas'");
      have_a = true;
      dst = &alphas;
    } else if (key == "betas") {
      if (have_b) throw parse_error(no, "duplicate key 'betas'");
      have_b = true;
      dst = &betas;
    } else {
      throw parse_error(no, "unknown key '" + key + "'");
    }
    std::istringstream ss(rest);
    std::string tok;
    while (ss >> tok) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw parse_error(no, "not a number: '" + tok + "'");
      }
      if (used != tok.size()) throw parse_error(no, "not a number: '" + tok + "'");
      if (!(v > 0) || !std::isfinite(v)) throw parse_error(no, "weights must be positive: '" + tok + "'");
      dst->push_back(v);
    }
    if (dst->empty()) throw parse_error(no, "empty list for '" + key + "'");
  }
  if (!have_a) throw parse_error(no + 1, "missing key 'alphas'");
  if (!have_b) throw parse_error(no + 1, "missing key 'betas'");
  return build_domain(alphas, betas);
}

inline FundamentalDomain load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  return parse_domain(in);
}

}  // namespace fivevertex

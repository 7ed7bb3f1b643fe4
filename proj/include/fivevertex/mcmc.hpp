#pragma once
// Metropolis sampler for five-vertex configurations on a bounded region,
// in face-height coordinates, plus the exact enumeration oracle for small
// regions and run-length snapshots.
//
// Faces live on a rectangular grid. Fixed faces carry the boundary data,
// free faces move. Around vertex (x,y) the faces are SW=(x-1,y-1),
// SE=(x,y-1), NE=(x,y), NW=(x-1,y). A height function is admissible iff
// neighbouring faces differ by 0 or 1 (increasing to the east and north)
// and h(NE) - h(SW) <= 1 at every vertex (no crossing).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace fivevertex {

struct Region {
  int x0 = 0, y0 = 0;  // coordinates of the lower-left face
  int width = 0, height = 0;
  std::vector<int> h;         // face heights, row-major from (x0,y0)
  std::vector<char> is_free;  // 1 = free face

  bool contains(int x, int y) const { return x >= x0 && y >= y0 && x < x0 + width && y < y0 + height; }
  std::size_t idx(int x, int y) const { return std::size_t(y - y0) * width + (x - x0); }
  int at(int x, int y) const { return h[idx(x, y)]; }
  bool free_at(int x, int y) const { return is_free[idx(x, y)] != 0; }
  // a vertex is counted iff all four surrounding faces are in the grid
  bool has_vertex(int x, int y) const { return contains(x - 1, y - 1) && contains(x, y); }
};

namespace detail {

struct VertexEdges {
  int S, E, N, W;
};

inline VertexEdges edges_at(const Region& R, int x, int y) {
  const int a = R.at(x - 1, y - 1), b = R.at(x, y - 1), c = R.at(x, y), dd = R.at(x - 1, y);
  return {b - a, c - b, c - dd, dd - a};
}

inline bool admissible(VertexEdges e) {
  auto bit = [](int v) { return v == 0 || v == 1; };
  return bit(e.S) && bit(e.E) && bit(e.N) && bit(e.W) && e.S + e.E <= 1;
}

inline double log_w(const Region& R, const FundamentalDomain& d, int x, int y) {
  const auto e = edges_at(R, x, y);
  return log_vertex_weight(classify_vertex(e.S, e.E, e.N, e.W), d.r(x, y));
}

}  // namespace detail

// Checks every vertex of the grid.
inline bool region_admissible(const Region& R) {
  for (int y = R.y0 + 1; y < R.y0 + R.height; ++y)
    for (int x = R.x0 + 1; x < R.x0 + R.width; ++x)
      if (!detail::admissible(detail::edges_at(R, x, y))) return false;
  return true;
}

inline double region_log_weight(const Region& R, const FundamentalDomain& d) {
  double lw = 0;
  for (int y = R.y0 + 1; y < R.y0 + R.height; ++y)
    for (int x = R.x0 + 1; x < R.x0 + R.width; ++x) lw += detail::log_w(R, d, x, y);
  return lw;
}

// Highest admissible extension of the fixed faces (shortest paths over the
// difference constraints). Throws feasibility_error if none exists.
inline Region extend_boundary(Region R) {
  const int W = R.width, H = R.height;
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<int> ub(R.h.size(), inf);
  std::deque<std::size_t> q;
  for (std::size_t i = 0; i < R.h.size(); ++i)
    if (!R.is_free[i]) ub[i] = R.h[i], q.push_back(i);
  // h(v) <= h(u) + w along: east/north +1, west/south 0, north-east diagonal +1
  struct Step {
    int dx, dy, w;
  };
  const Step steps[] = {{1, 0, 1}, {0, 1, 1}, {-1, 0, 0}, {0, -1, 0}, {1, 1, 1}};
  // label-correcting relaxation; weights are small nonnegative integers
  while (!q.empty()) {
    const std::size_t i = q.front();
    q.pop_front();
    const int x = int(i % W), y = int(i / W);
    for (auto s : steps) {
      const int nx = x + s.dx, ny = y + s.dy;
      if (nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
      const std::size_t j = std::size_t(ny) * W + nx;
      if (ub[i] + s.w < ub[j]) {
        ub[j] = ub[i] + s.w;
        if (s.w == 0)
          q.push_front(j);
        else
          q.push_back(j);
      }
    }
  }
  for (std::size_t i = 0; i < R.h.size(); ++i) {
    if (ub[i] >= inf) throw feasibility_error("free face not connected to any fixed face");
    if (!R.is_free[i] && ub[i] != R.h[i]) throw feasibility_error("boundary heights admit no admissible extension");
    R.h[i] = ub[i];
  }
  if (!region_admissible(R)) throw feasibility_error("boundary heights admit no admissible extension");
  return R;
}

// 8 x 8 face grid with a fixed outer ring and a 6 x 6 free interior at
// faces 0..5; ring heights max(0, floor((x+y+2-k)/2)).
inline Region staircase_box(int inner, int k) {
  Region R;
  R.x0 = R.y0 = -1;
  R.width = R.height = inner + 2;
  R.h.assign(std::size_t(R.width) * R.height, 0);
  R.is_free.assign(R.h.size(), 0);
  for (int y = -1; y <= inner; ++y)
    for (int x = -1; x <= inner; ++x) {
      const bool ring = x < 0 || y < 0 || x >= inner || y >= inner;
      R.h[R.idx(x, y)] = std::max(0, int(std::floor((x + y + 2 - k) / 2.0)));
      R.is_free[R.idx(x, y)] = ring ? 0 : 1;
    }
  return extend_boundary(R);
}

// Semi-boxed region at scale n: faces with x,y >= 0, |x-y| < n and x+y < depth
// are free; initial heights max(0, floor((x+y-n)/2)). The fixed ring encodes
// height 0 along the two walls and the staircase at the far end.
inline Region semi_boxed_region(int n, int depth) {
  Region R;
  R.x0 = R.y0 = -1;
  R.width = R.height = depth + 2;
  R.h.assign(std::size_t(R.width) * R.height, 0);
  R.is_free.assign(R.h.size(), 0);
  for (int y = -1; y < depth + 1; ++y)
    for (int x = -1; x < depth + 1; ++x) {
      const bool inside = x >= 0 && y >= 0 && std::abs(x - y) < n && x + y < depth;
      R.h[R.idx(x, y)] = std::max(0, int(std::floor((x + y - n) / 2.0)));
      R.is_free[R.idx(x, y)] = inside ? 1 : 0;
    }
  if (!region_admissible(R)) throw feasibility_error("semi-boxed initial heights are not admissible");
  return R;
}

// ---------------------------------------------------------------- sampler

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (seed, chain); results do not depend on thread count.
inline std::mt19937_64 chain_rng(std::uint64_t seed, std::uint64_t chain) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(chain + 1)));
}

class MetropolisChain {
 public:
  MetropolisChain(Region R, FundamentalDomain d, std::uint64_t seed, std::uint64_t chain = 0)
      : R_(std::move(R)), d_(std::move(d)), rng_(chain_rng(seed, chain)) {
    if (!region_admissible(R_)) R_ = extend_boundary(R_);
    for (int i = 0; i < d_.m1(); ++i)
      for (int j = 0; j < d_.m2(); ++j)
        for (int k = 0; k < 5; ++k) lw_.push_back(log_vertex_weight(VertexType(k), d_.r(i, j)));
    for (int y = R_.y0; y < R_.y0 + R_.height; ++y)
      for (int x = R_.x0; x < R_.x0 + R_.width; ++x)
        if (R_.free_at(x, y)) {
          if (!R_.has_vertex(x, y) || !R_.has_vertex(x + 1, y + 1))
            throw feasibility_error("free faces must not touch the edge of the face grid");
          free_.push_back({x, y});
        }
  }

  const Region& state() const { return R_; }
  std::size_t free_count() const { return free_.size(); }
  std::uint64_t accepted() const { return accepted_; }

  // log weight ratio for h(x,y) += delta; NaN if the move leaves the admissible set
  double log_ratio(int x, int y, int delta) {
    const int vx[4] = {x, x + 1, x, x + 1}, vy[4] = {y, y, y + 1, y + 1};
    double before = 0;
    for (int k = 0; k < 4; ++k) {
      const auto e = detail::edges_at(R_, vx[k], vy[k]);
      before += lw(vx[k], vy[k], classify_vertex(e.S, e.E, e.N, e.W));
    }
    R_.h[R_.idx(x, y)] += delta;
    double after = 0;
    bool ok = true;
    for (int k = 0; k < 4 && ok; ++k) {
      const auto e = detail::edges_at(R_, vx[k], vy[k]);
      if (!detail::admissible(e)) {
        ok = false;
        break;
      }
      after += lw(vx[k], vy[k], classify_vertex(e.S, e.E, e.N, e.W));
    }
    R_.h[R_.idx(x, y)] -= delta;
    return ok ? after - before : std::numeric_limits<double>::quiet_NaN();
  }

  // log P(current -> current with h(x,y) += delta); -inf if inadmissible
  double log_transition(int x, int y, int delta) {
    const double lr = log_ratio(x, y, delta);
    if (std::isnan(lr)) return -INFINITY;
    return -std::log(2.0 * double(free_.size())) + std::min(0.0, lr);
  }

  void set_height(int x, int y, int v) { R_.h[R_.idx(x, y)] = v; }

  // one proposal: uniform free face, uniform sign
  void step() {
    std::uniform_int_distribution<std::size_t> pick(0, free_.size() - 1);
    const auto [x, y] = free_[pick(rng_)];
    const int delta = (rng_() & 1) ? 1 : -1;
    const double lr = log_ratio(x, y, delta);
    if (std::isnan(lr)) return;
    if (lr >= 0 || std::log(std::uniform_real_distribution<double>(0, 1)(rng_)) < lr) {
      R_.h[R_.idx(x, y)] += delta;
      ++accepted_;
    }
  }

  void run(std::uint64_t moves) {
    if (free_.empty()) return;
    for (std::uint64_t i = 0; i < moves; ++i) step();
  }

 private:
  double lw(int x, int y, VertexType t) const {
    return lw_[(std::size_t(pmod(x, d_.m1())) * d_.m2() + pmod(y, d_.m2())) * 5 + int(t)];
  }

  Region R_;
  FundamentalDomain d_;
  std::mt19937_64 rng_;
  std::vector<double> lw_;
  std::vector<std::pair<int, int>> free_;
  std::uint64_t accepted_ = 0;
};

// Default burn-in: 50 * area * log(area) single-face proposals.
inline std::uint64_t default_moves(std::size_t area) {
  const double a = std::max<double>(2, double(area));
  return std::uint64_t(50 * a * std::log(a));
}

// One chain, returns the final state.
inline Region mcmc_sample(const Region& R, const FundamentalDomain& d, std::uint64_t moves, std::uint64_t seed,
                          std::uint64_t chain = 0) {
  MetropolisChain c(R, d, seed, chain);
  c.run(moves);
  return c.state();
}

// Independent chains, one final state each. Threads are optional; output
// order is by chain index either way.
inline std::vector<Region> mcmc_chains(const Region& R, const FundamentalDomain& d, std::uint64_t moves,
                                       std::uint64_t seed, int chains, int threads = 1) {
  std::vector<Region> out(chains);
  auto work = [&](int first, int stride) {
    for (int c = first; c < chains; c += stride) out[c] = mcmc_sample(R, d, moves, seed, std::uint64_t(c));
  };
  threads = std::max(1, std::min(threads, chains));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& t : pool) t.join();
  }
  return out;
}

// ---------------------------------------------------------------- profiles

struct HeightProfile {
  int x0 = 0, y0 = 0, width = 0, height = 0;
  std::vector<double> mean, stderr_;
  std::size_t samples = 0;
  std::size_t idx(int x, int y) const { return std::size_t(y - y0) * width + (x - x0); }
};

inline HeightProfile empirical_height_profile(const std::vector<Region>& samples) {
  if (samples.empty()) throw std::invalid_argument("empirical_height_profile: no samples");
  const Region& f = samples.front();
  HeightProfile P;
  P.x0 = f.x0, P.y0 = f.y0, P.width = f.width, P.height = f.height, P.samples = samples.size();
  const std::size_t n = f.h.size();
  std::vector<double> sum(n, 0), sq(n, 0);
  for (const auto& s : samples) {
    if (s.width != f.width || s.height != f.height || s.x0 != f.x0 || s.y0 != f.y0)
      throw std::invalid_argument("empirical_height_profile: samples on different grids");
    for (std::size_t i = 0; i < n; ++i) sum[i] += s.h[i], sq[i] += double(s.h[i]) * s.h[i];
  }
  const double m = double(samples.size());
  P.mean.resize(n), P.stderr_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    P.mean[i] = sum[i] / m;
    const double var = m > 1 ? std::max(0.0, (sq[i] - m * P.mean[i] * P.mean[i]) / (m - 1)) : 0.0;
    P.stderr_[i] = std::sqrt(var / m);
  }
  return P;
}

// ---------------------------------------------------------------- exact oracle

struct ExactProfile {
  std::vector<double> mean;  // per face, Boltzmann mean height
  std::vector<double> var;   // per face, Boltzmann variance
  std::size_t configurations = 0;
  double log_Z = 0;
};

// Exhaustive enumeration of the free faces in raster order. Small regions only.
inline ExactProfile exact_region_profile(Region R, const FundamentalDomain& d, std::size_t max_configs = 5'000'000) {
  std::vector<std::pair<int, int>> fr;
  for (int y = R.y0; y < R.y0 + R.height; ++y)
    for (int x = R.x0; x < R.x0 + R.width; ++x)
      if (R.free_at(x, y)) fr.push_back({x, y});
  std::vector<std::pair<std::vector<int>, double>> configs;
  // values a face can take are bounded by its west and south neighbours
  std::vector<int> lo(fr.size()), hi(fr.size());
  const Region top = extend_boundary(R);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (configs.size() > max_configs) throw size_error("region too large for exact enumeration");
    if (k == fr.size()) {
      if (!region_admissible(R)) return;
      std::vector<int> hs(fr.size());
      for (std::size_t i = 0; i < fr.size(); ++i) hs[i] = R.at(fr[i].first, fr[i].second);
      configs.push_back({hs, region_log_weight(R, d)});
      return;
    }
    const auto [x, y] = fr[k];
    const int base = std::max(R.at(x - 1, y), R.at(x, y - 1));
    for (int v = base; v <= base + 1 && v <= top.at(x, y); ++v) {
      R.h[R.idx(x, y)] = v;
      // local checks on the vertices whose four faces are now all set
      if (!detail::admissible(detail::edges_at(R, x, y))) continue;
      rec(k + 1);
    }
  };
  rec(0);
  ExactProfile P;
  P.configurations = configs.size();
  double mx = -INFINITY;
  for (auto& c : configs) mx = std::max(mx, c.second);
  std::vector<double> mean(R.h.size(), 0.0), sq(R.h.size(), 0.0);
  double Z = 0;
  for (auto& c : configs) {
    const double w = std::exp(c.second - mx);
    Z += w;
    for (std::size_t i = 0; i < fr.size(); ++i) {
      const auto j = R.idx(fr[i].first, fr[i].second);
      mean[j] += w * c.first[i];
      sq[j] += w * double(c.first[i]) * c.first[i];
    }
  }
  P.var.assign(R.h.size(), 0.0);
  for (std::size_t i = 0; i < R.h.size(); ++i) {
    mean[i] = R.is_free[i] ? mean[i] / Z : R.h[i];
    if (R.is_free[i]) P.var[i] = std::max(0.0, sq[i] / Z - mean[i] * mean[i]);
  }
  P.mean = std::move(mean);
  P.log_Z = mx + std::log(Z);
  return P;
}

// ---------------------------------------------------------------- snapshots
//
// Text format, one record per line:
//   RLE <x0> <y0> <width> <height>
//   V <runs>      vertical edges between face (x-1,y) and (x,y), x = x0+1..,
//   H <runs>      horizontal edges between face (x,y-1) and (x,y), y = y0+1..
//   B <h(x0,y0)>  anchor height
// Runs alternate starting with a run of zeros: "3 2 5" = 000 11 00000.

inline std::string rle_encode_bits(const std::vector<int>& bits) {
  std::ostringstream os;
  int cur = 0;
  std::size_t run = 0;
  bool first = true;
  for (int b : bits) {
    if (b == cur) {
      ++run;
      continue;
    }
    os << (first ? "" : " ") << run;
    first = false;
    cur = b, run = 1;
  }
  os << (first ? "" : " ") << run;
  return os.str();
}

inline std::vector<int> rle_decode_bits(const std::string& s) {
  std::istringstream is(s);
  std::vector<int> out;
  std::size_t run;
  int cur = 0;
  while (is >> run) {
    out.insert(out.end(), run, cur);
    cur ^= 1;
  }
  return out;
}

inline std::string encode_snapshot(const Region& R) {
  std::vector<int> v, hz;
  for (int y = R.y0; y < R.y0 + R.height; ++y)
    for (int x = R.x0 + 1; x < R.x0 + R.width; ++x) v.push_back(R.at(x, y) - R.at(x - 1, y));
  for (int y = R.y0 + 1; y < R.y0 + R.height; ++y)
    for (int x = R.x0; x < R.x0 + R.width; ++x) hz.push_back(R.at(x, y) - R.at(x, y - 1));
  for (int b : v)
    if (b != 0 && b != 1) throw invalid_configuration_error("snapshot: height step outside {0,1}");
  for (int b : hz)
    if (b != 0 && b != 1) throw invalid_configuration_error("snapshot: height step outside {0,1}");
  std::ostringstream os;
  os << "RLE " << R.x0 << ' ' << R.y0 << ' ' << R.width << ' ' << R.height << '\n';
  os << "V " << rle_encode_bits(v) << '\n';
  os << "H " << rle_encode_bits(hz) << '\n';
  os << "B " << R.at(R.x0, R.y0) << '\n';
  return os.str();
}

// Rebuilds heights from a snapshot; the free mask is not stored and comes back empty.
inline Region decode_snapshot(const std::string& text) {
  std::istringstream is(text);
  std::string line, tag;
  Region R;
  std::vector<int> v, hz;
  int base = 0, lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    ls >> tag;
    std::string rest;
    std::getline(ls, rest);
    if (tag == "RLE") {
      std::istringstream hs(rest);
      if (!(hs >> R.x0 >> R.y0 >> R.width >> R.height)) throw parse_error(lineno, "bad RLE header");
      have_header = true;
    } else if (tag == "V") {
      v = rle_decode_bits(rest);
    } else if (tag == "H") {
      hz = rle_decode_bits(rest);
    } else if (tag == "B") {
      base = std::stoi(rest);
    } else {
      throw parse_error(lineno, "unknown record '" + tag + "'");
    }
  }
  if (!have_header) throw parse_error(lineno + 1, "missing RLE header");
  const std::size_t W = R.width, H = R.height;
  if (v.size() != H * (W - 1) || hz.size() != (H - 1) * W) throw parse_error(lineno, "edge counts do not match the grid");
  R.h.assign(W * H, 0);
  R.is_free.assign(W * H, 0);
  for (std::size_t y = 0; y < H; ++y) {
    int cur = y == 0 ? base : R.h[(y - 1) * W] + hz[(y - 1) * W];
    R.h[y * W] = cur;
    for (std::size_t x = 1; x < W; ++x) R.h[y * W + x] = (cur += v[y * (W - 1) + x - 1]);
  }
  for (std::size_t y = 1; y < H; ++y)
    for (std::size_t x = 0; x < W; ++x)
      if (R.h[y * W + x] - R.h[(y - 1) * W + x] != hz[(y - 1) * W + x])
        throw parse_error(lineno, "snapshot is not a consistent height function");
  return R;
}

}  // namespace fivevertex

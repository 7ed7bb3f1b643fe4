#pragma once
// Exhaustive enumeration of path configurations on an N x N torus.

#include <algorithm>
#include <vector>

#include "model.hpp"

namespace fivevertex {

struct EnumeratedConfig {
  MNLPConfig config;
  double weight = 0;
  long Hx = 0, Hy = 0;
};

namespace detail {

// Depth-first over vertices in raster order; each vertex fixes its still
// unknown incident edges and is checked as soon as all four are known.
class TorusEnumerator {
 public:
  TorusEnumerator(int N, const FundamentalDomain& d, FieldPoint f) : N_(N), d_(d), f_(f) {
    V_.assign(N * N, -1);
    H_.assign(N * N, -1);
  }

  std::vector<EnumeratedConfig> run() {
    rec(0);
    return std::move(out_);
  }

 private:
  int& V(int x, int y) { return V_[pmod(y, N_) * N_ + pmod(x, N_)]; }
  int& H(int x, int y) { return H_[pmod(y, N_) * N_ + pmod(x, N_)]; }

  void rec(int k) {
    if (k == N_ * N_) {
      emit();
      return;
    }
    const int x = k % N_, y = k / N_;
    int* e[4] = {&V(x, y - 1), &H(x, y), &V(x, y), &H(x - 1, y)};  // S E N W
    int unknown[4], nu = 0;
    // on small tori two of the four slots can be the same edge
    for (int i = 0; i < 4; ++i)
      if (*e[i] < 0 && std::none_of(unknown, unknown + nu, [&](int j) { return e[j] == e[i]; })) unknown[nu++] = i;
    for (int bits = 0; bits < (1 << nu); ++bits) {
      for (int i = 0; i < nu; ++i) *e[unknown[i]] = (bits >> i) & 1;
      const int S = *e[0], E = *e[1], Nn = *e[2], W = *e[3];
      if (S + E == Nn + W && S + E <= 1) rec(k + 1);
    }
    for (int i = 0; i < nu; ++i) *e[unknown[i]] = -1;
  }

  void emit() {
    EnumeratedConfig c;
    c.config = MNLPConfig::empty(N_, N_, Topology::Torus);
    for (int i = 0; i < N_ * N_; ++i) {
      c.config.vertical_edges[i] = std::uint8_t(V_[i]);
      c.config.horizontal_edges[i] = std::uint8_t(H_[i]);
    }
    c.weight = config_weight(c.config, d_, f_);
    for (int x = 0; x < N_; ++x) c.Hx += V(x, 0);
    for (int y = 0; y < N_; ++y) c.Hy += H(0, y);
    out_.push_back(std::move(c));
  }

  int N_;
  const FundamentalDomain& d_;
  FieldPoint f_;
  std::vector<int> V_, H_;
  std::vector<EnumeratedConfig> out_;
};

}  // namespace detail

inline std::vector<EnumeratedConfig> enumerate_torus(int N, const FundamentalDomain& d, FieldPoint f) {
  if (N < 1) throw std::invalid_argument("enumerate_torus: N must be positive");
  if (N % d.m1() || N % d.m2()) throw std::invalid_argument("enumerate_torus: N must be a multiple of m1 and m2");
  if (N > 4 * std::max(d.m1(), d.m2()) || N > 6) throw size_error("enumerate_torus: N too large to enumerate");
  return detail::TorusEnumerator(N, d, f).run();
}

inline double partition_function(const std::vector<EnumeratedConfig>& cs) {
  double z = 0;
  for (const auto& c : cs) z += c.weight;
  return z;
}

}  // namespace fivevertex

#pragma once
// CSV with a metadata comment line, and SVG polylines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "model.hpp"

namespace fivevertex {

inline constexpr const char* kToolVersion = "1.0.0";

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Canonical text of a domain; the hash of this string identifies a config.
inline std::string canonical_domain(const FundamentalDomain& d) {
  std::string s = "alphas=";
  for (std::size_t i = 0; i < d.alphas.size(); ++i) s += (i ? "," : "") + fmt_num(d.alphas[i]);
  s += ";betas=";
  for (std::size_t i = 0; i < d.betas.size(); ++i) s += (i ? "," : "") + fmt_num(d.betas[i]);
  return s;
}

inline std::string config_hash(const FundamentalDomain& d) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a(canonical_domain(d)));
  return buf;
}

class CsvWriter {
 public:
  // params are written in key order so the line is deterministic
  CsvWriter(const std::string& path, const FundamentalDomain& d, const std::map<std::string, std::string>& params,
            const std::vector<std::string>& header)
      : os_(path) {
    if (!os_) throw std::runtime_error("cannot open " + path + " for writing");
    os_ << "# tool=fivevertex version=" << kToolVersion << " config_hash=" << config_hash(d) << " regime="
        << regime_name(d.regime) << " domain=" << canonical_domain(d);
    for (const auto& [k, v] : params) os_ << ' ' << k << '=' << v;
    os_ << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
    ncol_ = header.size();
  }

  template <class... T>
  void row(const T&... cells) {
    static_assert(sizeof...(T) > 0);
    std::size_t i = 0;
    ((os_ << (i++ ? "," : "") << cell(cells)), ...);
    os_ << '\n';
    if (i != ncol_) throw std::logic_error("csv row width does not match header");
  }

 private:
  static std::string cell(double v) { return fmt_num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::ofstream os_;
  std::size_t ncol_ = 0;
};

struct Polyline {
  std::vector<std::pair<double, double>> pts;
  std::string stroke = "black";
};

// Polylines in data coordinates, y up. Non-finite points split a polyline.
inline void write_svg(const std::string& path, const std::vector<Polyline>& lines, const std::string& title,
                      double size = 480) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& l : lines)
    for (auto [x, y] : l.pts)
      if (std::isfinite(x) && std::isfinite(y)) {
        xmin = std::min(xmin, x), xmax = std::max(xmax, x);
        ymin = std::min(ymin, y), ymax = std::max(ymax, y);
      }
  if (!(xmin < xmax)) xmin -= 1, xmax += 1;
  if (!(ymin < ymax)) ymin -= 1, ymax += 1;
  const double pad = 20, span = std::max(xmax - xmin, ymax - ymin);
  auto X = [&](double x) { return pad + (x - xmin) / span * (size - 2 * pad); };
  auto Y = [&](double y) { return size - pad - (y - ymin) / span * (size - 2 * pad); };
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  os << "<title>" << title << "</title>\n";
  for (const auto& l : lines) {
    std::string pts;
    auto flush = [&] {
      if (!pts.empty())
        os << "<polyline fill=\"none\" stroke=\"" << l.stroke << "\" stroke-width=\"1\" points=\"" << pts << "\"/>\n";
      pts.clear();
    };
    for (auto [x, y] : l.pts) {
      if (!std::isfinite(x) || !std::isfinite(y)) {
        flush();
        continue;
      }
      pts += (pts.empty() ? "" : " ") + fmt_num(X(x)) + "," + fmt_num(Y(y));
    }
    flush();
  }
  os << "</svg>\n";
}

}  // namespace fivevertex

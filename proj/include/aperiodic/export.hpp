#pragma once

// CSV, JSON and static SVG writers. Floats are printed with %.17g.

#include "correlations.hpp"
#include "diffraction.hpp"
#include "model_set.hpp"
#include "text.hpp"
#include "window_ifs.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace aperiodic {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// --- CSV -------------------------------------------------------------------------

inline void write_points_csv(std::ostream& os, const TypedPointSet& pts) {
  os << "position_float,m,n,type\n";
  for (const auto& p : pts.points) os << fmt(p.x.to_double()) << ',' << p.x.m() << ',' << p.x.n() << ',' << p.type << '\n';
}

/// One row per merged component; lo_num/den and hi_num/den are the exact ends.
inline void write_intervals_csv(std::ostream& os, const WindowApprox& w) {
  os << "lo,hi,letter,depth,lo_num,hi_num,den\n";
  const double d = static_cast<double>(w.den);
  for (std::size_t a = 0; a < w.size(); ++a)
    for (const auto& p : w.parts[a])
      os << fmt(p.lo.to_double() / d) << ',' << fmt(p.hi.to_double() / d) << ',' << w.letters[a] << ',' << w.depth << ','
         << format_golden_int(p.lo) << ',' << format_golden_int(p.hi) << ',' << w.den << '\n';
}

struct CorrelationRow {
  GoldenInt z;
  std::string pair;
  GoldenNum nu;
};

inline void write_correlations_csv(std::ostream& os, const std::vector<CorrelationRow>& rows) {
  os << "z_float,m,n,pair,nu,nu_exact\n";
  for (const auto& r : rows)
    os << fmt(r.z.to_double()) << ',' << r.z.m() << ',' << r.z.n() << ',' << r.pair << ',' << fmt(to_float(r.nu)) << ','
       << format_pretty(r.nu) << '\n';
}

inline void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "m,n,k,re,im,I\n";
  for (const auto& p : s.peaks)
    os << p.q.y.m() << ',' << p.q.y.n() << ',' << fmt(p.k) << ',' << fmt(p.amplitude.real()) << ',' << fmt(p.amplitude.imag())
       << ',' << fmt(p.intensity) << '\n';
}

// --- JSON ------------------------------------------------------------------------

inline nlohmann::json spectrum_json(const Spectrum& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : s.peaks) {
    out.push_back({{"m", static_cast<long long>(p.q.y.m())},
                   {"n", static_cast<long long>(p.q.y.n())},
                   {"k", p.k},
                   {"re", p.amplitude.real()},
                   {"im", p.amplitude.imag()},
                   {"I", p.intensity}});
  }
  return out;
}

inline void write_spectrum_json(std::ostream& os, const Spectrum& s) { os << spectrum_json(s).dump(1) << '\n'; }

// --- SVG -------------------------------------------------------------------------

namespace detail {

inline void svg_open(std::ostream& os, int w, int h) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' '
     << h << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline void svg_ticks(std::ostream& os, double lo, double hi, double x0, double x1, double y) {
  const double span = hi - lo;
  const double step = std::pow(10.0, std::floor(std::log10(span)));
  os << "<line x1=\"" << x0 << "\" y1=\"" << y << "\" x2=\"" << x1 << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12; t += step) {
    const double x = x0 + (t - lo) / span * (x1 - x0);
    os << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x << "\" y2=\"" << y + 5 << "\" stroke=\"black\"/>"
       << "<text x=\"" << x << "\" y=\"" << y + 18 << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(std::round(t / step) * step)
       << "</text>\n";
  }
}

}  // namespace detail

/// Vertical bar per peak, height proportional to intensity.
inline void write_bar_chart_svg(std::ostream& os, const Spectrum& s, double kmin, double kmax) {
  const int w = 900, h = 320, left = 40, right = 20, top = 20, base = 280;
  detail::svg_open(os, w, h);
  const double imax = std::max(s.max_intensity(), 1e-300);
  for (const auto& p : s.peaks) {
    if (p.k < kmin || p.k > kmax) continue;
    const double x = left + (p.k - kmin) / (kmax - kmin) * (w - left - right);
    const double y = base - p.intensity / imax * (base - top);
    os << "<line x1=\"" << fmt(x) << "\" y1=\"" << base << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(y)
       << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  detail::svg_ticks(os, kmin, kmax, left, w - right, base);
  os << "</svg>\n";
}

/// One strip per letter, rasterised to pixel columns so deep approximants stay small.
inline void write_strip_chart_svg(std::ostream& os, const WindowApprox& wa) {
  const int w = 900, left = 40, right = 20, strip = 40, gap = 30, top = 20;
  const int cols = w - left - right;
  double lo = 1e300, hi = -1e300;
  for (std::size_t a = 0; a < wa.size(); ++a)
    for (const auto& [l, r] : wa.as_double(a)) lo = std::min(lo, l), hi = std::max(hi, r);
  if (!(lo < hi)) lo = -1, hi = 1;
  const int h = top + static_cast<int>(wa.size()) * (strip + gap) + 20;
  detail::svg_open(os, w, h);
  for (std::size_t a = 0; a < wa.size(); ++a) {
    std::vector<char> on(cols, 0);
    for (const auto& [l, r] : wa.as_double(a)) {
      int c0 = static_cast<int>(std::floor((l - lo) / (hi - lo) * cols));
      int c1 = static_cast<int>(std::floor((r - lo) / (hi - lo) * cols));
      c0 = std::clamp(c0, 0, cols - 1);
      c1 = std::clamp(c1, 0, cols - 1);
      for (int c = c0; c <= c1; ++c) on[c] = 1;
    }
    const int y = top + static_cast<int>(a) * (strip + gap);
    os << "<text x=\"8\" y=\"" << y + strip / 2 + 4 << "\" font-size=\"13\">" << wa.letters[a] << "</text>\n";
    for (int c = 0; c < cols;) {
      if (!on[c]) {
        ++c;
        continue;
      }
      int e = c;
      while (e < cols && on[e]) ++e;
      os << "<rect x=\"" << left + c << "\" y=\"" << y << "\" width=\"" << e - c << "\" height=\"" << strip << "\" fill=\"black\"/>\n";
      c = e;
    }
  }
  detail::svg_ticks(os, lo, hi, left, w - right, h - 25);
  os << "</svg>\n";
}

struct Peak2D {
  double k1 = 0, k2 = 0, intensity = 0;
};

/// Disk per peak with area proportional to intensity.
inline void write_disk_chart_svg(std::ostream& os, const std::vector<Peak2D>& peaks, double kmax) {
  const int size = 600;
  detail::svg_open(os, size, size);
  double imax = 1e-300;
  for (const auto& p : peaks) imax = std::max(imax, p.intensity);
  const double scale = size / (2 * kmax);
  const double rmax = 0.04 * size;
  for (const auto& p : peaks) {
    const double r = rmax * std::sqrt(p.intensity / imax);
    os << "<circle cx=\"" << fmt(size / 2.0 + p.k1 * scale) << "\" cy=\"" << fmt(size / 2.0 - p.k2 * scale) << "\" r=\"" << fmt(r)
       << "\" fill=\"black\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace aperiodic

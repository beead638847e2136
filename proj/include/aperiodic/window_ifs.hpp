#pragma once

// Graph-directed IFS for the windows: W_a = U_b (c W_b + T*_ab), c = star(lambda).

#include "golden.hpp"
#include "interval.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "substitution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace aperiodic {

struct NotPisotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientDepth : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphIFS {
  std::string letters;
  GoldenNum lambda;
  GoldenNum contraction;
  std::vector<GoldenNum> lengths;
  std::vector<GoldenNum> frequencies;
  std::vector<std::vector<std::vector<GoldenNum>>> maps;  // maps[alpha][beta] = star(T_ab)

  std::size_t size() const { return letters.size(); }
  const std::vector<GoldenNum>& translations(std::size_t alpha, std::size_t beta) const { return maps[alpha][beta]; }
  std::size_t map_count(std::size_t alpha, std::size_t beta) const { return maps[alpha][beta].size(); }
  std::size_t index(char c) const {
    const auto p = letters.find(c);
    if (p == std::string::npos) throw std::invalid_argument(std::string("unknown letter ") + c);
    return p;
  }
};

inline GraphIFS build_graph_ifs(const GeometricInflation& inf) {
  GraphIFS ifs;
  ifs.letters = inf.rule().letters();
  ifs.lambda = inf.lambda();
  ifs.contraction = star(inf.lambda());
  if (!(ifs.contraction.abs() < GoldenNum(1)))
    throw NotPisotError("inflation factor is not a PV number: |star(lambda)| >= 1");
  ifs.lengths = inf.lengths();
  ifs.frequencies = inf.pf().right;
  const std::size_t k = inf.size();
  ifs.maps.assign(k, std::vector<std::vector<GoldenNum>>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (const auto& t : inf.offsets(a, b)) ifs.maps[a][b].push_back(star(t));
  return ifs;
}

inline GraphIFS build_graph_ifs(const SubstRule& rule) { return build_graph_ifs(geometric_inflation(rule)); }

/// Exact window volumes: proportional to the letter frequencies, total sqrt5 / <lengths|freq>.
inline std::vector<GoldenNum> volume_vector(const GraphIFS& ifs) {
  GoldenNum mean = 0;
  for (std::size_t a = 0; a < ifs.size(); ++a) mean += ifs.lengths[a] * ifs.frequencies[a];
  const GoldenNum total = GoldenNum::sqrt5() / mean;
  std::vector<GoldenNum> v;
  for (const auto& f : ifs.frequencies) v.push_back(total * f);
  return v;
}

/// Closed intervals with the exact volumes, centred on the attractor barycentres.
inline std::vector<Window> exact_seed(const GraphIFS& ifs) {
  const std::size_t k = ifs.size();
  const std::vector<GoldenNum> v = volume_vector(ifs);
  const GoldenNum& c = ifs.contraction;
  const GoldenNum ac = c.abs();
  // v_a b_a = sum_b sum_t |c| v_b (c b_b + t)
  GoldenMatrix a(k, k);
  std::vector<GoldenNum> rhs(k, GoldenNum(0));
  for (std::size_t i = 0; i < k; ++i) {
    a(i, i) += v[i];
    for (std::size_t j = 0; j < k; ++j) {
      const auto& ts = ifs.maps[i][j];
      a(i, j) -= ac * c * GoldenNum(static_cast<long long>(ts.size())) * v[j];
      for (const auto& t : ts) rhs[i] += ac * v[j] * t;
    }
  }
  const std::vector<GoldenNum> bary = solve(a, rhs);
  std::vector<Window> seed;
  const GoldenNum half(Rational(1, 2));
  for (std::size_t i = 0; i < k; ++i) seed.push_back(Window::closed(bary[i] - v[i] * half, bary[i] + v[i] * half));
  return seed;
}

/// Exact convex hulls of the attractor components.
inline std::vector<Window> attractor_hull(const GraphIFS& ifs) {
  const std::size_t k = ifs.size();
  const double c = to_float(ifs.contraction);
  const bool flip = c < 0;
  std::vector<double> lo(k), hi(k);
  const auto seed = exact_seed(ifs);
  for (std::size_t i = 0; i < k; ++i) {
    lo[i] = to_float(seed[i].lo());
    hi[i] = to_float(seed[i].hi());
  }
  struct Choice {
    std::size_t beta;
    std::size_t t;
  };
  std::vector<Choice> lo_choice(k), hi_choice(k);
  for (int it = 0; it < 400; ++it) {
    std::vector<double> nlo(k, INFINITY), nhi(k, -INFINITY);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        for (std::size_t s = 0; s < ifs.maps[a][b].size(); ++s) {
          const double t = to_float(ifs.maps[a][b][s]);
          const double l = (flip ? c * hi[b] : c * lo[b]) + t;
          const double h = (flip ? c * lo[b] : c * hi[b]) + t;
          if (l < nlo[a]) nlo[a] = l, lo_choice[a] = {b, s};
          if (h > nhi[a]) nhi[a] = h, hi_choice[a] = {b, s};
        }
    lo = nlo;
    hi = nhi;
  }
  // Unknowns: lo_0..lo_{k-1}, hi_0..hi_{k-1}.
  GoldenMatrix m(2 * k, 2 * k);
  std::vector<GoldenNum> rhs(2 * k, GoldenNum(0));
  for (std::size_t a = 0; a < k; ++a) {
    const Choice& l = lo_choice[a];
    m(a, a) += 1;
    m(a, flip ? k + l.beta : l.beta) -= ifs.contraction;
    rhs[a] = ifs.maps[a][l.beta][l.t];
    const Choice& h = hi_choice[a];
    m(k + a, k + a) += 1;
    m(k + a, flip ? h.beta : k + h.beta) -= ifs.contraction;
    rhs[k + a] = ifs.maps[a][h.beta][h.t];
  }
  const std::vector<GoldenNum> x = solve(m, rhs);
  std::vector<Window> out;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b)
      for (const auto& t : ifs.maps[a][b]) {
        const Window img = Window::closed(x[b], x[k + b]).scaled(ifs.contraction).translated(t);
        if (img.lo() < x[a] || img.hi() > x[k + a]) throw std::runtime_error("attractor hull did not close");
      }
    out.push_back(Window::closed(x[a], x[k + a]));
  }
  return out;
}

/// Closed interval with endpoints lo/den, hi/den.
struct ScaledInterval {
  GoldenInt lo;
  GoldenInt hi;
  friend bool operator==(const ScaledInterval&, const ScaledInterval&) = default;
};

struct WindowApprox {
  int depth = 0;
  std::string letters;
  std::int64_t den = 1;
  std::vector<std::vector<ScaledInterval>> parts;  // sorted, disjoint, non-touching
  std::vector<GoldenNum> volumes;
  GoldenNum overlap = 0;  // measure discarded by merging, summed over all steps
  bool stationary = false;  // the last step reproduced its input
  double contraction = 0;
  double seed_max_length = 0;

  std::size_t size() const { return letters.size(); }
  std::size_t count(std::size_t alpha) const { return parts[alpha].size(); }

  Window interval(std::size_t alpha, std::size_t i) const {
    const GoldenNum d(static_cast<long long>(den));
    return Window::closed(GoldenNum(parts[alpha][i].lo) / d, GoldenNum(parts[alpha][i].hi) / d);
  }

  std::vector<Window> intervals(std::size_t alpha) const {
    std::vector<Window> out;
    for (std::size_t i = 0; i < parts[alpha].size(); ++i) out.push_back(interval(alpha, i));
    return out;
  }

  std::vector<std::pair<double, double>> as_double(std::size_t alpha) const {
    std::vector<std::pair<double, double>> out;
    out.reserve(parts[alpha].size());
    const double d = static_cast<double>(den);
    for (const auto& p : parts[alpha]) out.emplace_back(p.lo.to_double() / d, p.hi.to_double() / d);
    return out;
  }

  GoldenNum total_volume() const {
    GoldenNum s = 0;
    for (const auto& v : volumes) s += v;
    return s;
  }
};

namespace detail {

struct Acc128 {
  __int128 m = 0;
  __int128 n = 0;
  void add(GoldenInt x) {
    m += x.m();
    n += x.n();
  }
  GoldenNum value(std::int64_t den) const {
    auto big = [](__int128 v) {
      const bool neg = v < 0;
      unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
      Integer r = static_cast<std::uint64_t>(u >> 64);
      r <<= 64;
      r += static_cast<std::uint64_t>(u);
      return neg ? Integer(-r) : r;
    };
    const GoldenNum d(static_cast<long long>(den));
    return (GoldenNum(Rational(big(m))) + GoldenNum(Rational(big(n))) * GoldenNum::tau()) / d;
  }
};

inline std::int64_t ifs_denominator(const GraphIFS& ifs, const std::vector<Window>& seed) {
  std::int64_t den = 1;
  for (const auto& w : seed) {
    den = lcm64(den, ScaledGolden::denominator_of(w.lo()));
    den = lcm64(den, ScaledGolden::denominator_of(w.hi()));
  }
  for (const auto& row : ifs.maps)
    for (const auto& ts : row)
      for (const auto& t : ts) den = lcm64(den, ScaledGolden::denominator_of(t));
  return den;
}

}  // namespace detail

inline WindowApprox seed_approx(const GraphIFS& ifs, const std::vector<Window>& seed) {
  if (seed.size() != ifs.size()) throw std::invalid_argument("seed needs one window per letter");
  if (!ifs.contraction.to_golden_int()) throw std::invalid_argument("contraction must lie in Z[tau]");
  WindowApprox w;
  w.letters = ifs.letters;
  w.den = detail::ifs_denominator(ifs, seed);
  w.contraction = to_float(ifs.contraction);
  w.parts.resize(ifs.size());
  for (std::size_t a = 0; a < ifs.size(); ++a) {
    w.parts[a].push_back({detail::ScaledGolden::from(seed[a].lo(), w.den).num,
                          detail::ScaledGolden::from(seed[a].hi(), w.den).num});
    w.volumes.push_back(seed[a].volume());
    w.seed_max_length = std::max(w.seed_max_length, to_float(seed[a].volume()));
  }
  return w;
}

namespace detail {

// Streams the merged image of letter a in increasing order. The images of each
// (beta, t) are already sorted, so a k-way merge replaces a sort.
template <class Sink>
void merge_images(const GraphIFS& ifs, const WindowApprox& in, std::size_t a, Sink&& sink) {
  const GoldenInt c = *ifs.contraction.to_golden_int();
  const bool flip = c.sign() < 0;
  struct Cursor {
    const std::vector<ScaledInterval>* src;
    GoldenInt shift;
    std::size_t pos;
    ScaledInterval cur;
  };
  auto image = [&](const ScaledInterval& p, GoldenInt shift) {
    return flip ? ScaledInterval{c * p.hi + shift, c * p.lo + shift} : ScaledInterval{c * p.lo + shift, c * p.hi + shift};
  };
  auto at = [&](const Cursor& cu) -> const ScaledInterval& {
    return flip ? (*cu.src)[cu.src->size() - 1 - cu.pos] : (*cu.src)[cu.pos];
  };
  std::vector<Cursor> cursors;
  for (std::size_t b = 0; b < ifs.size(); ++b)
    for (const auto& t : ifs.maps[a][b]) {
      if (in.parts[b].empty()) continue;
      const GoldenInt shift = *(t * GoldenNum(static_cast<long long>(in.den))).to_golden_int();
      Cursor cu{&in.parts[b], shift, 0, {}};
      cu.cur = image(at(cu), shift);
      cursors.push_back(cu);
    }
  bool open = false;
  ScaledInterval run{};
  while (!cursors.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cursors.size(); ++i)
      if (cursors[i].cur.lo < cursors[best].cur.lo) best = i;
    const ScaledInterval next = cursors[best].cur;
    Cursor& cu = cursors[best];
    if (++cu.pos < cu.src->size()) {
      cu.cur = image(at(cu), cu.shift);
    } else {
      cursors.erase(cursors.begin() + static_cast<std::ptrdiff_t>(best));
    }
    if (open && next.lo <= run.hi) {
      if (run.hi < next.hi) run.hi = next.hi;
    } else {
      if (open) sink(run);
      run = next;
      open = true;
    }
  }
  if (open) sink(run);
}

inline GoldenNum image_volume(const GraphIFS& ifs, const WindowApprox& in, std::size_t a) {
  GoldenNum v = 0;
  for (std::size_t b = 0; b < ifs.size(); ++b)
    v += ifs.contraction.abs() * GoldenNum(static_cast<long long>(ifs.maps[a][b].size())) * in.volumes[b];
  return v;
}

}  // namespace detail

/// One application of the set equation followed by a merge of overlapping or touching pieces.
inline WindowApprox iterate_step(const GraphIFS& ifs, const WindowApprox& in) {
  const std::size_t k = ifs.size();
  WindowApprox out;
  out.depth = in.depth + 1;
  out.letters = in.letters;
  out.den = in.den;
  out.contraction = in.contraction;
  out.seed_max_length = in.seed_max_length;
  out.overlap = in.overlap;
  out.parts.resize(k);
  out.volumes.assign(k, GoldenNum(0));
  std::vector<GoldenNum> overlap(k, GoldenNum(0));
  parallel_chunks(k, 1, [&](std::size_t a0, std::size_t a1) {
    for (std::size_t a = a0; a < a1; ++a) {
      std::vector<ScaledInterval> merged;
      detail::Acc128 acc;
      detail::merge_images(ifs, in, a, [&](const ScaledInterval& p) {
        acc.add(p.hi - p.lo);
        merged.push_back(p);
      });
      out.volumes[a] = acc.value(in.den);
      overlap[a] = detail::image_volume(ifs, in, a) - out.volumes[a];
      out.parts[a] = std::move(merged);
    }
  });
  for (const auto& o : overlap) out.overlap += o;
  out.stationary = out.parts == in.parts;
  return out;
}

/// Exact per-letter volumes and total overlap one step beyond in, without storing the pieces.
struct StepMeasure {
  std::vector<GoldenNum> volumes;
  GoldenNum overlap;  // cumulative, including in.overlap
  std::vector<std::size_t> counts;
};

inline StepMeasure measure_step(const GraphIFS& ifs, const WindowApprox& in) {
  StepMeasure m;
  m.overlap = in.overlap;
  for (std::size_t a = 0; a < ifs.size(); ++a) {
    detail::Acc128 acc;
    std::size_t n = 0;
    detail::merge_images(ifs, in, a, [&](const ScaledInterval& p) {
      acc.add(p.hi - p.lo);
      ++n;
    });
    m.volumes.push_back(acc.value(in.den));
    m.overlap += detail::image_volume(ifs, in, a) - m.volumes.back();
    m.counts.push_back(n);
  }
  return m;
}

inline WindowApprox iterate_windows(const GraphIFS& ifs, const std::vector<Window>& seed, int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  WindowApprox w = seed_approx(ifs, seed);
  for (int d = 0; d < depth; ++d) w = iterate_step(ifs, w);
  return w;
}

inline WindowApprox iterate_windows(const GraphIFS& ifs, int depth) {
  return iterate_windows(ifs, exact_seed(ifs), depth);
}

/// Hausdorff distance between finite unions of closed intervals (sorted, disjoint).
template <class T>
T hausdorff_distance(const std::vector<std::pair<T, T>>& a, const std::vector<std::pair<T, T>>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("Hausdorff distance of an empty set");
  auto half = [](const T& x) {
    if constexpr (std::is_same_v<T, GoldenNum>) {
      return x * GoldenNum(Rational(1, 2));
    } else {
      return x / 2;
    }
  };
  auto absv = [](const T& x) {
    if constexpr (std::is_same_v<T, GoldenNum>) {
      return x.abs();
    } else {
      return std::fabs(x);
    }
  };
  auto directed = [&](const std::vector<std::pair<T, T>>& p, const std::vector<std::pair<T, T>>& q) {
    auto dist = [&](const T& x) {
      auto it = std::lower_bound(q.begin(), q.end(), x, [](const std::pair<T, T>& iv, const T& v) { return iv.second < v; });
      if (it != q.end() && !(x < it->first)) return T(0);
      T d = it != q.end() ? T(it->first - x) : absv(x - q.back().second);
      if (it != q.begin()) {
        const T l = x - std::prev(it)->second;
        if (l < d) d = l;
      }
      return d;
    };
    T best(0);
    std::size_t g = 0;  // gap index: between q[g] and q[g+1]
    for (const auto& iv : p) {
      for (const T& x : {iv.first, iv.second}) {
        const T d = dist(x);
        if (best < d) best = d;
      }
      while (g + 1 < q.size() && !(iv.first < half(q[g].second + q[g + 1].first))) ++g;
      for (std::size_t h = g; h + 1 < q.size(); ++h) {
        const T mid = half(q[h].second + q[h + 1].first);
        if (iv.second < mid) break;
        const T d = half(q[h + 1].first - q[h].second);
        if (best < d) best = d;
      }
    }
    return best;
  };
  const T x = directed(a, b);
  const T y = directed(b, a);
  return x < y ? y : x;
}

inline double hausdorff_distance(const WindowApprox& p, std::size_t pa, const WindowApprox& q, std::size_t qa) {
  return hausdorff_distance(p.as_double(pa), q.as_double(qa));
}

struct BoxCountEstimate {
  std::vector<double> box_sizes;
  std::vector<std::size_t> counts;
  double slope = 0;
  double residual = 0;
};

/// Dyadic box counting of the combined boundary of all letters' windows.
inline BoxCountEstimate boundary_dimension(const WindowApprox& w) {
  const double resolution = std::pow(std::fabs(w.contraction), w.depth) * w.seed_max_length;
  int top = static_cast<int>(std::floor(std::log2(1.0 / resolution))) - 2;
  if (w.stationary) top = std::max(top, 12);
  if (top < 5) throw InsufficientDepth("approximant resolves fewer than 5 dyadic scales; increase the depth");
  std::vector<double> ends;
  for (std::size_t a = 0; a < w.size(); ++a)
    for (const auto& [lo, hi] : w.as_double(a)) {
      ends.push_back(lo);
      ends.push_back(hi);
    }
  std::sort(ends.begin(), ends.end());
  BoxCountEstimate est;
  std::vector<double> xs, ys;
  for (int j = 1; j <= top; ++j) {
    const double h = std::ldexp(1.0, -j);
    std::size_t n = 0;
    double last = NAN;
    for (double e : ends) {
      const double box = std::floor(e / h);
      if (!(box == last)) ++n, last = box;
    }
    est.box_sizes.push_back(h);
    est.counts.push_back(n);
    xs.push_back(j);
    ys.push_back(std::log2(static_cast<double>(n)));
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sx += xs[i], sy += ys[i];
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  est.slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + est.slope * (xs[i] - mx));
    ss += r * r;
  }
  est.residual = std::sqrt(ss / m);
  return est;
}

}  // namespace aperiodic

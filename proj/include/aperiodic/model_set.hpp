#pragma once

// Cut-and-project sets over Z[tau] with the star map as internal embedding:
// enumeration, coding windows, patch frequencies, equidistribution and
// difference sets.

#include "golden.hpp"
#include "interval.hpp"
#include "parallel.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aperiodic {

/// Per-letter windows whose union is one interval.
class ModelSetSpec {
 public:
  ModelSetSpec(std::string letters, std::vector<Window> windows)
      : letters_(std::move(letters)), windows_(std::move(windows)), total_(windows_.at(0)) {
    if (letters_.size() != windows_.size() || letters_.empty()) {
      throw std::invalid_argument("one window per letter required");
    }
    std::vector<std::size_t> order(windows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return windows_[i].lo() < windows_[j].lo(); });
    for (std::size_t k = 1; k < order.size(); ++k) {
      const Window& p = windows_[order[k - 1]];
      const Window& q = windows_[order[k]];
      if (!(p.hi() == q.lo()) || p.hi_closed() == q.lo_closed()) {
        throw std::invalid_argument("letter windows must tile one interval without overlap");
      }
    }
    const Window& first = windows_[order.front()];
    const Window& last = windows_[order.back()];
    total_ = Window(first.lo(), last.hi(), first.lo_closed(), last.hi_closed());
  }

  /// Two-letter split of a total window: a takes the right share vol*(tau-1),
  /// b the left share; the split point inherits the end convention of W.
  static ModelSetSpec fibonacci(const Window& total) {
    const GoldenNum tau = GoldenNum::tau();
    const GoldenNum s = total.hi() - total.volume() * (tau - 1);
    Window wa(s, total.hi(), total.lo_closed(), total.hi_closed());
    Window wb(total.lo(), s, total.lo_closed(), !total.lo_closed());
    return ModelSetSpec("ab", {wa, wb});
  }

  /// W = (-1, tau-1].
  static ModelSetSpec fibonacci() {
    return fibonacci(Window(GoldenNum(-1), GoldenNum::tau() - 1, false, true));
  }

  const std::string& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  const Window& total() const { return total_; }
  const std::vector<Window>& windows() const { return windows_; }
  const Window& window(std::size_t i) const { return windows_.at(i); }

  std::size_t index(char c) const {
    const std::size_t i = letters_.find(c);
    if (i == std::string::npos) throw std::invalid_argument(std::string("unknown letter '") + c + "'");
    return i;
  }
  const Window& window(char c) const { return windows_[index(c)]; }

  ModelSetSpec translated(const GoldenNum& t) const {
    std::vector<Window> ws;
    for (const auto& w : windows_) ws.push_back(w.translated(t));
    return {letters_, ws};
  }

 private:
  std::string letters_;
  std::vector<Window> windows_;
  Window total_;
};

struct TypedPoint {
  GoldenInt x;
  char type;
  friend bool operator==(const TypedPoint&, const TypedPoint&) = default;
};

struct TypedPointSet {
  std::vector<TypedPoint> points;
  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

namespace detail {

/// floor(v / den) for den > 0, exact.
inline std::int64_t floor_scaled(GoldenInt v, std::int64_t den) {
  auto k = static_cast<std::int64_t>(std::floor(v.to_double() / static_cast<double>(den)));
  while ((GoldenInt(checked_mul(k, den)) - v).sign() > 0) --k;
  while ((GoldenInt(checked_mul(k + 1, den)) - v).sign() <= 0) ++k;
  return k;
}

inline std::int64_t ceil_scaled(GoldenInt v, std::int64_t den) { return -floor_scaled(-v, den); }

/// Exact window membership over a common denominator.
class ScaledWindow {
 public:
  explicit ScaledWindow(const Window& w) : w_(w) {
    const std::int64_t den = lcm64(ScaledGolden::denominator_of(w.lo()), ScaledGolden::denominator_of(w.hi()));
    lo_ = ScaledGolden::from(w.lo(), den);
    hi_ = ScaledGolden::from(w.hi(), den);
  }

  bool contains(GoldenInt x) const {
    const int sl = compare_scaled(x, lo_);
    const int sh = compare_scaled(x, hi_);
    return (w_.lo_closed() ? sl >= 0 : sl > 0) && (w_.hi_closed() ? sh <= 0 : sh < 0);
  }

  const ScaledGolden& lo() const { return lo_; }
  const ScaledGolden& hi() const { return hi_; }
  const Window& window() const { return w_; }

 private:
  Window w_;
  ScaledGolden lo_;
  ScaledGolden hi_;
};

}  // namespace detail

/// All x = m + n*tau with x in `region` and star(x) in `internal`, ascending.
///
/// With x* = m + n(1 - tau) one has n = (x - x*)/sqrt5, so the exact ends of the
/// two intervals bound n; for fixed n each interval bounds m.
inline std::vector<GoldenInt> enumerate_strip(const Window& region, const Window& internal) {
  const GoldenNum s5 = GoldenNum::sqrt5();
  const auto n_lo = ((region.lo() - internal.hi()) / s5).ceil();
  const auto n_hi = ((region.hi() - internal.lo()) / s5).floor();
  if (n_hi < n_lo) return {};
  const Integer span = n_hi - n_lo + 1;
  if (span > Integer(1) << 40) throw std::length_error("enumeration region too large");
  const std::int64_t n0 = n_lo.convert_to<std::int64_t>();
  const auto rows = static_cast<std::size_t>(span.convert_to<std::int64_t>());

  const detail::ScaledWindow phys(region);
  const detail::ScaledWindow inner(internal);
  const detail::ScaledGolden& A = phys.lo();
  const detail::ScaledGolden& B = phys.hi();
  const detail::ScaledGolden& C = inner.lo();
  const detail::ScaledGolden& D = inner.hi();

  const std::size_t chunk = 256;
  const std::size_t chunks = (rows + chunk - 1) / chunk;
  std::vector<std::vector<GoldenInt>> parts(chunks);
  parallel_chunks(chunks, 1, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      auto& out = parts[c];
      const std::size_t r_end = std::min(rows, (c + 1) * chunk);
      for (std::size_t r = c * chunk; r < r_end; ++r) {
        const std::int64_t n = n0 + static_cast<std::int64_t>(r);
        const GoldenInt ntau(0, n);
        const GoldenInt nstar = GoldenInt(n, -n);  // n(1 - tau)
        // m >= A - n tau, m >= C - n(1-tau), m <= B - n tau, m <= D - n(1-tau).
        const std::int64_t m_lo = std::max(detail::ceil_scaled(A.num - ntau * GoldenInt(A.den), A.den),
                                           detail::ceil_scaled(C.num - nstar * GoldenInt(C.den), C.den));
        const std::int64_t m_hi = std::min(detail::floor_scaled(B.num - ntau * GoldenInt(B.den), B.den),
                                           detail::floor_scaled(D.num - nstar * GoldenInt(D.den), D.den));
        for (std::int64_t m = m_lo; m <= m_hi; ++m) {
          const GoldenInt x(m, n);
          if (phys.contains(x) && inner.contains(x.star())) out.push_back(x);
        }
      }
    }
  });
  std::vector<GoldenInt> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end(), [](GoldenInt p, GoldenInt q) { return (p - q).sign() < 0; });
  return all;
}

inline TypedPointSet cut_and_project(const ModelSetSpec& spec, const Window& region) {
  const std::vector<GoldenInt> xs = enumerate_strip(region, spec.total());
  std::vector<detail::ScaledWindow> ws;
  for (const auto& w : spec.windows()) ws.emplace_back(w);
  TypedPointSet out;
  out.points.reserve(xs.size());
  for (GoldenInt x : xs) {
    const GoldenInt xs_ = x.star();
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (ws[i].contains(xs_)) {
        out.points.push_back({x, spec.letters()[i]});
        break;
      }
    }
  }
  return out;
}

/// Region given by float ends; both must be finite.
inline TypedPointSet cut_and_project(const ModelSetSpec& spec, double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw std::invalid_argument("cut_and_project needs a bounded region");
  }
  const auto exact = [](double v) {
    int e = 0;
    const double f = std::frexp(v, &e);
    const auto mant = static_cast<long long>(std::ldexp(f, 53));
    Rational r(mant);
    e -= 53;
    if (e >= 0) return r * Rational(Integer(1) << e);
    return r / Rational(Integer(1) << -e);
  };
  // Enumerate over a dyadic hull with a small denominator, then trim exactly;
  // the exact binary expansion of a double would overflow the scaled arithmetic.
  const double mag = std::max(std::fabs(lo), std::fabs(hi));
  const int bits = std::max(0, 30 - static_cast<int>(std::ceil(std::log2(mag + 2))));
  const double scale = std::ldexp(1.0, bits);
  const Rational den(Integer(1) << bits);
  const GoldenNum outer_lo(Rational(static_cast<long long>(std::floor(lo * scale)) - 1) / den);
  const GoldenNum outer_hi(Rational(static_cast<long long>(std::ceil(hi * scale)) + 1) / den);
  TypedPointSet all = cut_and_project(spec, Window::closed(outer_lo, outer_hi));
  const GoldenNum elo(exact(lo)), ehi(exact(hi));
  TypedPointSet out;
  out.points.reserve(all.points.size());
  for (const auto& p : all.points) {
    const double x = p.x.to_double();
    const bool inside = (x > lo + 1e-9 * (1 + std::fabs(lo)) && x < hi - 1e-9 * (1 + std::fabs(hi))) ||
                        (GoldenNum(p.x) >= elo && GoldenNum(p.x) <= ehi);
    if (inside) out.points.push_back(p);
  }
  return out;
}

/// Per-type base windows translated by star(position):
/// a -> [1-tau, 2-tau), b -> [2-tau, 1).
inline Window coding_window(char type, GoldenInt position) {
  const GoldenNum tau = GoldenNum::tau();
  const GoldenNum shift(position.star());
  if (type == 'a') return Window::half_open(1 - tau + shift, 2 - tau + shift);
  if (type == 'b') return Window::half_open(2 - tau + shift, 1 + shift);
  throw std::invalid_argument(std::string("no coding window for letter '") + type + "'");
}

struct PatchTile {
  char type;
  GoldenInt position;
};

struct PatchSpec {
  std::vector<PatchTile> tiles;

  /// "a@0 b@t a@1+t"; an empty string is the empty patch.
  static PatchSpec parse(std::string_view text) {
    PatchSpec p;
    std::string s(text);
    std::istringstream is(s);
    std::string item;
    while (is >> item) {
      const std::size_t at = item.find('@');
      if (at != 1) throw std::invalid_argument("patch tile '" + item + "' must look like a@pos");
      p.tiles.push_back({item[0], parse_golden_int(item.substr(2))});
    }
    return p;
  }

  PatchSpec translated(GoldenInt t) const {
    PatchSpec out = *this;
    for (auto& tile : out.tiles) tile.position += t;
    return out;
  }
};

/// vol(V_1 ∩ ... ∩ V_n) / vol(W) with the coding windows above (vol(W) = tau).
inline GoldenNum patch_frequency(const PatchSpec& patch) {
  if (patch.tiles.empty()) return 1;
  std::vector<Window> ws;
  for (const auto& t : patch.tiles) ws.push_back(coding_window(t.type, t.position));
  return intersection_volume(ws) / GoldenNum::tau();
}

/// Same frequency read off an arbitrary spec: the patch sits at a point y of the
/// set iff y* lies in every W_type - position*.
inline GoldenNum patch_frequency(const ModelSetSpec& spec, const PatchSpec& patch) {
  if (patch.tiles.empty()) return 1;
  std::vector<Window> ws;
  for (const auto& t : patch.tiles) ws.push_back(spec.window(t.type).translated(-GoldenNum(t.position.star())));
  return intersection_volume(ws) / spec.total().volume();
}

inline bool is_legal(const PatchSpec& patch) { return patch_frequency(patch).sign() > 0; }

/// The first n points of the set ordered by |x| (ties: positive first).
inline std::vector<GoldenInt> nearest_points(const ModelSetSpec& spec, std::size_t n) {
  double radius = static_cast<double>(n) * 0.75 + 8.0;
  for (;;) {
    const GoldenNum r(static_cast<long long>(std::ceil(radius)));
    std::vector<GoldenInt> xs = enumerate_strip(Window::closed(-r, r), spec.total());
    if (xs.size() >= n + 4) {
      std::sort(xs.begin(), xs.end(), [](GoldenInt p, GoldenInt q) {
        const int s = (p.abs() - q.abs()).sign();
        if (s != 0) return s < 0;
        return p.sign() > q.sign();
      });
      // Trim to n only if the ball really holds n points closer than its rim.
      if (xs.size() > n && (xs[n - 1].abs() - GoldenInt(static_cast<std::int64_t>(std::floor(radius)))).sign() < 0) {
        xs.resize(n);
        return xs;
      }
    }
    radius *= 2;
  }
}

/// Star discrepancy of the internal images of the first n points, rescaled to [0,1).
inline double weyl_discrepancy(const ModelSetSpec& spec, std::size_t n) {
  if (n < 1) throw std::invalid_argument("need at least one point");
  const std::vector<GoldenInt> xs = nearest_points(spec, n);
  const double lo = spec.total().lo().to_double();
  const double vol = spec.total().volume().to_double();
  std::vector<double> u;
  u.reserve(n);
  for (GoldenInt x : xs) u.push_back((x.star().to_double() - lo) / vol);
  std::sort(u.begin(), u.end());
  double d = 0.0;
  const double N = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    d = std::max(d, std::max(static_cast<double>(i + 1) / N - u[i], u[i] - static_cast<double>(i) / N));
  }
  return d;
}

/// Internal-space window of z for which an alpha-point at y has a beta-point at y + z.
inline Window difference_window(const ModelSetSpec& spec, char alpha, char beta) {
  return minkowski_difference(spec.window(beta), spec.window(alpha));
}

inline bool difference_set_member(const ModelSetSpec& spec, GoldenInt z, char alpha, char beta) {
  return difference_window(spec, alpha, beta).contains(GoldenNum(z.star()));
}

inline bool difference_set_member(GoldenInt z, char alpha, char beta) {
  static const ModelSetSpec fib = ModelSetSpec::fibonacci();
  return difference_set_member(fib, z, alpha, beta);
}

}  // namespace aperiodic

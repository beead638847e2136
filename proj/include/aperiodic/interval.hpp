#pragma once

// Intervals on the real line with exact endpoints and explicit end inclusion.

#include "golden.hpp"

#include <stdexcept>
#include <vector>

namespace aperiodic {

class Window {
 public:
  Window(GoldenNum lo, GoldenNum hi, bool lo_closed, bool hi_closed)
      : lo_(std::move(lo)), hi_(std::move(hi)), lo_closed_(lo_closed), hi_closed_(hi_closed) {
    if (!(lo_ < hi_)) throw std::invalid_argument("window requires lo < hi");
  }

  static Window closed(GoldenNum lo, GoldenNum hi) { return {std::move(lo), std::move(hi), true, true}; }
  static Window half_open(GoldenNum lo, GoldenNum hi) { return {std::move(lo), std::move(hi), true, false}; }

  const GoldenNum& lo() const { return lo_; }
  const GoldenNum& hi() const { return hi_; }
  bool lo_closed() const { return lo_closed_; }
  bool hi_closed() const { return hi_closed_; }

  GoldenNum volume() const { return hi_ - lo_; }
  GoldenNum centre() const { return (lo_ + hi_) * GoldenNum(Rational(1, 2)); }

  bool contains(const GoldenNum& x) const {
    const auto cl = lo_ <=> x;
    const auto ch = x <=> hi_;
    const bool above = lo_closed_ ? cl <= 0 : cl < 0;
    const bool below = hi_closed_ ? ch <= 0 : ch < 0;
    return above && below;
  }

  bool interior_contains(const GoldenNum& x) const { return lo_ < x && x < hi_; }

  Window translated(const GoldenNum& t) const { return {lo_ + t, hi_ + t, lo_closed_, hi_closed_}; }

  /// Image under x -> c*x; a negative factor swaps the ends and their flags.
  Window scaled(const GoldenNum& c) const {
    const int s = c.sign();
    if (s == 0) throw std::invalid_argument("window scaled by zero");
    if (s > 0) return {lo_ * c, hi_ * c, lo_closed_, hi_closed_};
    return {hi_ * c, lo_ * c, hi_closed_, lo_closed_};
  }

  Window reflected() const { return scaled(GoldenNum(-1)); }
  Window closure() const { return {lo_, hi_, true, true}; }

  friend bool operator==(const Window& p, const Window& q) {
    return p.lo_ == q.lo_ && p.hi_ == q.hi_ && p.lo_closed_ == q.lo_closed_ && p.hi_closed_ == q.hi_closed_;
  }

 private:
  GoldenNum lo_;
  GoldenNum hi_;
  bool lo_closed_;
  bool hi_closed_;
};

/// vol(A ∩ B); end inclusion is irrelevant for the measure.
inline GoldenNum intersection_volume(const Window& p, const Window& q) {
  const GoldenNum len = min(p.hi(), q.hi()) - max(p.lo(), q.lo());
  return len.sign() > 0 ? len : GoldenNum(0);
}

/// max{min_i hi_i - max_j lo_j, 0} over a list.
inline GoldenNum intersection_volume(const std::vector<Window>& ws) {
  if (ws.empty()) throw std::invalid_argument("intersection of an empty window list");
  GoldenNum lo = ws.front().lo();
  GoldenNum hi = ws.front().hi();
  for (const auto& w : ws) {
    lo = max(lo, w.lo());
    hi = min(hi, w.hi());
  }
  const GoldenNum len = hi - lo;
  return len.sign() > 0 ? len : GoldenNum(0);
}

/// Minkowski difference A - B = {x - y}. An end is attained only when both
/// contributing ends are.
inline Window minkowski_difference(const Window& p, const Window& q) {
  return {p.lo() - q.hi(), p.hi() - q.lo(), p.lo_closed() && q.hi_closed(),
          p.hi_closed() && q.lo_closed()};
}

/// Smallest interval containing both.
inline Window hull(const Window& p, const Window& q) {
  const bool lo_from_p = p.lo() < q.lo() || (p.lo() == q.lo() && p.lo_closed());
  const bool hi_from_p = p.hi() > q.hi() || (p.hi() == q.hi() && p.hi_closed());
  return {lo_from_p ? p.lo() : q.lo(), hi_from_p ? p.hi() : q.hi(),
          lo_from_p ? p.lo_closed() : q.lo_closed(), hi_from_p ? p.hi_closed() : q.hi_closed()};
}

/// Hausdorff distance between two closed intervals.
inline GoldenNum hausdorff(const Window& p, const Window& q) {
  return max((p.lo() - q.lo()).abs(), (p.hi() - q.hi()).abs());
}

}  // namespace aperiodic

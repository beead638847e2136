#pragma once

// Exact arithmetic in the golden field Q(sqrt 5) and its ring of integers Z[tau].
//
// GoldenNum stores a + b*sqrt(5) with arbitrary-precision rational a, b.
// GoldenInt stores m + n*tau with 64-bit integers and checked arithmetic; it is
// the coordinate type of the embedding lattice and of every point set built on
// top of it. Both are immutable value types.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace aperiodic {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kSqrt5 = 2.23606797749978969640917366873127623544;
inline constexpr double kTau = 1.61803398874989484820458683436563811772;
inline constexpr double kPi = 3.14159265358979323846264338327950288420;

namespace detail {

inline int sign_of(const Rational& r) { return r.sign(); }

// Correctly-truncated conversion num/den -> double with a 64-bit quotient, so
// that huge numerators and denominators do not overflow on the way.
inline double rational_to_double(const Rational& r) {
  if (r == 0) return 0.0;
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  const bool negative = num < 0;
  if (negative) num = -num;
  const long num_bits = static_cast<long>(boost::multiprecision::msb(num)) + 1;
  const long den_bits = static_cast<long>(boost::multiprecision::msb(den)) + 1;
  // Scale so that the integer quotient carries 64..65 significant bits.
  const long shift = 64 - (num_bits - den_bits);
  if (shift > 0) {
    num <<= static_cast<unsigned>(shift);
  } else if (shift < 0) {
    den <<= static_cast<unsigned>(-shift);
  }
  Integer quotient = num / den;
  Integer remainder = num - quotient * den;
  // Sticky bit keeps round-to-nearest honest when the quotient is truncated.
  if (remainder != 0) quotient = (quotient << 1) | 1;
  const long extra = remainder != 0 ? 1 : 0;
  const double q = quotient.convert_to<double>();
  const double value = std::ldexp(q, static_cast<int>(-shift - extra));
  if (!std::isfinite(value)) {
    throw std::range_error("rational component out of double range");
  }
  return negative ? -value : value;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("GoldenInt overflow");
  return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("GoldenInt overflow");
  return r;
}
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("GoldenInt overflow");
  return r;
}

// Sign of p + q*sqrt(5) for 128-bit p, q.
inline int sign_sqrt5(__int128 p, __int128 q) {
  const int sp = (p > 0) - (p < 0);
  const int sq = (q > 0) - (q < 0);
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  // Opposite signs: compare p^2 with 5 q^2.
  const unsigned __int128 ap = static_cast<unsigned __int128>(p < 0 ? -p : p);
  const unsigned __int128 aq = static_cast<unsigned __int128>(q < 0 ? -q : q);
  constexpr unsigned __int128 small = static_cast<unsigned __int128>(1) << 62;
  if (ap < small && aq < small) return ap * ap > 5 * aq * aq ? sp : sq;
  auto to_int = [](unsigned __int128 v) {
    Integer r = static_cast<std::uint64_t>(v >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(v);
    return r;
  };
  const Integer bp = to_int(ap);
  const Integer bq = to_int(aq);
  return bp * bp > 5 * bq * bq ? sp : sq;
}

}  // namespace detail

class GoldenNum;

/// m + n*tau with tau^2 = tau + 1.
class GoldenInt {
 public:
  constexpr GoldenInt() = default;
  constexpr GoldenInt(std::int64_t m, std::int64_t n = 0) : m_(m), n_(n) {}

  static constexpr GoldenInt tau() { return {0, 1}; }

  constexpr std::int64_t m() const { return m_; }
  constexpr std::int64_t n() const { return n_; }

  friend GoldenInt operator+(GoldenInt p, GoldenInt q) {
    return {detail::checked_add(p.m_, q.m_), detail::checked_add(p.n_, q.n_)};
  }
  friend GoldenInt operator-(GoldenInt p, GoldenInt q) {
    return {detail::checked_sub(p.m_, q.m_), detail::checked_sub(p.n_, q.n_)};
  }
  friend GoldenInt operator-(GoldenInt p) { return GoldenInt{} - p; }
  friend GoldenInt operator*(GoldenInt p, GoldenInt q) {
    using detail::checked_add;
    using detail::checked_mul;
    const std::int64_t nn = checked_mul(p.n_, q.n_);
    return {checked_add(checked_mul(p.m_, q.m_), nn),
            checked_add(checked_add(checked_mul(p.m_, q.n_), checked_mul(p.n_, q.m_)), nn)};
  }
  GoldenInt& operator+=(GoldenInt q) { return *this = *this + q; }
  GoldenInt& operator-=(GoldenInt q) { return *this = *this - q; }
  GoldenInt& operator*=(GoldenInt q) { return *this = *this * q; }

  friend constexpr bool operator==(GoldenInt, GoldenInt) = default;

  /// Exact order of the real values.
  friend std::strong_ordering operator<=>(GoldenInt p, GoldenInt q) {
    const int s = (p - q).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Sign of m + n*tau, using 2(m + n tau) = (2m + n) + n sqrt5.
  int sign() const {
    return detail::sign_sqrt5(2 * static_cast<__int128>(m_) + n_, n_);
  }

  /// Galois conjugate: m + n(1 - tau).
  GoldenInt star() const { return {detail::checked_add(m_, n_), detail::checked_sub(0, n_)}; }

  /// N(m + n tau) = m^2 + mn - n^2.
  std::int64_t norm() const {
    using detail::checked_add;
    using detail::checked_mul;
    using detail::checked_sub;
    return checked_sub(checked_add(checked_mul(m_, m_), checked_mul(m_, n_)), checked_mul(n_, n_));
  }

  bool is_unit() const {
    const std::int64_t nm = norm();
    return nm == 1 || nm == -1;
  }

  /// Exact quotient in Z[tau] if it exists.
  std::optional<GoldenInt> divide(GoldenInt d) const {
    const std::int64_t nd = d.norm();
    if (nd == 0) throw std::domain_error("division by zero in Z[tau]");
    const GoldenInt prod = *this * d.star();
    if (prod.m_ % nd != 0 || prod.n_ % nd != 0) return std::nullopt;
    return GoldenInt{prod.m_ / nd, prod.n_ / nd};
  }

  GoldenInt abs() const { return sign() < 0 ? -*this : *this; }

  double to_double() const {
    // m + n tau = (m + n/2) + (n/2) sqrt5; split the sum to avoid cancellation.
    const double a = static_cast<double>(m_);
    const double b = static_cast<double>(n_);
    if ((m_ >= 0) == (n_ >= 0)) return a + b * kTau;
    // m + n tau = N / (m + n(1 - tau)) with the conjugate free of cancellation.
    const double conj = a + b * (1.0 - kTau);
    return static_cast<double>(norm()) / conj;
  }

  GoldenNum to_golden() const;

 private:
  std::int64_t m_ = 0;
  std::int64_t n_ = 0;
};

/// a + b*sqrt(5) with rational a, b in lowest terms.
class GoldenNum {
 public:
  GoldenNum() = default;
  GoldenNum(long long v) : a_(v) {}
  GoldenNum(int v) : a_(v) {}
  GoldenNum(Rational a, Rational b = 0) : a_(std::move(a)), b_(std::move(b)) {}
  GoldenNum(GoldenInt x)
      : a_(Rational(x.m()) + Rational(x.n(), 2)), b_(Rational(x.n(), 2)) {}

  static GoldenNum tau() { return {Rational(1, 2), Rational(1, 2)}; }
  static GoldenNum sqrt5() { return {Rational(0), Rational(1)}; }
  /// p + q*tau for rational p, q.
  static GoldenNum from_tau(const Rational& p, const Rational& q) { return {p + q / 2, q / 2}; }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt5_part() const { return b_; }

  /// Coefficients (p, q) with value p + q*tau.
  std::pair<Rational, Rational> tau_coefficients() const { return {a_ - b_, 2 * b_}; }

  /// Exact conversion when the value lies in Z[tau].
  std::optional<GoldenInt> to_golden_int() const {
    auto [p, q] = tau_coefficients();
    if (boost::multiprecision::denominator(p) != 1 || boost::multiprecision::denominator(q) != 1) {
      return std::nullopt;
    }
    const Integer pi = boost::multiprecision::numerator(p);
    const Integer qi = boost::multiprecision::numerator(q);
    const Integer lo = std::numeric_limits<std::int64_t>::min();
    const Integer hi = std::numeric_limits<std::int64_t>::max();
    if (pi < lo || pi > hi || qi < lo || qi > hi) return std::nullopt;
    return GoldenInt{pi.convert_to<std::int64_t>(), qi.convert_to<std::int64_t>()};
  }

  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  friend GoldenNum operator+(const GoldenNum& p, const GoldenNum& q) {
    return {p.a_ + q.a_, p.b_ + q.b_};
  }
  friend GoldenNum operator-(const GoldenNum& p, const GoldenNum& q) {
    return {p.a_ - q.a_, p.b_ - q.b_};
  }
  friend GoldenNum operator-(const GoldenNum& p) { return {-p.a_, -p.b_}; }
  friend GoldenNum operator*(const GoldenNum& p, const GoldenNum& q) {
    return {p.a_ * q.a_ + 5 * p.b_ * q.b_, p.a_ * q.b_ + p.b_ * q.a_};
  }
  friend GoldenNum operator/(const GoldenNum& p, const GoldenNum& q) { return p * q.inverse(); }
  GoldenNum& operator+=(const GoldenNum& q) { return *this = *this + q; }
  GoldenNum& operator-=(const GoldenNum& q) { return *this = *this - q; }
  GoldenNum& operator*=(const GoldenNum& q) { return *this = *this * q; }
  GoldenNum& operator/=(const GoldenNum& q) { return *this = *this / q; }

  GoldenNum inverse() const {
    const Rational n = norm();
    if (n == 0) throw std::domain_error("division by zero in Q(sqrt5)");
    return {a_ / n, -b_ / n};
  }

  friend bool operator==(const GoldenNum& p, const GoldenNum& q) {
    return p.a_ == q.a_ && p.b_ == q.b_;
  }

  /// Exact sign; never goes through floating point.
  int sign() const {
    const int sa = a_.sign();
    const int sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    return a_ * a_ > 5 * b_ * b_ ? sa : sb;
  }

  friend std::strong_ordering operator<=>(const GoldenNum& p, const GoldenNum& q) {
    const int s = (p - q).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Galois conjugation sqrt5 -> -sqrt5.
  GoldenNum star() const { return {a_, -b_}; }

  /// p * star(p) = a^2 - 5 b^2.
  Rational norm() const { return a_ * a_ - 5 * b_ * b_; }

  /// p + star(p) = 2a.
  Rational trace() const { return 2 * a_; }

  GoldenNum abs() const { return sign() < 0 ? -*this : *this; }

  double to_double() const {
    const int sa = a_.sign();
    const int sb = b_.sign();
    if (sa == 0 || sb == 0 || sa == sb) {
      return detail::rational_to_double(a_) + detail::rational_to_double(b_) * kSqrt5;
    }
    // a + b sqrt5 = (a^2 - 5b^2) / (a - b sqrt5); the denominator has no cancellation.
    const double den = detail::rational_to_double(a_) - detail::rational_to_double(b_) * kSqrt5;
    return detail::rational_to_double(norm()) / den;
  }

  /// Largest integer not exceeding the value.
  Integer floor() const {
    // Start from the float estimate and correct exactly.
    Integer k;
    const double f = to_double();
    if (std::abs(f) < 1e15) {
      k = Integer(static_cast<long long>(std::floor(f)));
    } else {
      const Rational approx = a_ + b_ * Rational(Integer(static_cast<long long>(kSqrt5 * 1e15)),
                                                 Integer(1000000000000000LL));
      k = boost::multiprecision::numerator(approx) / boost::multiprecision::denominator(approx);
    }
    while (GoldenNum(Rational(k)) > *this) --k;
    while (GoldenNum(Rational(k + 1)) <= *this) ++k;
    return k;
  }

  Integer ceil() const { return -(-*this).floor(); }

 private:
  Rational a_ = 0;
  Rational b_ = 0;
};

inline GoldenNum GoldenInt::to_golden() const { return GoldenNum(*this); }

inline GoldenNum star(const GoldenNum& p) { return p.star(); }
inline GoldenInt star(GoldenInt p) { return p.star(); }
inline double to_float(const GoldenNum& p) { return p.to_double(); }
inline double to_float(GoldenInt p) { return p.to_double(); }
inline Rational field_norm(const GoldenNum& p) { return p.norm(); }
inline std::int64_t field_norm(GoldenInt p) { return p.norm(); }

inline std::strong_ordering compare(const GoldenNum& p, const GoldenNum& q) { return p <=> q; }

inline const GoldenNum& golden_tau() {
  static const GoldenNum t = GoldenNum::tau();
  return t;
}

inline GoldenNum min(const GoldenNum& p, const GoldenNum& q) { return q < p ? q : p; }
inline GoldenNum max(const GoldenNum& p, const GoldenNum& q) { return p < q ? q : p; }

/// Integer power for GoldenNum (negative exponents allowed for nonzero base).
inline GoldenNum pow(const GoldenNum& base, int exponent) {
  GoldenNum b = exponent < 0 ? base.inverse() : base;
  unsigned e = static_cast<unsigned>(exponent < 0 ? -exponent : exponent);
  GoldenNum r = 1;
  while (e) {
    if (e & 1U) r *= b;
    b *= b;
    e >>= 1U;
  }
  return r;
}

/// A point of the Minkowski-embedded lattice {(x, x*) : x in Z[tau]}.
class LatticePoint {
 public:
  explicit LatticePoint(GoldenInt x) : x_(x), xstar_(x.star()) {}
  GoldenInt x() const { return x_; }
  GoldenInt xstar() const { return xstar_; }

 private:
  GoldenInt x_;
  GoldenInt xstar_;
};

namespace detail {

// value = num / den with num in Z[tau] and den > 0; used on hot paths where the
// rational machinery of GoldenNum would dominate the run time.
struct ScaledGolden {
  GoldenInt num;
  std::int64_t den = 1;

  static ScaledGolden from(const GoldenNum& v, std::int64_t den) {
    const GoldenNum scaled = v * GoldenNum(static_cast<long long>(den));
    auto gi = scaled.to_golden_int();
    if (!gi) throw std::overflow_error("value does not fit the scaled Z[tau] representation");
    return {*gi, den};
  }

  /// Smallest positive denominator putting v into (1/den) Z[tau].
  static std::int64_t denominator_of(const GoldenNum& v) {
    auto [p, q] = v.tau_coefficients();
    const Integer dp = boost::multiprecision::denominator(p);
    const Integer dq = boost::multiprecision::denominator(q);
    const Integer l = boost::multiprecision::lcm(dp, dq);
    if (l > std::numeric_limits<std::int64_t>::max()) throw std::overflow_error("denominator too large");
    return l.convert_to<std::int64_t>();
  }

  GoldenNum value() const {
    return GoldenNum(num) / GoldenNum(static_cast<long long>(den));
  }
};

/// Sign of x*den - bound.num for an integer point x, i.e. compare x with bound.
inline int compare_scaled(GoldenInt x, const ScaledGolden& bound) {
  return (x * GoldenInt(bound.den) - bound.num).sign();
}

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  const Integer l = boost::multiprecision::lcm(Integer(a), Integer(b));
  if (l > std::numeric_limits<std::int64_t>::max()) throw std::overflow_error("denominator too large");
  return l.convert_to<std::int64_t>();
}

}  // namespace detail

}  // namespace aperiodic

template <>
struct std::hash<aperiodic::GoldenInt> {
  std::size_t operator()(aperiodic::GoldenInt x) const noexcept {
    const auto h1 = std::hash<std::int64_t>{}(x.m());
    const auto h2 = std::hash<std::int64_t>{}(x.n());
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};

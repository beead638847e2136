#pragma once

// Fourier-Bohr amplitudes of weighted Fibonacci-type combs: closed form for
// interval windows, the Fourier matrix cocycle for IFS windows, and finite
// patch sums as an oracle. Wave numbers live in L* = Z[tau]/sqrt5.

#include "golden.hpp"
#include "interval.hpp"
#include "model_set.hpp"
#include "parallel.hpp"
#include "substitution.hpp"
#include "window_ifs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aperiodic {

using Complex = std::complex<double>;

/// k = y / sqrt5 with y = m + n tau.
struct WaveNumber {
  GoldenInt y;

  static std::optional<WaveNumber> from_exact(const GoldenNum& k) {
    const auto y = (k * GoldenNum::sqrt5()).to_golden_int();
    if (!y) return std::nullopt;
    return WaveNumber{*y};
  }

  GoldenNum exact() const { return GoldenNum(y) / GoldenNum::sqrt5(); }
  double value() const { return y.to_double() / kSqrt5; }
  /// star(k) = -star(y)/sqrt5.
  double star_value() const { return -y.star().to_double() / kSqrt5; }
  WaveNumber operator-() const { return {-y}; }
  friend WaveNumber operator+(WaveNumber a, WaveNumber b) { return {a.y + b.y}; }
  friend bool operator==(WaveNumber a, WaveNumber b) { return a.y == b.y; }
};

struct WeightedComb {
  std::vector<Complex> weights;  // one per letter

  WeightedComb() : weights{1.0, 1.0} {}
  WeightedComb(Complex ha, Complex hb) : weights{ha, hb} {}
  Complex weight(std::size_t alpha) const { return weights.at(alpha); }
  double total_abs() const {
    double s = 0;
    for (const auto& w : weights) s += std::abs(w);
    return s;
  }
};

struct BraggPeak {
  WaveNumber q;        // dual lattice label
  double k = 0;        // peak position (q / alpha for deformed sets)
  Complex amplitude;
  double intensity = 0;
};

struct Spectrum {
  std::vector<BraggPeak> peaks;

  std::optional<BraggPeak> at(WaveNumber q) const {
    for (const auto& p : peaks)
      if (p.q == q) return p;
    return std::nullopt;
  }
  double max_intensity() const {
    double m = 0;
    for (const auto& p : peaks) m = std::max(m, p.intensity);
    return m;
  }
};

namespace detail {

/// e^{-2 pi i x} with x reduced exactly modulo 1.
inline Complex unit_phase(const GoldenNum& x) {
  const GoldenNum frac = x - GoldenNum(Rational(x.floor()));
  const double f = to_float(frac);
  return {std::cos(2 * kPi * f), -std::sin(2 * kPi * f)};
}

inline double sinc(double x) { return std::fabs(x) < 1e-8 ? 1 - x * x / 6 : std::sin(x) / x; }

}  // namespace detail

/// ∫_lo^hi e^{-2 pi i v u} du.
inline Complex interval_transform(double lo, double hi, double v) {
  const double len = hi - lo;
  const double mid = lo + hi;
  const Complex phase(std::cos(kPi * v * mid), -std::sin(kPi * v * mid));
  return phase * (len * detail::sinc(kPi * v * len));
}

inline Complex interval_transform(const Window& w, double v) { return interval_transform(to_float(w.lo()), to_float(w.hi()), v); }

// --- deformations --------------------------------------------------------------

/// Deformed positions p'(x) = alpha x + beta star(x).
struct DeformCoeffs {
  double la = kTau;
  double lb = 1;
  double alpha = 1;
  double beta = 0;
  std::optional<GoldenNum> alpha_exact;
  std::optional<GoldenNum> beta_exact;

  static DeformCoeffs identity() { return {kTau, 1, 1, 0, GoldenNum(1), GoldenNum(0)}; }

  double apply(GoldenInt x) const { return alpha * x.to_double() + beta * x.star().to_double(); }
  std::optional<GoldenNum> apply_exact(GoldenInt x) const {
    if (!alpha_exact) return std::nullopt;
    return *alpha_exact * GoldenNum(x) + *beta_exact * GoldenNum(x.star());
  }
};

inline DeformCoeffs deform_coeffs(double la, double lb) {
  if (!(la > 0) || !(lb > 0)) throw std::invalid_argument("tile lengths must be positive");
  DeformCoeffs c;
  c.la = la;
  c.lb = lb;
  c.alpha = (la + lb / kTau) / kSqrt5;
  c.beta = (lb * kTau - la) / kSqrt5;
  return c;
}

inline DeformCoeffs deform_coeffs(const GoldenNum& la, const GoldenNum& lb) {
  if (la.sign() <= 0 || lb.sign() <= 0) throw std::invalid_argument("tile lengths must be positive");
  const GoldenNum t = GoldenNum::tau(), s5 = GoldenNum::sqrt5();
  DeformCoeffs c;
  c.la = to_float(la);
  c.lb = to_float(lb);
  c.alpha_exact = (la + lb / t) / s5;
  c.beta_exact = (lb * t - la) / s5;
  c.alpha = to_float(*c.alpha_exact);
  c.beta = to_float(*c.beta_exact);
  return c;
}

// --- closed form ---------------------------------------------------------------

namespace detail {

/// Amplitude at the deformed peak labelled q: internal argument -q* + q beta/alpha.
inline Complex deformed_amplitude(WaveNumber q, const ModelSetSpec& spec, const WeightedComb& comb, const DeformCoeffs& d) {
  if (comb.weights.size() != spec.size()) throw std::invalid_argument("one weight per letter required");
  double v;
  if (d.alpha_exact) {
    const GoldenNum qe = q.exact();
    v = to_float(-star(qe) + qe * *d.beta_exact / *d.alpha_exact);
  } else {
    v = -q.star_value() + q.value() * d.beta / d.alpha;
  }
  Complex a = 0;
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (comb.weight(i) != Complex(0)) a += comb.weight(i) * interval_transform(spec.window(i), v);
  return a / (d.alpha * kSqrt5);
}

inline double peak_position(WaveNumber q, const DeformCoeffs& d) {
  if (d.alpha_exact) return to_float(q.exact() / *d.alpha_exact);
  return q.value() / d.alpha;
}

}  // namespace detail

inline Complex fb_amplitude_closed(WaveNumber k, const ModelSetSpec& spec, const WeightedComb& comb) {
  return detail::deformed_amplitude(k, spec, comb, DeformCoeffs::identity());
}

/// Exact wave number input; zero off the Fourier-Bohr spectrum.
inline Complex fb_amplitude_closed(const GoldenNum& k, const ModelSetSpec& spec, const WeightedComb& comb) {
  const auto w = WaveNumber::from_exact(k);
  if (!w) return 0;
  return fb_amplitude_closed(*w, spec, comb);
}

inline double intensity(WaveNumber k, const ModelSetSpec& spec, const WeightedComb& comb) {
  return std::norm(fb_amplitude_closed(k, spec, comb));
}

inline Complex deformed_amplitude(WaveNumber q, const DeformCoeffs& d, const ModelSetSpec& spec, const WeightedComb& comb) {
  if (!(d.alpha > 0)) throw std::invalid_argument("deformation needs alpha > 0");
  return detail::deformed_amplitude(q, spec, comb, d);
}

/// All peaks with |k| <= kmax and I >= imin. |1^_W(v)| <= 1/(pi |v|) bounds the
/// internal argument, so the scan over the dual lattice is finite and exhaustive.
inline Spectrum deformed_spectrum(const DeformCoeffs& d, const ModelSetSpec& spec, const WeightedComb& comb, double kmax, double imin) {
  if (!(kmax > 0)) throw std::invalid_argument("kmax must be positive");
  if (!(imin > 0)) throw std::invalid_argument("imin must be positive: the Bragg peaks are dense");
  if (!(d.alpha > 0)) throw std::invalid_argument("deformation needs alpha > 0");
  const double h = comb.total_abs();
  // |A| >= sqrt(imin) forces |v| <= h / (pi sqrt5 alpha sqrt(imin)); |q| <= alpha kmax.
  const double vmax = h / (kPi * kSqrt5 * d.alpha * std::sqrt(imin));
  const double qmax = d.alpha * kmax;
  const double qstar_max = vmax + qmax * std::fabs(d.beta) / d.alpha;
  auto up = [](double x) { return GoldenNum(Rational(static_cast<long long>(std::ceil(x * 1024)) + 1, 1024)); };
  const Window region = Window::closed(-up(qmax * kSqrt5), up(qmax * kSqrt5));
  const Window internal = Window::closed(-up(qstar_max * kSqrt5), up(qstar_max * kSqrt5));
  const std::vector<GoldenInt> ys = enumerate_strip(region, internal);
  std::vector<std::optional<BraggPeak>> found(ys.size());
  parallel_chunks(ys.size(), 256, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const WaveNumber q{ys[i]};
      const double k = detail::peak_position(q, d);
      if (std::fabs(k) > kmax) continue;
      const Complex a = detail::deformed_amplitude(q, spec, comb, d);
      const double in = std::norm(a);
      if (in >= imin) found[i] = BraggPeak{q, k, a, in};
    }
  });
  Spectrum s;
  for (auto& f : found)
    if (f) s.peaks.push_back(*f);
  return s;
}

inline Spectrum enumerate_peaks(const ModelSetSpec& spec, const WeightedComb& comb, double kmax, double imin) {
  return deformed_spectrum(DeformCoeffs::identity(), spec, comb, kmax, imin);
}

inline double product_2d_intensity(WaveNumber k1, WaveNumber k2, const ModelSetSpec& spec, const WeightedComb& comb) {
  return intensity(k1, spec, comb) * intensity(k2, spec, comb);
}

// --- cocycle ---------------------------------------------------------------------

using FourierMatrix = std::vector<std::vector<Complex>>;

/// B(v)_ab = sum_{t in T*_ab} e^{-2 pi i v t}.
inline FourierMatrix fourier_matrix(const GraphIFS& ifs, double v) {
  const std::size_t k = ifs.size();
  FourierMatrix b(k, std::vector<Complex>(k, 0.0));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t c = 0; c < k; ++c)
      for (const auto& t : ifs.maps[a][c]) {
        const double x = v * to_float(t);
        b[a][c] += Complex(std::cos(2 * kPi * x), -std::sin(2 * kPi * x));
      }
  return b;
}

/// Window transforms h_a(v) = 1^_{W_a}(v) from h(v) = |c| B(v) h(c v), closed with h(0) = volumes.
inline std::vector<Complex> window_transforms(const GraphIFS& ifs, double v, double eps = 1e-10) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  const double c = to_float(ifs.contraction);
  if (!(std::fabs(c) < 1)) throw NotPisotError("cocycle needs a contracting IFS");
  const double ac = std::fabs(c);
  std::vector<double> vs{v};
  while (std::fabs(vs.back()) >= eps) vs.push_back(c * vs.back());
  const auto vol = volume_vector(ifs);
  std::vector<Complex> h;
  for (const auto& x : vol) h.emplace_back(to_float(x));
  // Precision: the translations are small and fixed, only v varies.
  std::vector<std::vector<std::vector<double>>> ts(ifs.size(), std::vector<std::vector<double>>(ifs.size()));
  for (std::size_t a = 0; a < ifs.size(); ++a)
    for (std::size_t b = 0; b < ifs.size(); ++b)
      for (const auto& t : ifs.maps[a][b]) ts[a][b].push_back(to_float(t));
  for (std::size_t j = vs.size() - 1; j-- > 0;) {
    std::vector<Complex> next(ifs.size(), 0.0);
    for (std::size_t a = 0; a < ifs.size(); ++a)
      for (std::size_t b = 0; b < ifs.size(); ++b) {
        Complex s = 0;
        for (double t : ts[a][b]) s += Complex(std::cos(2 * kPi * vs[j] * t), -std::sin(2 * kPi * vs[j] * t));
        next[a] += ac * s * h[b];
      }
    h = std::move(next);
  }
  return h;
}

inline Complex fb_amplitude_cocycle(WaveNumber k, const GraphIFS& ifs, const WeightedComb& comb, double eps = 1e-10) {
  if (comb.weights.size() != ifs.size()) throw std::invalid_argument("one weight per letter required");
  const auto h = window_transforms(ifs, -k.star_value(), eps);
  Complex a = 0;
  for (std::size_t i = 0; i < h.size(); ++i) a += comb.weight(i) * h[i];
  return a / kSqrt5;
}

// --- finite patches ------------------------------------------------------------

/// Typed points with the length of the region they were sampled from.
struct Realization {
  std::vector<double> x;
  std::vector<std::size_t> type;
  double length = 0;
};

/// Model-set points in [-n, n].
inline Realization model_set_realization(const ModelSetSpec& spec, double n) {
  const TypedPointSet pts = cut_and_project(spec, -n, n);
  Realization r;
  r.length = 2 * n;
  for (const auto& p : pts.points) {
    r.x.push_back(p.x.to_double());
    r.type.push_back(spec.index(p.type));
  }
  return r;
}

/// Deformed points alpha x + beta star(x) that land in [-n, n].
inline Realization deformed_realization(const ModelSetSpec& spec, const DeformCoeffs& d, double n) {
  if (!(d.alpha > 0)) throw std::invalid_argument("deformation needs alpha > 0");
  double smax = 0;
  for (const auto& w : spec.windows()) smax = std::max({smax, std::fabs(to_float(w.lo())), std::fabs(to_float(w.hi()))});
  const double pad = (std::fabs(d.beta) * smax + 1) / d.alpha;
  const TypedPointSet pts = cut_and_project(spec, -n / d.alpha - pad, n / d.alpha + pad);
  Realization r;
  r.length = 2 * n;
  for (const auto& p : pts.points) {
    const double x = d.apply(p.x);
    if (x < -n || x > n) continue;
    r.x.push_back(x);
    r.type.push_back(spec.index(p.type));
  }
  return r;
}

/// Tiles of rho^m(a) laid out from 0 with natural lengths, truncated to [0, length].
inline Realization substitution_realization(const SubstRule& rule, double length) {
  const PFData pf = pf_data(rule);
  std::vector<double> len;
  for (const auto& l : pf.left) len.push_back(to_float(l));
  std::string w(1, rule.letters()[0]);
  double total = len[0];
  while (total < length) {
    w = rule.apply(w);
    total = 0;
    for (char c : w) total += len[rule.index(c)];
    if (w.size() > (std::size_t{1} << 31)) throw std::length_error("word too long");
  }
  Realization r;
  r.length = length;
  std::vector<GoldenNum> exact_len = pf.left;
  GoldenNum x = 0;
  for (char c : w) {
    const double xd = to_float(x);
    if (xd > length) break;
    r.x.push_back(xd);
    r.type.push_back(rule.index(c));
    x += exact_len[rule.index(c)];
  }
  return r;
}

/// (1/length) sum_x h_{type(x)} e^{-2 pi i k x}.
inline Complex finite_patch_amplitude(const Realization& r, const WeightedComb& comb, double k) {
  if (r.x.empty()) throw std::invalid_argument("empty realization");
  const Complex s = parallel_sum<Complex>(r.x.size(), [&](std::size_t i) {
    const double ph = -2 * kPi * k * r.x[i];
    return comb.weight(r.type[i]) * Complex(std::cos(ph), std::sin(ph));
  });
  return s / r.length;
}

// --- translation phase -----------------------------------------------------------

/// |A_{t+L}(k) - e^{-2 pi i k t} A_L(k)| with closed-form amplitudes.
inline double phase_translation_check(WaveNumber k, GoldenInt t, const ModelSetSpec& spec, const WeightedComb& comb) {
  const ModelSetSpec moved = spec.translated(GoldenNum(t.star()));
  const Complex lhs = fb_amplitude_closed(k, moved, comb);
  const Complex rhs = detail::unit_phase(k.exact() * GoldenNum(t)) * fb_amplitude_closed(k, spec, comb);
  return std::abs(lhs - rhs);
}

/// The same relation on finite patches of Lambda and t + Lambda sampled in [-n, n].
inline double phase_translation_check_patch(WaveNumber k, GoldenInt t, const ModelSetSpec& spec, const WeightedComb& comb, double n) {
  const Realization base = model_set_realization(spec, n);
  const Realization moved = model_set_realization(spec.translated(GoldenNum(t.star())), n);
  const Complex lhs = finite_patch_amplitude(moved, comb, k.value());
  const Complex rhs = detail::unit_phase(k.exact() * GoldenNum(t)) * finite_patch_amplitude(base, comb, k.value());
  return std::abs(lhs - rhs);
}

}  // namespace aperiodic

#pragma once

// Pair correlations nu_ab(z): relative frequency, per point, of an a-point at x
// with a b-point at x + z. Two routes: window overlaps (g-functions) and the
// linear renormalisation relations induced by the inflation.

#include "golden.hpp"
#include "interval.hpp"
#include "linalg.hpp"
#include "model_set.hpp"
#include "substitution.hpp"
#include "window_ifs.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace aperiodic {

struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClosureError : std::runtime_error {
  ClosureError(const std::string& what, GoldenInt offending) : std::runtime_error(what), z(offending) {}
  GoldenInt z;
};

// --- closed forms for the Fibonacci windows --------------------------------

namespace detail {

inline std::size_t fib_letter(char c) {
  if (c == 'a') return 0;
  if (c == 'b') return 1;
  throw std::invalid_argument(std::string("unknown letter ") + c);
}

}  // namespace detail

/// Piecewise-linear g-functions of the Fibonacci chain, exact.
inline GoldenNum g_exact(char alpha, char beta, const GoldenNum& y) {
  const GoldenNum t = GoldenNum::tau();
  const GoldenNum it = t - 1;  // 1/tau
  const GoldenNum zero(0);
  detail::fib_letter(alpha);
  detail::fib_letter(beta);
  if (alpha == 'a' && beta == 'a') return max((1 - y.abs()) * it, zero);
  if (alpha == 'b' && beta == 'b') return max((1 - t * y.abs()) * it * it, zero);
  const GoldenNum u = alpha == 'b' ? y : -y;  // g_ab(y) = g_ba(-y)
  if (u.sign() < 0 || u > t) return zero;
  if (u <= t - 1) return u * it;
  if (u <= GoldenNum(1)) return it * it;
  return 1 - u * it;
}

/// Float evaluation of the same formulas; breakpoints are the exact values rounded once.
inline double g_eval(char alpha, char beta, double y) {
  detail::fib_letter(alpha);
  detail::fib_letter(beta);
  const double it = kTau - 1;
  if (alpha == 'a' && beta == 'a') return std::max((1 - std::fabs(y)) * it, 0.0);
  if (alpha == 'b' && beta == 'b') return std::max((1 - kTau * std::fabs(y)) * it * it, 0.0);
  const double u = alpha == 'b' ? y : -y;
  if (u < 0 || u > kTau) return 0;
  if (u <= kTau - 1) return u * it;
  if (u <= 1) return it * it;
  return 1 - u * it;
}

/// Overlap form: vol(W_a ∩ (W_b - y)) / vol(W).
inline GoldenNum window_g(const ModelSetSpec& spec, char alpha, char beta, const GoldenNum& y) {
  return intersection_volume(spec.window(alpha), spec.window(beta).translated(-y)) / spec.total().volume();
}

inline GoldenNum nu_pair_exact(const ModelSetSpec& spec, char alpha, char beta, GoldenInt z) {
  if (!difference_set_member(spec, z, alpha, beta)) return GoldenNum(0);
  return window_g(spec, alpha, beta, GoldenNum(z.star()));
}

inline double nu_pair(const ModelSetSpec& spec, char alpha, char beta, GoldenInt z) {
  return to_float(nu_pair_exact(spec, alpha, beta, z));
}

inline double nu_pair(char alpha, char beta, GoldenInt z) {
  if (!difference_set_member(z, alpha, beta)) return 0;
  return to_float(g_exact(alpha, beta, GoldenNum(z.star())));
}

/// Normalised covariogram vol(W ∩ (W - y)) / vol(W).
inline double covariogram(const Window& w, double y) {
  const double len = to_float(w.volume());
  return std::max(len - std::fabs(y), 0.0) / len;
}

inline GoldenNum covariogram_exact(const Window& w, const GoldenNum& y) {
  return intersection_volume(w, w.translated(-y)) / w.volume();
}

/// vol(W_a ∩ (W_b - y)) / total, i.e. (1/total)(1_{-W_a} * 1_{W_b})(y).
inline double mixed_covariogram(const Window& wa, const Window& wb, const GoldenNum& total, double y) {
  const double lo = std::max(to_float(wa.lo()), to_float(wb.lo()) - y);
  const double hi = std::min(to_float(wa.hi()), to_float(wb.hi()) - y);
  return std::max(hi - lo, 0.0) / to_float(total);
}

inline GoldenNum autocorrelation_exact(const ModelSetSpec& spec, GoldenInt z) {
  GoldenNum s = 0;
  for (char a : spec.letters())
    for (char b : spec.letters()) s += nu_pair_exact(spec, a, b, z);
  return s;
}

inline double autocorrelation(const ModelSetSpec& spec, GoldenInt z) { return to_float(autocorrelation_exact(spec, z)); }

inline double autocorrelation(GoldenInt z) {
  static const ModelSetSpec fib = ModelSetSpec::fibonacci();
  return autocorrelation(fib, z);
}

// --- renormalisation ---------------------------------------------------------

struct CorrIndex {
  std::size_t alpha;
  std::size_t beta;
  GoldenInt z;
  friend bool operator==(const CorrIndex&, const CorrIndex&) = default;
};

struct CorrIndexHash {
  std::size_t operator()(const CorrIndex& i) const noexcept {
    return std::hash<GoldenInt>{}(i.z) * 31 + i.alpha * 7 + i.beta;
  }
};

/// nu_{gamma delta}(w) with weight coeff on the right-hand side of a relation.
struct RenormTerm {
  CorrIndex index;
  GoldenNum coeff;
};

class RenormSystem {
 public:
  RenormSystem(const GeometricInflation& inf, std::vector<Window> hulls, GoldenNum bound)
      : letters_(inf.rule().letters()), lambda_(inf.lambda()), bound_(std::move(bound)), hulls_(std::move(hulls)) {
    const std::size_t k = letters_.size();
    offsets_.assign(k, std::vector<std::vector<GoldenNum>>(k));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t g = 0; g < k; ++g) offsets_[a][g] = inf.offsets(a, g);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) diff_.push_back(minkowski_difference(hulls_[b], hulls_[a]));

    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        for (GoldenInt z : enumerate_strip(Window::closed(-bound_, bound_), diff_[a * k + b]))
          if (admissible(a, b, z)) add_index({a, b, z});
    for (const auto& idx : indices_) {
      std::vector<RenormTerm> row;
      for (auto& term : expand(idx)) {
        if (!lookup_.count(term.index)) {
          throw ClosureError("renormalisation relations do not close: nu_" + std::string{letters_[term.index.alpha],
                             letters_[term.index.beta]} + " needed outside the index set", term.index.z);
        }
        row.push_back(std::move(term));
      }
      rows_.push_back(std::move(row));
    }
  }

  /// A system given by explicit relations; only the listed indices are admissible.
  RenormSystem(std::string letters, GoldenNum lambda, std::vector<CorrIndex> indices, std::vector<std::vector<RenormTerm>> rows)
      : letters_(std::move(letters)), lambda_(std::move(lambda)), bound_(0), explicit_(true), rows_(std::move(rows)) {
    if (indices.size() != rows_.size()) throw std::invalid_argument("one relation per index required");
    for (const auto& i : indices) add_index(i);
    for (const auto& row : rows_)
      for (const auto& t : row)
        if (!lookup_.count(t.index)) throw ClosureError("relation refers to an unlisted index", t.index.z);
  }

  const std::string& letters() const { return letters_; }
  const GoldenNum& lambda() const { return lambda_; }
  const GoldenNum& bound() const { return bound_; }
  const std::vector<Window>& hulls() const { return hulls_; }
  const std::vector<CorrIndex>& indices() const { return indices_; }
  const std::vector<RenormTerm>& row(std::size_t i) const { return rows_[i]; }
  std::size_t size() const { return indices_.size(); }

  std::optional<std::size_t> find(const CorrIndex& i) const {
    auto it = lookup_.find(i);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t letter(char c) const {
    const auto p = letters_.find(c);
    if (p == std::string::npos) throw std::invalid_argument(std::string("unknown letter ") + c);
    return p;
  }

  /// star(z) in the interior of H_b - H_a; outside it nu_ab(z) vanishes.
  bool admissible(std::size_t a, std::size_t b, GoldenInt z) const {
    if (explicit_) return lookup_.count({a, b, z}) > 0;
    return diff_[a * letters_.size() + b].interior_contains(GoldenNum(z.star()));
  }

  /// Generic relation nu_ab(z) = (1/lambda) sum_{gd} sum_{t in T_ag, s in T_bd} nu_gd((z+t-s)/lambda),
  /// with terms that vanish identically dropped and equal indices combined.
  std::vector<RenormTerm> expand(const CorrIndex& idx) const {
    if (explicit_) return rows_[*find(idx)];
    const std::size_t k = letters_.size();
    const GoldenNum inv = lambda_.inverse();
    std::vector<RenormTerm> out;
    const GoldenNum z(idx.z);
    for (std::size_t g = 0; g < k; ++g)
      for (std::size_t d = 0; d < k; ++d)
        for (const auto& t : offsets_[idx.alpha][g])
          for (const auto& s : offsets_[idx.beta][d]) {
            const auto w = ((z + t - s) * inv).to_golden_int();
            if (!w || !admissible(g, d, *w)) continue;
            const CorrIndex j{g, d, *w};
            bool merged = false;
            for (auto& term : out)
              if (term.index == j) term.coeff += inv, merged = true;
            if (!merged) out.push_back({j, inv});
          }
    return out;
  }

 private:
  void add_index(const CorrIndex& i) {
    lookup_.emplace(i, indices_.size());
    indices_.push_back(i);
  }

  std::string letters_;
  GoldenNum lambda_;
  GoldenNum bound_;
  bool explicit_ = false;
  std::vector<Window> hulls_;
  std::vector<Window> diff_;
  std::vector<std::vector<std::vector<GoldenNum>>> offsets_;
  std::vector<CorrIndex> indices_;
  std::unordered_map<CorrIndex, std::size_t, CorrIndexHash> lookup_;
  std::vector<std::vector<RenormTerm>> rows_;
};

/// Bound Delta/(lambda-1), Delta = max |t - s|: beyond it every relation strictly shrinks |z|.
inline GoldenNum renorm_bound(const GeometricInflation& inf) {
  return inf.max_displacement_gap() / (inf.lambda() - 1);
}

inline RenormSystem build_renorm_system(const GeometricInflation& inf, std::optional<GoldenNum> bound = std::nullopt) {
  const GraphIFS ifs = build_graph_ifs(inf);
  return RenormSystem(inf, attractor_hull(ifs), bound ? *bound : renorm_bound(inf));
}

inline RenormSystem build_renorm_system(const SubstRule& rule, std::optional<GoldenNum> bound = std::nullopt) {
  return build_renorm_system(geometric_inflation(rule), std::move(bound));
}

class PairCorrelation {
 public:
  enum class Backend { Windows, Renorm };

  /// Overlap route for a model set with interval windows.
  explicit PairCorrelation(ModelSetSpec spec) : backend_(Backend::Windows), spec_(std::make_shared<ModelSetSpec>(std::move(spec))) {
    letters_ = spec_->letters();
  }

  PairCorrelation(std::shared_ptr<const RenormSystem> system, std::vector<GoldenNum> values)
      : backend_(Backend::Renorm), system_(std::move(system)), values_(std::move(values)), memo_(std::make_shared<Memo>()) {
    letters_ = system_->letters();
  }

  Backend backend() const { return backend_; }
  const std::string& letters() const { return letters_; }
  const RenormSystem* system() const { return system_.get(); }
  /// Solved values on the core index set (renorm backend).
  const std::vector<GoldenNum>& core_values() const { return values_; }

  GoldenNum nu_exact(char alpha, char beta, GoldenInt z) const {
    if (backend_ == Backend::Windows) return nu_pair_exact(*spec_, alpha, beta, z);
    return eval({system_->letter(alpha), system_->letter(beta), z});
  }

  double nu(char alpha, char beta, GoldenInt z) const { return to_float(nu_exact(alpha, beta, z)); }

  GoldenNum autocorrelation_exact(GoldenInt z) const {
    GoldenNum s = 0;
    for (char a : letters_)
      for (char b : letters_) s += nu_exact(a, b, z);
    return s;
  }

  double autocorrelation(GoldenInt z) const { return to_float(autocorrelation_exact(z)); }

 private:
  struct Memo {
    std::mutex mutex;
    std::unordered_map<CorrIndex, GoldenNum, CorrIndexHash> values;
  };

  GoldenNum eval(const CorrIndex& i) const {
    if (!system_->admissible(i.alpha, i.beta, i.z)) return GoldenNum(0);
    if (auto p = system_->find(i)) return values_[*p];
    {
      std::lock_guard<std::mutex> lock(memo_->mutex);
      auto it = memo_->values.find(i);
      if (it != memo_->values.end()) return it->second;
    }
    GoldenNum v = 0;
    for (const auto& term : system_->expand(i)) v += term.coeff * eval(term.index);
    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->values.emplace(i, v);
    return v;
  }

  Backend backend_;
  std::string letters_;
  std::shared_ptr<const ModelSetSpec> spec_;
  std::shared_ptr<const RenormSystem> system_;
  std::vector<GoldenNum> values_;
  std::shared_ptr<Memo> memo_;
};

/// Eigenvector of the relation operator for eigenvalue 1, normalised by sum_a nu_aa(0) = 1.
inline PairCorrelation solve_renorm(const RenormSystem& system) {
  const std::size_t n = system.size();
  if (n == 0) throw DegeneracyError("empty renormalisation system");
  GoldenMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) += 1;
    for (const auto& term : system.row(i)) m(i, *system.find(term.index)) -= term.coeff;
  }
  const auto kernel = null_space(m);
  if (kernel.size() != 1)
    throw DegeneracyError("renormalisation solution space has dimension " + std::to_string(kernel.size()) + ", expected 1");
  std::vector<GoldenNum> v = kernel.front();
  GoldenNum norm = 0;
  for (std::size_t a = 0; a < system.letters().size(); ++a)
    if (auto p = system.find({a, a, GoldenInt(0)})) norm += v[*p];
  if (norm.is_zero()) throw DegeneracyError("solution has vanishing central value");
  for (auto& x : v) x /= norm;
  return PairCorrelation(std::make_shared<RenormSystem>(system), std::move(v));
}

/// Rank of I - R, computed exactly.
inline std::size_t renorm_rank(const RenormSystem& system) {
  const std::size_t n = system.size();
  GoldenMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) += 1;
    for (const auto& term : system.row(i)) m(i, *system.find(term.index)) -= term.coeff;
  }
  return rank(m);
}

/// Admissible z with |z| <= radius for one pair, sorted.
inline std::vector<GoldenInt> admissible_differences(const RenormSystem& system, char alpha, char beta, const GoldenNum& radius) {
  const std::size_t a = system.letter(alpha), b = system.letter(beta);
  const Window diff = minkowski_difference(system.hulls()[b], system.hulls()[a]);
  std::vector<GoldenInt> out;
  for (GoldenInt z : enumerate_strip(Window::closed(-radius, radius), diff))
    if (system.admissible(a, b, z)) out.push_back(z);
  return out;
}

// --- the displayed identity for the autocorrelation ------------------------

struct IdentityResiduals {
  double constant_head = 0;  // leading term (1/tau^2) nu(1/tau^2)
  double scaled_head = 0;    // leading term (1/tau^2) nu(z/tau^2)
  double reduced_shift = 0;  // leading term nu(z/tau^2), shifts ((-tau)^{|n|} - 1)/tau
};

/// nu(z) - RHS for three variants of
///   nu(z) = (1/tau^2) nu(.) + sum_n tau^{-(|n|+1)} nu((z + sgn(n)((-tau)^{|n|} - 1)) / tau^{|n|+1}),
/// with the sum truncated to |n| <= terms and nu the total autocorrelation. With
/// tile lengths (tau, 1) only the reduced-shift variant holds; the other shifts
/// belong to lengths (tau^2, tau).
inline IdentityResiduals autocorrelation_identity(const PairCorrelation& corr, GoldenInt z, int terms = 60) {
  const GoldenNum itau = GoldenNum::tau() - 1;  // 1/tau
  const GoldenNum mtau = -GoldenNum::tau();
  auto nu = [&](const GoldenNum& x) {
    const auto gi = x.to_golden_int();
    if (!gi) throw std::logic_error("identity argument left Z[tau]");
    return to_float(corr.autocorrelation_exact(*gi));
  };
  const GoldenNum zz(z);
  const double lhs = nu(zz);
  double sum = 0, sum_rescaled = 0;
  for (int n = -terms; n <= terms; ++n) {
    const int k = n < 0 ? -n : n;
    const int sg = n > 0 ? 1 : (n < 0 ? -1 : 0);
    const GoldenNum shift = GoldenNum(sg) * (pow(mtau, k) - 1);
    const GoldenNum scale = pow(itau, k + 1);
    sum += std::pow(kTau, -(k + 1)) * nu((zz + shift) * scale);
    sum_rescaled += std::pow(kTau, -(k + 1)) * nu((zz + shift * itau) * scale);
  }
  const GoldenNum itau2 = itau * itau;
  IdentityResiduals r;
  r.constant_head = lhs - (nu(itau2) / (kTau * kTau) + sum);
  r.scaled_head = lhs - (nu(zz * itau2) / (kTau * kTau) + sum);
  r.reduced_shift = lhs - (nu(zz * itau2) / (kTau * kTau) + sum_rescaled);
  return r;
}

}  // namespace aperiodic

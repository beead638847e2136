#pragma once

// Substitution rules on a small alphabet: matrices, Perron-Frobenius data,
// word iteration, two-cycles around a marker, factor complexity, random
// Fibonacci realizations, and the induced geometric inflation.

#include "golden.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace aperiodic {

struct UnsupportedRule : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TwoCycleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SubstRule {
 public:
  /// letters[i] maps to images[i]; letters are single characters.
  SubstRule(std::string letters, std::vector<std::string> images)
      : letters_(std::move(letters)), images_(std::move(images)) {
    if (letters_.empty()) throw std::invalid_argument("empty alphabet");
    if (images_.size() != letters_.size()) throw std::invalid_argument("one image per letter required");
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (letters_.find(letters_[i]) != i) throw std::invalid_argument("duplicate letter in alphabet");
    }
    for (const auto& img : images_) {
      if (img.empty()) throw std::invalid_argument("empty image");
      for (char c : img) {
        if (letters_.find(c) == std::string::npos) {
          throw std::invalid_argument(std::string("image uses letter '") + c + "' outside the alphabet");
        }
      }
    }
  }

  /// "a->ab; b->a". The alphabet is ordered by first appearance on the left.
  static SubstRule parse(std::string_view text) {
    std::string letters;
    std::vector<std::string> images;
    std::string clean;
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) clean.push_back(c);
    }
    std::size_t pos = 0;
    while (pos < clean.size()) {
      std::size_t end = clean.find_first_of(";,", pos);
      if (end == std::string::npos) end = clean.size();
      const std::string item = clean.substr(pos, end - pos);
      pos = end + 1;
      if (item.empty()) continue;
      const std::size_t arrow = item.find("->");
      if (arrow != 1 || item.size() < 4) throw std::invalid_argument("bad rule item '" + item + "'");
      letters.push_back(item[0]);
      images.push_back(item.substr(3));
    }
    return {letters, images};
  }

  /// fibonacci, fibonacci2, reshuffled, reshuffled-mirror.
  static std::optional<SubstRule> builtin(std::string_view name) {
    if (name == "fibonacci") return SubstRule("ab", {"ab", "a"});
    if (name == "fibonacci2") return SubstRule("ab", {"ba", "a"});
    if (name == "reshuffled") return SubstRule("ab", {"aab", "ba"});
    if (name == "reshuffled-mirror") return SubstRule("ab", {"baa", "ab"});
    return std::nullopt;
  }

  /// A builtin name or inline rule text.
  static SubstRule from_text(std::string_view text) {
    if (auto r = builtin(text)) return *r;
    return parse(text);
  }

  static SubstRule fibonacci() { return *builtin("fibonacci"); }
  static SubstRule reshuffled() { return *builtin("reshuffled"); }

  const std::string& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }

  std::size_t index(char c) const {
    const std::size_t i = letters_.find(c);
    if (i == std::string::npos) throw std::invalid_argument(std::string("unknown letter '") + c + "'");
    return i;
  }

  const std::string& image(std::size_t i) const { return images_.at(i); }
  const std::string& image_of(char c) const { return images_[index(c)]; }

  std::string apply(std::string_view w) const {
    std::string out;
    out.reserve(w.size() * 2);
    for (char c : w) out += image_of(c);
    return out;
  }

  std::string apply(std::string_view w, int steps) const {
    std::string cur(w);
    for (int i = 0; i < steps; ++i) cur = apply(cur);
    return cur;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < size(); ++i) {
      if (i) s += "; ";
      s += letters_[i];
      s += "->";
      s += images_[i];
    }
    return s;
  }

  friend bool operator==(const SubstRule&, const SubstRule&) = default;

 private:
  std::string letters_;
  std::vector<std::string> images_;
};

/// m_ij = number of letters i in the image of letter j.
class SubstMatrix {
 public:
  explicit SubstMatrix(std::size_t n) : n_(n), e_(n * n, 0) {}
  SubstMatrix(std::size_t n, std::vector<std::int64_t> row_major) : n_(n), e_(std::move(row_major)) {
    if (e_.size() != n * n) throw std::invalid_argument("matrix size mismatch");
  }

  std::size_t size() const { return n_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }

  friend SubstMatrix operator*(const SubstMatrix& p, const SubstMatrix& q) {
    SubstMatrix r(p.n_);
    for (std::size_t i = 0; i < p.n_; ++i)
      for (std::size_t j = 0; j < p.n_; ++j)
        for (std::size_t k = 0; k < p.n_; ++k) r(i, j) = detail::checked_add(r(i, j), detail::checked_mul(p(i, k), q(k, j)));
    return r;
  }

  std::vector<std::int64_t> operator*(const std::vector<std::int64_t>& v) const {
    std::vector<std::int64_t> r(n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  bool strictly_positive() const {
    return std::all_of(e_.begin(), e_.end(), [](std::int64_t x) { return x > 0; });
  }

  friend bool operator==(const SubstMatrix&, const SubstMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<std::int64_t> e_;
};

inline SubstMatrix substitution_matrix(const SubstRule& rule) {
  SubstMatrix m(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j)
    for (char c : rule.image(j)) m(rule.index(c), j) += 1;
  return m;
}

inline std::vector<std::int64_t> letter_counts(const SubstRule& rule, std::string_view w) {
  std::vector<std::int64_t> counts(rule.size(), 0);
  for (char c : w) counts[rule.index(c)] += 1;
  return counts;
}

/// Some power of the matrix is strictly positive (Wielandt bound n^2 - 2n + 2).
inline bool is_primitive(const SubstMatrix& m) {
  const std::size_t n = m.size();
  const std::size_t bound = n * n - 2 * n + 2;
  SubstMatrix p = m;
  for (std::size_t k = 1; k <= bound; ++k) {
    if (p.strictly_positive()) return true;
    // Work with the 0/1 pattern so entries never overflow.
    SubstMatrix pattern(n);
    const SubstMatrix next = p * m;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) pattern(i, j) = next(i, j) > 0 ? 1 : 0;
    p = pattern;
  }
  return p.strictly_positive();
}

struct PFData {
  GoldenNum lambda;
  GoldenNum lambda_minus;
  std::vector<GoldenNum> left;   // natural tile lengths, smallest entry 1
  std::vector<GoldenNum> right;  // letter frequencies, summing to 1
};

namespace detail {

inline std::optional<std::int64_t> exact_isqrt(std::int64_t v) {
  if (v < 0) return std::nullopt;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  if (r * r != v) return std::nullopt;
  return r;
}

}  // namespace detail

/// Exact eigendata for primitive two-letter rules with eigenvalues in Q(sqrt5).
inline PFData pf_data(const SubstRule& rule) {
  if (rule.size() != 2) throw UnsupportedRule("exact PF data needs a two-letter alphabet");
  const SubstMatrix m = substitution_matrix(rule);
  if (!is_primitive(m)) throw UnsupportedRule("rule is not primitive");
  const std::int64_t p = m(0, 0), q = m(0, 1), r = m(1, 0), s = m(1, 1);
  const std::int64_t disc = (p - s) * (p - s) + 4 * q * r;
  GoldenNum root;
  if (auto j = detail::exact_isqrt(disc)) {
    root = GoldenNum(static_cast<long long>(*j));
  } else if (disc % 5 == 0 && detail::exact_isqrt(disc / 5)) {
    root = GoldenNum(Rational(0), Rational(*detail::exact_isqrt(disc / 5)));
  } else {
    throw UnsupportedRule("eigenvalues do not lie in Q(sqrt5)");
  }
  const GoldenNum half(Rational(1, 2));
  const GoldenNum trace(static_cast<long long>(p + s));
  PFData pf;
  pf.lambda = (trace + root) * half;
  pf.lambda_minus = (trace - root) * half;
  const GoldenNum gp(static_cast<long long>(p));
  // Primitive 2x2 matrices have q, r > 0, so these kernels are nonzero.
  std::vector<GoldenNum> v{GoldenNum(static_cast<long long>(q)), pf.lambda - gp};
  std::vector<GoldenNum> u{GoldenNum(static_cast<long long>(r)), pf.lambda - gp};
  const GoldenNum vs = v[0] + v[1];
  for (auto& x : v) x /= vs;
  const GoldenNum umin = min(u[0], u[1]);
  for (auto& x : u) x /= umin;
  pf.left = std::move(u);
  pf.right = std::move(v);
  return pf;
}

inline std::vector<GoldenNum> letter_frequencies(const SubstRule& rule) { return pf_data(rule).right; }

/// A finite piece of a bi-infinite word: left part ends at the marker.
struct TwoSidedWord {
  std::string left;
  std::string right;

  std::string to_string() const { return left + "|" + right; }

  static TwoSidedWord parse(std::string_view s) {
    const std::size_t bar = s.find('|');
    if (bar == std::string_view::npos) throw std::invalid_argument("two-sided word needs a '|' marker");
    TwoSidedWord w{std::string(s.substr(0, bar)), std::string(s.substr(bar + 1))};
    if (w.left.empty() && w.right.empty()) throw std::invalid_argument("empty seed word");
    return w;
  }

  /// Letter at integer position i; position 0 is the first letter right of the marker.
  char at(std::int64_t i) const {
    if (i >= 0) return right.at(static_cast<std::size_t>(i));
    return left.at(left.size() - static_cast<std::size_t>(-i));
  }

  friend bool operator==(const TwoSidedWord&, const TwoSidedWord&) = default;
};

inline TwoSidedWord iterate_word(const SubstRule& rule, const TwoSidedWord& seed, int steps) {
  if (seed.left.empty() && seed.right.empty()) throw std::invalid_argument("empty seed word");
  for (char c : seed.left + seed.right) rule.index(c);
  return {rule.apply(seed.left, steps), rule.apply(seed.right, steps)};
}

/// The limit of rho^(start + j*period)(seed), materialised on demand.
class WordGenerator {
 public:
  WordGenerator(SubstRule rule, TwoSidedWord seed, int start, int period, std::size_t radius_cap)
      : rule_(std::move(rule)), seed_(std::move(seed)), start_(start), period_(period), cap_(radius_cap) {}

  /// Returns `radius` letters on each side of the marker (fewer if a side never grows).
  TwoSidedWord window(std::size_t radius) const {
    if (radius > cap_) throw std::out_of_range("requested radius exceeds the configured cap");
    TwoSidedWord w = iterate_word(rule_, seed_, start_);
    while (w.left.size() < radius || w.right.size() < radius) {
      TwoSidedWord next = iterate_word(rule_, w, period_);
      if (next.left.size() == w.left.size() && next.right.size() == w.right.size()) break;
      w = std::move(next);
    }
    if (w.left.size() > radius) w.left.erase(0, w.left.size() - radius);
    if (w.right.size() > radius) w.right.resize(radius);
    return w;
  }

  int start() const { return start_; }
  int period() const { return period_; }

 private:
  SubstRule rule_;
  TwoSidedWord seed_;
  int start_;
  int period_;
  std::size_t cap_;
};

struct TwoCycle {
  int period;  // 1 for a fixed point, 2 for a genuine 2-cycle
  WordGenerator first;
  WordGenerator second;  // rho applied to first
};

/// Finds k0 and p in {1,2} such that the iterates rho^(k0 + jp)(seed) nest around
/// the marker, i.e. rho^p(L) ends with L and rho^p(R) starts with R.
inline TwoCycle two_cycle(const SubstRule& rule, const TwoSidedWord& seed, int max_start = 16,
                          std::size_t radius_cap = 100000) {
  TwoSidedWord w = iterate_word(rule, seed, 0);
  for (int k0 = 0; k0 <= max_start; ++k0) {
    for (int p = 1; p <= 2; ++p) {
      const TwoSidedWord n = iterate_word(rule, w, p);
      const bool left_ok = n.left.size() >= w.left.size() &&
                           n.left.compare(n.left.size() - w.left.size(), w.left.size(), w.left) == 0;
      const bool right_ok = n.right.compare(0, w.right.size(), w.right) == 0;
      if (left_ok && right_ok) {
        WordGenerator first(rule, seed, k0, p, radius_cap);
        WordGenerator second(rule, seed, k0 + 1, p, radius_cap);
        return {p, first, second};
      }
    }
    w = iterate_word(rule, w, 1);
    if (w.left.size() + w.right.size() > 4 * radius_cap) break;
  }
  throw TwoCycleError("seed is not eventually periodic within the configured bound");
}

namespace detail {

inline std::size_t count_factors(std::string_view w, std::size_t n) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i + n <= w.size(); ++i) seen.insert(w.substr(i, n));
  return seen.size();
}

}  // namespace detail

/// Number of distinct length-n factors, read off a long iterate and accepted
/// once the count is stable under doubling the inspected prefix.
inline std::size_t factor_complexity(const SubstRule& rule, std::size_t n,
                                     std::size_t max_window = std::size_t{1} << 24) {
  if (n < 1) throw std::invalid_argument("factor length must be positive");
  std::size_t window = std::max<std::size_t>(10 * n, 1000);
  std::string word(1, rule.letters()[0]);
  for (;;) {
    while (word.size() < 2 * window) {
      std::string next = rule.apply(word);
      if (next.size() == word.size()) throw UnsupportedRule("rule does not grow words");
      word = std::move(next);
    }
    const std::size_t c1 = detail::count_factors(std::string_view(word).substr(0, window), n);
    const std::size_t c2 = detail::count_factors(std::string_view(word).substr(0, 2 * window), n);
    if (c1 == c2) return c1;
    if (2 * window > max_window) return c2;
    window *= 2;
  }
}

/// n steps of the random Fibonacci substitution from "a": each a becomes ab with
/// probability p and ba otherwise, drawn independently at every position.
inline std::string random_realization(double p, int n, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0,1]");
  if (n < 0) throw std::invalid_argument("step count must be nonnegative");
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::string w = "a";
  for (int step = 0; step < n; ++step) {
    std::string next;
    next.reserve(w.size() * 2);
    for (char c : w) {
      if (c == 'b') {
        next.push_back('a');
      } else if (p == 1.0 || (p != 0.0 && uniform() < p)) {
        next += "ab";
      } else {
        next += "ba";
      }
    }
    w = std::move(next);
  }
  return w;
}

/// Tiles of natural length; [beta] inflates to lambda*len(beta), cut into the
/// image of beta laid out left to right. offsets(alpha, beta) lists where the
/// alpha-children start inside the parent.
class GeometricInflation {
 public:
  explicit GeometricInflation(const SubstRule& rule) : rule_(rule), pf_(pf_data(rule)) {
    const std::size_t k = rule.size();
    offsets_.assign(k, std::vector<std::vector<GoldenNum>>(k));
    for (std::size_t beta = 0; beta < k; ++beta) {
      GoldenNum x = 0;
      for (char c : rule.image(beta)) {
        const std::size_t alpha = rule.index(c);
        offsets_[alpha][beta].push_back(x);
        x += pf_.left[alpha];
      }
    }
  }

  const SubstRule& rule() const { return rule_; }
  const PFData& pf() const { return pf_; }
  const GoldenNum& lambda() const { return pf_.lambda; }
  const std::vector<GoldenNum>& lengths() const { return pf_.left; }
  const GoldenNum& length(std::size_t alpha) const { return pf_.left[alpha]; }
  std::size_t size() const { return rule_.size(); }

  const std::vector<GoldenNum>& offsets(std::size_t alpha, std::size_t beta) const {
    return offsets_[alpha][beta];
  }

  /// Largest |t - s| over all displacement pairs.
  GoldenNum max_displacement_gap() const {
    GoldenNum best = 0;
    for (const auto& row : offsets_)
      for (const auto& ts : row)
        for (const auto& t : ts)
          for (const auto& row2 : offsets_)
            for (const auto& ss : row2)
              for (const auto& s : ss) best = max(best, (t - s).abs());
    return best;
  }

 private:
  SubstRule rule_;
  PFData pf_;
  std::vector<std::vector<std::vector<GoldenNum>>> offsets_;
};

inline GeometricInflation geometric_inflation(const SubstRule& rule) { return GeometricInflation(rule); }

}  // namespace aperiodic

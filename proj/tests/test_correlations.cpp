#include <aperiodic/correlations.hpp>
#include <aperiodic/model_set.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

using namespace aperiodic;

namespace {

const GoldenNum tau = GoldenNum::tau();
const GoldenNum itau = tau - 1;
const std::string kPairs[4] = {"aa", "ab", "ba", "bb"};

const RenormSystem& fib_system() {
  static const RenormSystem s = build_renorm_system(SubstRule::fibonacci());
  return s;
}

const PairCorrelation& fib_renorm() {
  static const PairCorrelation p = solve_renorm(fib_system());
  return p;
}

const PairCorrelation& fib_windows() {
  static const PairCorrelation p(ModelSetSpec::fibonacci());
  return p;
}

GoldenNum random_golden(std::mt19937_64& gen, int range) {
  std::uniform_int_distribution<int> num(-range * 64, range * 64);
  return {Rational(num(gen), 64), Rational(num(gen), 128)};
}

// All admissible z with |z| <= r for the given pair.
std::vector<GoldenInt> admissible(char a, char b, int r) { return admissible_differences(fib_system(), a, b, GoldenNum(r)); }

// Hand-written Fibonacci relations, before dropping terms that vanish.
std::vector<RenormTerm> fibonacci_relation(std::size_t a, std::size_t b, GoldenInt z) {
  const GoldenInt w = *(GoldenNum(z) * itau).to_golden_int();
  const GoldenNum c = itau;
  if (a == 0 && b == 0) return {{{0, 0, w}, c}, {{0, 1, w}, c}, {{1, 0, w}, c}, {{1, 1, w}, c}};
  if (a == 0 && b == 1) return {{{0, 0, w - GoldenInt(1)}, c}, {{1, 0, w - GoldenInt(1)}, c}};
  if (a == 1 && b == 0) return {{{0, 0, w + GoldenInt(1)}, c}, {{0, 1, w + GoldenInt(1)}, c}};
  return {{{0, 0, w}, c}};
}

}  // namespace

TEST(GFunctions, Examples) {
  EXPECT_EQ(g_exact('a', 'a', GoldenNum(0)), itau);
  EXPECT_NEAR(g_eval('a', 'a', 0), 0.6180339887498949, 1e-15);
  EXPECT_EQ(g_exact('b', 'a', GoldenNum(Rational(1, 2))), itau * GoldenNum(Rational(1, 2)));
  EXPECT_NEAR(g_eval('b', 'a', 0.5), 0.30901699437494745, 1e-15);
  EXPECT_EQ(g_exact('b', 'b', GoldenNum(1)), GoldenNum(0));
  EXPECT_EQ(g_eval('b', 'b', 1), 0.0);
}

TEST(GFunctions, ShapeProperties) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 400; ++i) {
    const GoldenNum y = random_golden(gen, 3);
    for (const auto& p : kPairs) {
      const GoldenNum g = g_exact(p[0], p[1], y);
      EXPECT_GE(g.sign(), 0);
      if (y.abs() > tau) {
        EXPECT_TRUE(g.is_zero());
      }
      EXPECT_NEAR(g_eval(p[0], p[1], to_float(y)), to_float(g), 1e-14);
    }
    EXPECT_EQ(g_exact('a', 'b', y), g_exact('b', 'a', -y));
  }
}

TEST(GFunctions, ContinuousAtBreakpoints) {
  const GoldenNum eps(Rational(1, 1000000));
  for (const GoldenNum& y0 : {GoldenNum(0), tau - 1, GoldenNum(1), tau, -tau, 1 - tau, GoldenNum(-1), itau, -itau}) {
    for (const auto& p : kPairs) {
      const GoldenNum l = g_exact(p[0], p[1], y0 - eps);
      const GoldenNum r = g_exact(p[0], p[1], y0 + eps);
      EXPECT_LE((l - r).abs(), GoldenNum(Rational(2, 1000000))) << p;
    }
  }
}

// The piecewise formulas are the overlap volumes of the coding windows.
TEST(GFunctions, EqualWindowOverlaps) {
  const ModelSetSpec spec = ModelSetSpec::fibonacci();
  std::mt19937_64 gen(2);
  for (int i = 0; i < 400; ++i) {
    const GoldenNum y = random_golden(gen, 2);
    for (const auto& p : kPairs) EXPECT_EQ(window_g(spec, p[0], p[1], y), g_exact(p[0], p[1], y)) << p;
  }
}

TEST(NuPair, Examples) {
  EXPECT_NEAR(nu_pair('a', 'a', GoldenInt(0)), 0.6180339887498949, 1e-15);
  EXPECT_NEAR(nu_pair('a', 'b', GoldenInt(0, 1)), 0.3819660112501051, 1e-15);
  EXPECT_EQ(nu_pair('b', 'b', GoldenInt(0, 1)), 0.0);
  // An a followed at distance tau by a b is the two-letter word "ab".
  EXPECT_EQ(fib_windows().nu_exact('a', 'b', GoldenInt(0, 1)), patch_frequency(PatchSpec::parse("a@0 b@t")));
}

TEST(Covariogram, Examples) {
  const ModelSetSpec spec = ModelSetSpec::fibonacci();
  EXPECT_NEAR(covariogram(spec.total(), 0), 1.0, 1e-15);
  EXPECT_EQ(covariogram(spec.total(), kTau), 0.0);
  EXPECT_EQ(covariogram(spec.total(), -kTau), 0.0);
  EXPECT_EQ(covariogram_exact(spec.total(), GoldenNum(0)), GoldenNum(1));
  EXPECT_EQ(covariogram_exact(spec.total(), tau), GoldenNum(0));
}

TEST(Covariogram, MixedEqualsG) {
  const ModelSetSpec spec = ModelSetSpec::fibonacci();
  for (int i = 0; i < 64; ++i) {
    const double y = -1.8 + 3.6 * i / 63.0;
    for (const auto& p : kPairs)
      EXPECT_NEAR(mixed_covariogram(spec.window(p[0]), spec.window(p[1]), spec.total().volume(), y), g_eval(p[0], p[1], y), 1e-14)
          << p << " " << y;
  }
}

TEST(Covariogram, SumOfPairsIsTotal) {
  const ModelSetSpec spec = ModelSetSpec::fibonacci();
  std::mt19937_64 gen(3);
  for (int i = 0; i < 200; ++i) {
    const GoldenNum y = random_golden(gen, 2);
    GoldenNum s = 0;
    for (const auto& p : kPairs) s += g_exact(p[0], p[1], y);
    EXPECT_EQ(s, covariogram_exact(spec.total(), y));
  }
}

TEST(Autocorrelation, Examples) {
  EXPECT_NEAR(autocorrelation(GoldenInt(0)), 1.0, 1e-15);
  EXPECT_EQ(fib_windows().autocorrelation_exact(GoldenInt(0)), GoldenNum(1));
  // star(1) = 1: g(1) = (tau - 1)/tau.
  EXPECT_EQ(fib_windows().autocorrelation_exact(GoldenInt(1)), itau * itau);
  double s = 0;
  for (const auto& p : kPairs) s += g_eval(p[0], p[1], 1.0);
  EXPECT_NEAR(autocorrelation(GoldenInt(1)), s, 1e-15);
  EXPECT_EQ(autocorrelation(GoldenInt(2, -1)), 0.0);  // star = 1 + tau > tau
  EXPECT_EQ(autocorrelation(GoldenInt(5, 0)), 0.0);
}

TEST(RenormBuild, FibonacciMatchesHandRelations) {
  const RenormSystem& s = fib_system();
  EXPECT_EQ(s.bound(), tau * tau);
  bool seen[2][2] = {};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const CorrIndex& idx = s.indices()[i];
    seen[idx.alpha][idx.beta] = true;
    std::vector<RenormTerm> expected;
    for (const auto& t : fibonacci_relation(idx.alpha, idx.beta, idx.z))
      if (s.admissible(t.index.alpha, t.index.beta, t.index.z)) expected.push_back(t);
    const auto& row = s.row(i);
    ASSERT_EQ(row.size(), expected.size());
    for (const auto& t : expected) {
      const auto it = std::find_if(row.begin(), row.end(), [&](const RenormTerm& r) { return r.index == t.index; });
      ASSERT_NE(it, row.end());
      EXPECT_EQ(it->coeff, t.coeff);
    }
  }
  for (auto& r : seen)
    for (bool b : r) EXPECT_TRUE(b);
}

TEST(RenormBuild, FibonacciRowShapes) {
  const RenormSystem& s = fib_system();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const CorrIndex& idx = s.indices()[i];
    const GoldenInt w = *(GoldenNum(idx.z) * itau).to_golden_int();
    if (idx.alpha == 1 && idx.beta == 1) {
      ASSERT_EQ(s.row(i).size(), 1U);
      EXPECT_EQ(s.row(i)[0].index, (CorrIndex{0, 0, w}));
      EXPECT_EQ(s.row(i)[0].coeff, itau);
    }
    if (idx.alpha == 1 && idx.beta == 0) {
      for (const auto& t : s.row(i)) {
        EXPECT_EQ(t.index.z, w + GoldenInt(1));
        EXPECT_EQ(t.index.alpha, 0U);
        EXPECT_EQ(t.coeff, itau);
      }
    }
  }
}

TEST(RenormBuild, ReshuffledCentralRow) {
  const RenormSystem s = build_renorm_system(SubstRule::reshuffled());
  EXPECT_EQ(s.lambda(), tau * tau);
  const auto i = s.find({1, 1, GoldenInt(0)});
  ASSERT_TRUE(i.has_value());
  const auto& row = s.row(*i);
  const auto it = std::find_if(row.begin(), row.end(), [](const RenormTerm& t) { return t.index == CorrIndex{1, 1, GoldenInt(0)}; });
  ASSERT_NE(it, row.end());
  EXPECT_EQ(it->coeff, itau * itau);
}

TEST(RenormBuild, ClosesAtTau) {
  const RenormSystem s = build_renorm_system(SubstRule::fibonacci(), tau);
  for (const auto& idx : s.indices()) EXPECT_LE(GoldenNum(idx.z).abs(), tau);
  EXPECT_GT(s.size(), 4U);
}

TEST(RenormBuild, ReportsMissingIndex) {
  try {
    build_renorm_system(SubstRule::fibonacci(), GoldenNum(1));
    FAIL() << "expected a closure error";
  } catch (const ClosureError& e) {
    EXPECT_GT(GoldenNum(e.z).abs(), GoldenNum(1));
  }
}

TEST(RenormSolve, OneDimensionalAndExact) {
  const RenormSystem& s = fib_system();
  EXPECT_EQ(renorm_rank(s), s.size() - 1);
  const PairCorrelation& r = fib_renorm();
  EXPECT_EQ(r.nu_exact('a', 'a', GoldenInt(0)), itau);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const CorrIndex& idx = s.indices()[i];
    const char a = s.letters()[idx.alpha], b = s.letters()[idx.beta];
    EXPECT_EQ(r.core_values()[i], fib_windows().nu_exact(a, b, idx.z));
  }
  EXPECT_NEAR(r.nu('a', 'a', GoldenInt(3, 2)), fib_windows().nu('a', 'a', GoldenInt(3, 2)), 1e-10);
  for (const auto& p : kPairs) EXPECT_EQ(r.nu_exact(p[0], p[1], GoldenInt(3, 2)), fib_windows().nu_exact(p[0], p[1], GoldenInt(3, 2)));
}

TEST(RenormSolve, DegenerateSystemsReported) {
  // Two decoupled copies of a singular block: kernel of dimension 2.
  const GoldenNum h(Rational(1, 2));
  const CorrIndex i0{0, 0, GoldenInt(0)}, i1{1, 1, GoldenInt(0)}, i2{0, 0, GoldenInt(1)}, i3{1, 1, GoldenInt(1)};
  const RenormSystem two("ab", tau, {i0, i1, i2, i3}, {{{i1, GoldenNum(1)}}, {{i0, GoldenNum(1)}}, {{i3, GoldenNum(1)}}, {{i2, GoldenNum(1)}}});
  EXPECT_THROW(solve_renorm(two), DegeneracyError);
  const RenormSystem none("ab", tau, {i0, i1}, {{{i1, h}}, {{i0, h}}});
  EXPECT_THROW(solve_renorm(none), DegeneracyError);
  const RenormSystem ok("ab", tau, {i0, i1}, {{{i1, GoldenNum(1)}}, {{i0, GoldenNum(1)}}});
  const PairCorrelation p = solve_renorm(ok);
  EXPECT_EQ(p.nu_exact('a', 'a', GoldenInt(0)), h);
}

TEST(CorrelationProperty, RoutesAgreeUpToFifty) {
  std::size_t checked = 0;
  for (const auto& p : kPairs)
    for (GoldenInt z : admissible(p[0], p[1], 50)) {
      EXPECT_EQ(fib_renorm().nu_exact(p[0], p[1], z), fib_windows().nu_exact(p[0], p[1], z)) << p;
      ++checked;
    }
  EXPECT_GT(checked, 250U);
}

TEST(CorrelationProperty, WindowRouteSatisfiesRelations) {
  std::mt19937_64 gen(4);
  std::vector<std::pair<std::size_t, GoldenInt>> pool;
  for (std::size_t p = 0; p < 4; ++p)
    for (GoldenInt z : admissible(kPairs[p][0], kPairs[p][1], 100)) pool.emplace_back(p, z);
  const RenormSystem& s = fib_system();
  for (int i = 0; i < 1000; ++i) {
    const auto& [p, z] = pool[gen() % pool.size()];
    const CorrIndex idx{s.letter(kPairs[p][0]), s.letter(kPairs[p][1]), z};
    double rhs = 0;
    for (const auto& t : s.expand(idx))
      rhs += to_float(t.coeff) * fib_windows().nu(s.letters()[t.index.alpha], s.letters()[t.index.beta], t.index.z);
    EXPECT_NEAR(fib_windows().nu(kPairs[p][0], kPairs[p][1], z), rhs, 1e-12);
  }
}

TEST(CorrelationProperty, NormalisationSymmetryPositivity) {
  for (const PairCorrelation* c : {&fib_renorm(), &fib_windows()}) {
    EXPECT_EQ(c->nu_exact('a', 'a', GoldenInt(0)) + c->nu_exact('b', 'b', GoldenInt(0)), GoldenNum(1));
    for (std::int64_t m = -12; m <= 12; ++m)
      for (std::int64_t n = -8; n <= 8; ++n) {
        const GoldenInt z(m, n);
        for (const auto& p : kPairs) {
          EXPECT_EQ(c->nu_exact(p[0], p[1], z), c->nu_exact(p[1], p[0], -z));
          EXPECT_GE(c->nu_exact(p[0], p[1], z).sign(), 0);
        }
      }
  }
  const ModelSetSpec spec = ModelSetSpec::fibonacci();
  for (const auto& p : kPairs)
    for (GoldenInt z : admissible(p[0], p[1], 30))
      if (difference_window(spec, p[0], p[1]).interior_contains(GoldenNum(z.star()))) {
        EXPECT_GT(fib_windows().nu_exact(p[0], p[1], z).sign(), 0);
      }
}

TEST(CorrelationProperty, CountingOracle) {
  const ModelSetSpec spec = ModelSetSpec::fibonacci();
  const double length = 1e5 * kSqrt5 / kTau;
  const TypedPointSet pts = cut_and_project(spec, 0.0, length);
  ASSERT_GE(pts.points.size(), 100000U);
  std::unordered_map<GoldenInt, char> at;
  for (const auto& p : pts.points) at.emplace(p.x, p.type);
  const GoldenNum limit(static_cast<long long>(length - 11));
  std::vector<bool> in_left;
  std::size_t left = 0;
  for (const auto& p : pts.points) {
    in_left.push_back(GoldenNum(p.x) <= limit);
    left += in_left.back();
  }
  for (const auto& pr : kPairs)
    for (GoldenInt z : admissible(pr[0], pr[1], 10)) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < pts.points.size(); ++i) {
        const auto& p = pts.points[i];
        if (p.type != pr[0] || !in_left[i]) continue;
        auto it = at.find(p.x + z);
        if (it != at.end() && it->second == pr[1]) ++hits;
      }
      EXPECT_NEAR(static_cast<double>(hits) / static_cast<double>(left), fib_windows().nu(pr[0], pr[1], z), 1e-3) << pr;
    }
}

TEST(CorrelationProperty, ReshuffledRenormMatchesCounting) {
  const SubstRule rule = SubstRule::reshuffled();
  const RenormSystem s = build_renorm_system(rule);
  EXPECT_EQ(renorm_rank(s), s.size() - 1);
  const PairCorrelation r = solve_renorm(s);
  EXPECT_EQ(r.nu_exact('a', 'a', GoldenInt(0)), itau);
  EXPECT_EQ(r.nu_exact('b', 'b', GoldenInt(0)), itau * itau);
  const std::string word = rule.apply("a", 13);
  std::vector<GoldenInt> xs;
  std::unordered_map<GoldenInt, char> at;
  GoldenInt x(0);
  for (char c : word) {
    xs.push_back(x);
    at.emplace(x, c);
    x = x + (c == 'a' ? GoldenInt(0, 1) : GoldenInt(1));
  }
  const double end = x.to_double() - 6;
  std::size_t left = 0;
  for (GoldenInt p : xs) left += p.to_double() <= end;
  for (const auto& pr : kPairs)
    for (GoldenInt z : admissible_differences(s, pr[0], pr[1], GoldenNum(5))) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (word[i] != pr[0] || xs[i].to_double() > end) continue;
        auto it = at.find(xs[i] + z);
        if (it != at.end() && it->second == pr[1]) ++hits;
      }
      EXPECT_NEAR(static_cast<double>(hits) / static_cast<double>(left), r.nu(pr[0], pr[1], z), 1e-3) << pr;
    }
}

TEST(AutocorrelationIdentity, ReducedShiftVariantHolds) {
  for (const auto& p : kPairs)
    for (GoldenInt z : admissible(p[0], p[1], 8)) {
      const IdentityResiduals r = autocorrelation_identity(fib_windows(), z);
      EXPECT_NEAR(r.reduced_shift, 0.0, 1e-12);
    }
}

TEST(AutocorrelationIdentity, UnitShiftVariantsFail) {
  const IdentityResiduals r = autocorrelation_identity(fib_windows(), GoldenInt(0));
  EXPECT_GT(std::fabs(r.constant_head), 1e-3);
  EXPECT_GT(std::fabs(r.scaled_head), 1e-3);
}

// aperiodic: words, model sets, frequencies, correlations, windows and spectra.
// Exit status: 0 ok, 2 usage error, 3 numeric or validation failure.

#include <aperiodic/aperiodic.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace aperiodic;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class F>
void with_output(const std::string& path, F&& write) {
  if (path.empty()) return;
  if (path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot open '" + path + "' for writing");
  write(os);
}

std::vector<Complex> parse_weights(const std::string& text) {
  std::vector<Complex> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t colon = item.find(':');
    try {
      if (colon == std::string::npos) {
        out.emplace_back(std::stod(item), 0.0);
      } else {
        out.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
      }
    } catch (const std::logic_error&) {
      throw UsageError("bad weight '" + item + "' (use re or re:im)");
    }
  }
  if (out.size() != 2) throw UsageError("--weights needs two comma-separated values");
  return out;
}

bool is_fibonacci(const SubstRule& r) { return r.letters() == "ab" && r.image(0) == "ab" && r.image(1) == "a"; }

// --- generate --------------------------------------------------------------------

struct GenerateArgs {
  std::string rule = "fibonacci";
  int steps = -1;
  std::string seed_word;
  bool modelset = false;
  std::string window = "(-1,t-1]";
  std::string region;
  double p = -1;
  std::uint64_t seed = 0;
  std::string out = "-";
};

void cmd_generate(const GenerateArgs& a) {
  if (a.modelset) {
    if (a.steps >= 0 || !a.seed_word.empty() || a.p >= 0) throw UsageError("--modelset excludes --steps, --seed-word and --random");
    if (a.region.empty()) throw UsageError("--modelset requires --region");
    if (!is_fibonacci(SubstRule::from_text(a.rule))) throw UsageError("--modelset supports the fibonacci rule only");
    const TypedPointSet pts = cut_and_project(ModelSetSpec::fibonacci(parse_window(a.window)), parse_window(a.region));
    with_output(a.out, [&](std::ostream& os) { write_points_csv(os, pts); });
    return;
  }
  if (!a.region.empty()) throw UsageError("--region requires --modelset");
  if (a.steps < 0) throw UsageError("--steps is required");
  if (a.p >= 0) {
    if (!a.seed_word.empty()) throw UsageError("--random grows from a; --seed-word does not apply");
    const std::string w = random_realization(a.p, a.steps, a.seed);
    with_output(a.out, [&](std::ostream& os) { os << w << '\n'; });
    return;
  }
  const SubstRule rule = SubstRule::from_text(a.rule);
  const TwoSidedWord w = iterate_word(rule, TwoSidedWord::parse(a.seed_word.empty() ? "a|a" : a.seed_word), a.steps);
  with_output(a.out, [&](std::ostream& os) { os << w.to_string() << '\n'; });
}

// --- freq ------------------------------------------------------------------------

void cmd_freq(const std::string& patch, const std::string& window) {
  const PatchSpec p = PatchSpec::parse(patch);
  const GoldenNum f = patch_frequency(ModelSetSpec::fibonacci(parse_window(window)), p);
  std::printf("%s ≈ %.15g\n", format_pretty(f).c_str(), to_float(f));
}

// --- corr ------------------------------------------------------------------------

struct CorrArgs {
  std::string rule = "fibonacci";
  std::string method;
  std::vector<std::string> z;
  double radius = -1;
  std::string pair = "all";
  std::string csv = "-";
};

void cmd_corr(const CorrArgs& a) {
  const SubstRule rule = SubstRule::from_text(a.rule);
  std::string method = a.method.empty() ? (is_fibonacci(rule) ? "windows" : "renorm") : a.method;
  if (method == "windows" && !is_fibonacci(rule)) throw UsageError("--method windows needs the fibonacci rule");
  if (a.z.empty() == (a.radius < 0)) throw UsageError("give either --z or --radius");
  std::shared_ptr<const RenormSystem> sys;
  std::optional<PairCorrelation> corr;
  if (method == "windows") {
    corr.emplace(ModelSetSpec::fibonacci());
  } else if (method == "renorm") {
    sys = std::make_shared<RenormSystem>(build_renorm_system(rule));
    corr.emplace(solve_renorm(*sys));
  } else {
    throw UsageError("--method must be windows or renorm");
  }
  std::vector<std::string> pairs;
  for (char x : rule.letters())
    for (char y : rule.letters()) pairs.push_back(std::string{x, y});
  if (a.pair != "all") {
    if (std::find(pairs.begin(), pairs.end(), a.pair) == pairs.end()) throw UsageError("unknown pair '" + a.pair + "'");
    pairs = {a.pair};
  }
  std::vector<CorrelationRow> rows;
  for (const auto& pr : pairs) {
    std::vector<GoldenInt> zs;
    if (!a.z.empty()) {
      for (const auto& t : a.z) zs.push_back(parse_golden_int(t));
    } else {
      if (!sys) sys = std::make_shared<RenormSystem>(build_renorm_system(rule));
      zs = admissible_differences(*sys, pr[0], pr[1], GoldenNum(Rational(static_cast<long long>(std::ceil(a.radius * 1024)), 1024)));
      std::erase_if(zs, [&](GoldenInt z) { return std::fabs(z.to_double()) > a.radius; });
    }
    for (GoldenInt z : zs) rows.push_back({z, pr, corr->nu_exact(pr[0], pr[1], z)});
  }
  with_output(a.csv, [&](std::ostream& os) { write_correlations_csv(os, rows); });
}

// --- diffract ---------------------------------------------------------------------

struct DiffractArgs {
  std::string rule = "fibonacci";
  std::string method;
  std::string window;
  std::string weights = "1,1";
  double kmax = 10;
  double imin = 1e-4;
  double eps = 1e-10;
  std::string deform;
  double check_patch = 0;
  bool product2d = false;
  std::string json, csv, svg;
};

Spectrum cocycle_spectrum(const GraphIFS& ifs, const WeightedComb& comb, double kmax, double imin, double eps) {
  // Internal cut-off from the interval-window decay bound; not a proof for fractal windows.
  const double vmax = comb.total_abs() / (kPi * kSqrt5 * std::sqrt(imin));
  auto up = [](double x) { return GoldenNum(Rational(static_cast<long long>(std::ceil(x * 1024)) + 1, 1024)); };
  const std::vector<GoldenInt> ys =
      enumerate_strip(Window::closed(-up(kmax * kSqrt5), up(kmax * kSqrt5)), Window::closed(-up(vmax * kSqrt5), up(vmax * kSqrt5)));
  std::vector<std::optional<BraggPeak>> found(ys.size());
  parallel_chunks(ys.size(), 64, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const WaveNumber q{ys[i]};
      if (std::fabs(q.value()) > kmax) continue;
      const Complex amp = fb_amplitude_cocycle(q, ifs, comb, eps);
      if (std::norm(amp) >= imin) found[i] = BraggPeak{q, q.value(), amp, std::norm(amp)};
    }
  });
  Spectrum s;
  for (auto& f : found)
    if (f) s.peaks.push_back(*f);
  return s;
}

int cmd_diffract(const DiffractArgs& a) {
  if (!(a.imin > 0)) throw UsageError("--imin must be positive");
  if (!(a.kmax > 0)) throw UsageError("--kmax must be positive");
  const SubstRule rule = SubstRule::from_text(a.rule);
  const bool fib = is_fibonacci(rule);
  const std::string method = a.method.empty() ? (fib ? "closed" : "cocycle") : a.method;
  const WeightedComb comb(parse_weights(a.weights)[0], parse_weights(a.weights)[1]);
  Spectrum s;
  std::optional<DeformCoeffs> deform;
  std::optional<ModelSetSpec> spec;
  std::optional<GraphIFS> ifs;
  if (method == "closed") {
    if (!fib) throw UsageError("closed form needs interval windows (fibonacci); use --method cocycle");
    spec.emplace(a.window.empty() ? ModelSetSpec::fibonacci() : ModelSetSpec::fibonacci(parse_window(a.window)));
    if (!a.deform.empty()) {
      if (a.deform == "equal") {
        const GoldenNum len = GoldenNum::sqrt5() / GoldenNum::tau();
        deform = deform_coeffs(len, len);
      } else {
        const std::size_t comma = a.deform.find(',');
        if (comma == std::string::npos) throw UsageError("--deform takes 'equal' or 'la,lb'");
        deform = deform_coeffs(parse_golden(a.deform.substr(0, comma)), parse_golden(a.deform.substr(comma + 1)));
      }
      s = deformed_spectrum(*deform, *spec, comb, a.kmax, a.imin);
    } else {
      s = enumerate_peaks(*spec, comb, a.kmax, a.imin);
    }
  } else if (method == "cocycle") {
    if (!a.window.empty() || !a.deform.empty()) throw UsageError("--window and --deform need --method closed");
    ifs.emplace(build_graph_ifs(rule));
    s = cocycle_spectrum(*ifs, comb, a.kmax, a.imin, a.eps);
  } else {
    throw UsageError("--method must be closed or cocycle");
  }

  int status = 0;
  std::printf("peaks: %zu\n", s.peaks.size());
  if (const auto z = s.at(WaveNumber{GoldenInt(0, 0)})) std::printf("I(0): %.17g\n", z->intensity);
  if (deform) {
    std::printf("alpha: %.17g\nbeta: %.17g\n", deform->alpha, deform->beta);
    const GoldenNum eq = GoldenNum::sqrt5() / GoldenNum::tau();
    if (deform->alpha_exact && deform->la == to_float(eq) && deform->lb == to_float(eq)) {
      double worst = 0;
      for (const auto& p : s.peaks) {
        const double shifted = std::norm(deformed_amplitude(p.q + WaveNumber{GoldenInt::tau()}, *deform, *spec, comb));
        worst = std::max(worst, std::fabs(shifted - p.intensity));
      }
      const bool ok = worst < 1e-6;
      std::printf("period τ/√5: %s (max deviation %.3g)\n", ok ? "PASS" : "FAIL", worst);
      if (!ok) status = 3;
    }
  }
  if (a.check_patch > 0) {
    Realization r;
    if (ifs) {
      r = substitution_realization(rule, 2 * a.check_patch);
    } else if (deform) {
      r = deformed_realization(*spec, *deform, a.check_patch);
    } else {
      r = model_set_realization(*spec, a.check_patch);
    }
    double worst = 0;
    for (const auto& p : s.peaks) worst = std::max(worst, std::abs(p.amplitude - finite_patch_amplitude(r, comb, p.k)));
    const bool ok = worst < 1e-2;
    std::printf("finite patch (%zu points): max deviation %.3g %s\n", r.x.size(), worst, ok ? "PASS" : "FAIL");
    if (!ok) status = 3;
  }
  with_output(a.json, [&](std::ostream& os) { write_spectrum_json(os, s); });
  with_output(a.csv, [&](std::ostream& os) { write_spectrum_csv(os, s); });
  with_output(a.svg, [&](std::ostream& os) {
    if (a.product2d) {
      std::vector<Peak2D> pk;
      for (const auto& p : s.peaks)
        for (const auto& q : s.peaks)
          if (p.intensity * q.intensity >= a.imin) pk.push_back({p.k, q.k, p.intensity * q.intensity});
      write_disk_chart_svg(os, pk, a.kmax);
    } else {
      write_bar_chart_svg(os, s, 0, a.kmax);
    }
  });
  return status;
}

// --- windows ----------------------------------------------------------------------

void cmd_windows(const std::string& rule_text, int depth, const std::string& csv, const std::string& svg) {
  if (depth < 0) throw UsageError("--depth must be nonnegative");
  const GraphIFS ifs = build_graph_ifs(SubstRule::from_text(rule_text));
  const WindowApprox w = iterate_windows(ifs, depth);
  std::printf("depth: %d\n", depth);
  for (std::size_t a = 0; a < w.size(); ++a) {
    std::printf("%c: components %zu, volume %s ≈ %.15g\n", w.letters[a], w.count(a), format_pretty(w.volumes[a]).c_str(),
                to_float(w.volumes[a]));
    if (w.count(a) <= 8)
      for (std::size_t i = 0; i < w.count(a); ++i) std::printf("  %s\n", format_window(w.interval(a, i)).c_str());
  }
  std::printf("overlap: %s\n", format_pretty(w.overlap).c_str());
  with_output(csv, [&](std::ostream& os) { write_intervals_csv(os, w); });
  with_output(svg, [&](std::ostream& os) { write_strip_chart_svg(os, w); });
  if (depth == 0) return;
  const BoxCountEstimate e = boundary_dimension(w);
  std::printf("box-count slope: %.6f (residual %.3g, %zu scales)\n", e.slope, e.residual, e.counts.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fibonacci-type substitutions, model sets and their diffraction"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "iterate a substitution or cut a model set");
  g->add_option("--rule", gen.rule, "built-in name or inline rule 'a->ab; b->a'");
  g->add_option("--steps", gen.steps, "substitution steps");
  g->add_option("--seed-word", gen.seed_word, "two-sided seed 'left|right' (default a|a)");
  g->add_flag("--modelset", gen.modelset, "emit a cut-and-project point set");
  g->add_option("--window", gen.window, "total window, e.g. '(-1,t-1]'");
  g->add_option("--region", gen.region, "physical region, e.g. '[0,5]'");
  g->add_option("--random", gen.p, "random Fibonacci substitution with P(ab) = p");
  g->add_option("--seed", gen.seed, "RNG seed");
  g->add_option("-o,--out", gen.out, "output path ('-' for stdout)");

  std::string patch, freq_window = "(-1,t-1]";
  auto* f = app.add_subcommand("freq", "exact frequency of a patch 'a@0 b@1*t'");
  f->add_option("patch", patch, "patch text")->required();
  f->add_option("--window", freq_window, "total window");

  CorrArgs ca;
  auto* c = app.add_subcommand("corr", "pair correlations nu_ab(z)");
  c->add_option("--rule", ca.rule);
  c->add_option("--method", ca.method, "windows or renorm");
  c->add_option("--z", ca.z, "exact difference 'm+n*t' (repeatable)");
  c->add_option("--radius", ca.radius, "all admissible z with |z| <= radius");
  c->add_option("--pair", ca.pair, "aa, ab, ba, bb or all");
  c->add_option("--csv", ca.csv, "output path ('-' for stdout)");

  DiffractArgs da;
  auto* d = app.add_subcommand("diffract", "Bragg spectrum");
  d->add_option("--rule", da.rule);
  d->add_option("--method", da.method, "closed or cocycle");
  d->add_option("--window", da.window, "total window for the closed form");
  d->add_option("--weights", da.weights, "h_a,h_b (re or re:im)");
  d->add_option("--kmax", da.kmax);
  d->add_option("--imin", da.imin);
  d->add_option("--eps", da.eps, "cocycle cut-off");
  d->add_option("--deform", da.deform, "'equal' or exact tile lengths 'la,lb'");
  d->add_option("--check-patch", da.check_patch, "compare against a finite patch of this radius");
  d->add_flag("--product2d", da.product2d, "SVG shows the 2D direct product as disks");
  d->add_option("--json", da.json);
  d->add_option("--csv", da.csv);
  d->add_option("--svg", da.svg);

  std::string wrule = "fibonacci", wcsv, wsvg;
  int depth = 0;
  auto* w = app.add_subcommand("windows", "window IFS approximants and box-count slope");
  w->add_option("--rule", wrule);
  w->add_option("--depth", depth)->required();
  w->add_option("--csv", wcsv);
  w->add_option("--svg", wsvg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*g) cmd_generate(gen);
    if (*f) cmd_freq(patch, freq_window);
    if (*c) cmd_corr(ca);
    if (*d) return cmd_diffract(da);
    if (*w) cmd_windows(wrule, depth, wcsv, wsvg);
  } catch (const InsufficientDepth& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const NotPisotError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const UnsupportedRule& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}

// Acceptance run: one PASS/FAIL line per criterion. Arguments select a
// subset of criteria by number; no arguments runs all ten.
#include "lcp/bounds.hpp"
#include "lcp/cli.hpp"
#include "lcp/gallery.hpp"
#include "lcp/io.hpp"
#include "lcp/perimeter.hpp"
#include "lcp/random_body.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace lcp;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

SamplerConfig config(uint64_t seed, long samples) {
  SamplerConfig cfg;
  cfg.seed = seed;
  cfg.samples = samples;
  return cfg;
}

MeasureSpec gallery_spec(const std::string& name, double p = 1.5) {
  MeasureSpec m;
  m.id = name == "pnorm" ? "pnorm_p" + fmt(p) : name;
  m.gallery = name;
  m.p = p;
  return m;
}

// FAIL and SKIPPED counts per check id of a suite run.
struct Tally {
  std::map<std::string, std::map<std::string, long>> by_check;
  long count(const std::string& prefix, Verdict v) const {
    long k = 0;
    for (const auto& [id, c] : by_check)
      if (id.rfind(prefix, 0) == 0)
        if (auto it = c.find(to_string(v)); it != c.end()) k += it->second;
    return k;
  }
  long total(const std::string& prefix) const {
    long k = 0;
    for (const auto& [id, c] : by_check)
      if (id.rfind(prefix, 0) == 0)
        for (const auto& [v, m] : c) k += m;
    return k;
  }
};

Tally tally(const std::vector<BoundReport>& reports) {
  Tally t;
  for (const auto& r : reports) ++t.by_check[r.check_id][to_string(r.verdict)];
  return t;
}

std::string fail_list(const std::vector<BoundReport>& reports, size_t limit = 5) {
  std::ostringstream s;
  size_t k = 0;
  for (const auto& r : reports)
    if (r.verdict == Verdict::Fail && k++ < limit)
      s << " {" << r.check_id << " n=" << r.n << ' ' << r.measure << ' ' << r.body << " lhs=" << fmt(r.lhs)
        << " rhs=" << fmt(r.rhs) << " margin=" << fmt(r.margin) << '}';
  return s.str();
}

// Simplex: closed form sqrt(n/(n+2)) n and the facet integral at 1e5 samples.
void simplex_sharpness(Outcome& o) {
  double worst_closed = 0.0, worst_facet = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const GalleryEntry e = regular_simplex_isotropic(n);
    const double expected = std::sqrt(n / (n + 2.0)) * n;
    const GammaUniform g = gamma_uniform(*e.body);
    const double rel = std::abs(g.value - expected) / expected;
    worst_closed = std::max(worst_closed, rel);
    o.require(rel <= 1e-8, "closed form n=" + std::to_string(n));
    const PerimeterResult f = facet_perimeter(e.measure, e.measure.body(), config(101 + n, 100000));
    const double frel = std::abs(f.value - expected) / expected;
    worst_facet = std::max(worst_facet, frel);
    o.require(frel <= 0.01, "facet integral n=" + std::to_string(n) + " gave " + fmt(f.value));
  }
  o.detail << "max rel error closed form " << fmt(worst_closed, 3) << ", facet integral " << fmt(worst_facet, 3);
}

// Uniform bodies: L S(K) against the exact perimeter of the support, and
// Gamma of the cube measure.
void uniform_formula(Outcome& o) {
  double worst = 0.0, worst_cube = 0.0;
  for (const std::string name : {"cube", "cross_polytope"}) {
    for (int n = 2; n <= 8; ++n) {
      const GalleryEntry e = gallery_entry(name, n);
      const GammaUniform g = gamma_uniform(*e.body);
      const PerimeterResult p = perimeter(e.measure, e.measure.body(), config(7, 1000));
      o.require(p.exact, name + " n=" + std::to_string(n) + " perimeter not exact (" + p.method + ")");
      const double rel = std::abs(g.value - p.value) / g.value;
      worst = std::max(worst, rel);
      o.require(rel <= 1e-8, name + " n=" + std::to_string(n));
      if (name == "cube") {
        const double err = std::abs(g.value - n / std::sqrt(3.0));
        worst_cube = std::max(worst_cube, err);
        o.require(err <= 1e-10, "cube n/sqrt(3) n=" + std::to_string(n));
      }
    }
  }
  o.detail << "max rel |L S(K) - perimeter| " << fmt(worst, 3) << ", max |Gamma(mu_Q) - n/sqrt3| " << fmt(worst_cube, 3);
}

// 1D: 2 sup f <= 2, equality for the shifted exponential, and short
// intervals at the mode approach 2.
void one_dimensional(Outcome& o) {
  for (const auto& [name, mu] : gallery_1d()) {
    const double g = gamma_1d(mu);
    o.require(g <= 2.0 + 1e-12, name + " gamma_1d=" + fmt(g));
    if (name == "shifted_exp") o.require(std::abs(g - 2.0) <= 1e-12, "shifted_exp gamma_1d=" + fmt(g, 17));
  }
  const Measure1D mu = Measure1D::shifted_exp(1.0, -1.0);
  double last = 0.0;
  for (double len : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double m = mu.argmax();
    double best = 0.0;
    for (int k = 0; k <= 40; ++k) {
      double a = m - len + k * len / 20.0;
      a = std::max(a, mu.support_lo() + 1e-6 * len);
      best = std::max(best, perimeter_1d(mu, a, a + len).value);
    }
    o.detail << "len " << fmt(len) << ": " << fmt(best, 9) << "; ";
    last = best;
  }
  o.require(std::abs(last - 2.0) <= 1e-3, "interval search at length 1e-4");
}

SuiteConfig matrix_suite(int symmetric, int general, const std::vector<std::string>& checks) {
  SuiteConfig c;
  c.dimensions = {2, 3, 4, 6};
  c.measures = {gallery_spec("gaussian"), gallery_spec("pnorm", 1.0), gallery_spec("pnorm", 1.5),
                gallery_spec("pnorm", 3.0), gallery_spec("cube")};
  c.bodies.random_symmetric = symmetric;
  c.bodies.random_general = general;
  c.bodies.support = false;
  c.checks = checks;
  c.sampler.samples = 100000;
  return c;
}

void symmetric_bound(Outcome& o) {
  const SuiteResult r = run_suite(matrix_suite(50, 0, {"symmetric_gamma"}));
  const Tally t = tally(r.reports);
  const long main_total = t.by_check.count("symmetric_gamma") ? t.total("symmetric_gamma") -
                                                                    t.total("symmetric_gamma.")
                                                              : 0;
  o.require(t.count("symmetric_gamma", Verdict::Fail) == 0, "FAILs:" + fail_list(r.reports));
  o.require(main_total == 4 * 5 * 50, "expected 1000 4n reports, got " + std::to_string(main_total));
  o.require(t.count("symmetric_gamma", Verdict::Skipped) == 0, "skipped reports");
  const long geometric = t.total("symmetric_gamma.geometric");
  o.require(geometric == 4 * 5 * 50, "expected 1000 2n reports, got " + std::to_string(geometric));
  o.detail << main_total << " reports against 4n and " << geometric << " against 2n, "
           << t.count("symmetric_gamma", Verdict::PassWithinMargin) << " within margin";
}

void general_bound(Outcome& o) {
  const SuiteResult r = run_suite(matrix_suite(50, 50, {"general_gamma"}));
  const Tally t = tally(r.reports);
  o.require(t.count("general_gamma", Verdict::Fail) == 0, "FAILs:" + fail_list(r.reports));
  const long theorem = t.total("general_gamma.theorem");
  o.require(theorem == 4 * 5 * 100, "expected 2000 theorem reports, got " + std::to_string(theorem));
  o.require(t.count("general_gamma.theorem", Verdict::Skipped) == 0, "skipped theorem reports");
  long prop = 0, prop_skipped = 0, prop_zero_density = 0;
  for (const auto& rep : r.reports) {
    if (rep.check_id != "general_gamma.proposition") continue;
    ++prop;
    if (rep.verdict == Verdict::Skipped) {
      ++prop_skipped;
      if (rep.note.rfind("f(x_A) = 0", 0) == 0) ++prop_zero_density;
    }
  }
  o.require(prop_skipped == prop_zero_density, "proposition skipped with f(x_A) > 0");
  o.detail << theorem << " theorem reports, " << t.total("general_gamma.corollary") << " corollary, " << prop
           << " proposition (" << prop_zero_density << " with f(x_A) = 0)";
}

void level_sets(Outcome& o) {
  const std::vector<std::pair<std::string, double>> explicit_families{
      {"gaussian", 2.0}, {"pnorm", 1.0},          {"pnorm", 1.5},          {"pnorm", 3.0},
      {"cube", 1.5},     {"simplex", 1.5},        {"cross_polytope", 1.5}, {"body_norm_cube", 1.0},
      {"body_norm_cross_polytope", 1.0}};
  long mass = 0, inradius = 0, falsification = 0;
  for (int n : {1, 2, 3, 4, 6, 8}) {
    std::vector<std::pair<std::string, double>> fams = explicit_families;
    if (n == 1) fams = {{"gaussian", 2.0}, {"pnorm", 1.0}, {"pnorm", 3.0}, {"cube", 1.5}, {"extremal_1d", 1.5}};
    for (const auto& [name, p] : fams) {
      const GalleryEntry e = gallery_entry(name, n, p);
      const CheckContext ctx = make_context(e.measure, name, {}, config(31 + n, 20000));
      for (const auto& r : check_level_mass(ctx)) {
        o.require(r.verdict == Verdict::Pass || r.verdict == Verdict::PassWithinMargin,
                  "level_mass " + name + " n=" + std::to_string(n) + " t=" + fmt(r.params.at("t")) + " " +
                      to_string(r.verdict));
        o.require(r.params.at("t") >= 6.0 * n - 1e-12, "t-grid below 6n");
        ++mass;
      }
      for (const auto& r : check_level_inradius(ctx)) {
        if (r.verdict == Verdict::Skipped) continue;
        o.require(r.verdict == Verdict::Pass, "level_inradius " + name + " n=" + std::to_string(n) + " " +
                                                  to_string(r.verdict));
        ++inradius;
      }
    }
    if (n < 2) continue;
    for (const std::string name : {"product_exp", "product_gaussian"}) {
      const GalleryEntry e = gallery_entry(name, n);
      const CheckContext ctx = make_context(e.measure, name, {}, config(37 + n, 20000));
      for (const auto& r : check_level_inradius(ctx)) {
        if (r.verdict == Verdict::Skipped) continue;
        o.require(r.verdict == Verdict::FalsificationOnlyPass,
                  "level_inradius " + name + " n=" + std::to_string(n) + " " + to_string(r.verdict));
        ++falsification;
      }
    }
  }
  // One-dimensional exponential: mass 1 - e^{-t} against 1 - e^{-t/5}.
  const Measure ext = extremal_1d().measure;
  for (double t : {6.0, 7.0, 8.0, 10.0, 12.0}) {
    const auto m = level_mass_exact(ext, t);
    o.require(m && std::abs(*m - (1.0 - std::exp(-t))) <= 1e-12, "exponential mass at t=" + fmt(t));
    o.require(1.0 - std::exp(-t) >= 1.0 - std::exp(-t / 5.0), "exponential closed form at t=" + fmt(t));
  }
  o.require(inradius > 0 && falsification > 0, "no inradius reports");
  o.detail << mass << " level-mass reports, " << inradius << " exact inradius, " << falsification
           << " falsification-only inradius";
}

void unconditional_product(Outcome& o) {
  SuiteConfig c;
  c.dimensions = {2, 3, 4};
  c.measures = {gallery_spec("gaussian"), gallery_spec("pnorm", 1.0), gallery_spec("pnorm", 3.0),
                gallery_spec("cube"), gallery_spec("cross_polytope"), gallery_spec("product_exp"),
                gallery_spec("product_gaussian"), gallery_spec("body_norm_cube", 1.0)};
  c.bodies.random_symmetric = 10;
  c.bodies.random_general = 10;
  c.bodies.support = false;
  c.checks = {"unconditional", "product"};
  c.sampler.samples = 50000;
  const SuiteResult r = run_suite(c);
  const Tally t = tally(r.reports);
  o.require(r.summary.fails == 0, "FAILs:" + fail_list(r.reports));
  long fiber = 0;
  for (const auto& rep : r.reports)
    if (rep.check_id == "unconditional.fiber") {
      ++fiber;
      o.require(rep.params.at("eps") == 0.01, "fiber eps");
      o.require(rep.verdict == Verdict::Pass || rep.verdict == Verdict::PassWithinMargin, "fiber verdict");
    }
  const long unc = t.total("unconditional") - t.total("unconditional.") - t.count("unconditional", Verdict::Skipped);
  const long prod = t.total("product") - t.count("product", Verdict::Skipped);
  o.require(fiber > 0 && unc > 0 && prod > 0, "no applicable reports");
  o.detail << unc << " sqrt(2) n reports, " << prod << " product reports, " << fiber << " fiber reports";
}

void preliminaries(Outcome& o) {
  SuiteConfig c = default_suite();
  c.dimensions = {1, 2, 3, 4, 6, 8};
  c.measures.push_back(gallery_spec("product_gaussian"));
  c.bodies.random_symmetric = 5;
  c.bodies.random_general = 5;
  c.checks = {"preliminaries", "steinhagen", "surface_inradius"};
  const SuiteResult r = run_suite(c);
  o.require(r.summary.fails == 0, "FAILs:" + fail_list(r.reports));
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const GalleryEntry e = regular_simplex_isotropic(n);
    bool found = false;
    for (const auto& rep : check_preliminaries(make_context(e.measure, "simplex", {}, config(53, 5000))))
      if (rep.check_id == "preliminaries.kls_inradius") {
        found = true;
        worst = std::max(worst, std::abs(rep.slack));
        o.require(std::abs(rep.slack) <= 1e-8 && rep.verdict == Verdict::Pass,
                  "simplex kls slack n=" + std::to_string(n) + " = " + fmt(rep.slack));
      }
    o.require(found, "no kls report for the simplex");
  }
  std::set<std::string> ids;
  for (const auto& rep : r.reports) ids.insert(rep.check_id);
  o.detail << r.summary.total << " reports over " << ids.size() << " inequalities, max simplex kls slack "
           << fmt(worst, 3);
}

void cross_validation(Outcome& o) {
  struct Instance {
    std::string label;
    Measure mu;
    ConvexBody A;
  };
  Rng rng(2024);
  std::vector<Instance> cases;
  cases.push_back({"gaussian n=1 interval", Measure::gaussian(1), ConvexBody::box(Vec::Constant(1, -0.3), Vec::Constant(1, 1.2))});
  cases.push_back({"gaussian n=2 square", Measure::gaussian(2), ConvexBody::cube(2, 1.0)});
  cases.push_back({"gaussian n=3 random symmetric", Measure::gaussian(3), random_hpolytope(3, rng, true)});
  cases.push_back({"gaussian n=4 cube", Measure::gaussian(4), ConvexBody::cube(4, 0.8)});
  cases.push_back({"pnorm p=1 n=2 random", gallery_entry("pnorm", 2, 1.0).measure, random_hpolytope(2, rng, false)});
  cases.push_back({"pnorm p=3 n=3 random symmetric", gallery_entry("pnorm", 3, 3.0).measure,
                   random_hpolytope(3, rng, true)});
  cases.push_back({"cube measure n=2 inner square", gallery_entry("cube", 2).measure,
                   ConvexBody::cube(2, 1.0).translated(Vec::Constant(2, 0.3))});
  cases.push_back({"product_gaussian n=2 shifted square", gallery_entry("product_gaussian", 2).measure,
                   ConvexBody::cube(2, 0.7).translated(Vec::Constant(2, 0.4))});
  cases.push_back({"body_norm_cube n=3 random", gallery_entry("body_norm_cube", 3, 1.0).measure,
                   random_hpolytope(3, rng, false)});
  cases.push_back({"pnorm p=1.5 n=4 random symmetric", gallery_entry("pnorm", 4, 1.5).measure,
                   random_hpolytope(4, rng, true)});
  double worst = 0.0;
  uint64_t seed = 900;
  for (const auto& c : cases) {
    const PerimeterResult f = facet_perimeter(c.mu, c.A, config(++seed, 400000));
    const FdResult fd = perimeter_fd(c.mu, c.A, {}, config(++seed, 4000000));
    const double rel = std::abs(fd.extrapolated - f.value) / f.value;
    if (std::getenv("LCP_ACCEPTANCE_VERBOSE")) std::cerr << c.label << ": facet " << f.value << " +- " << f.stderr << ", fd " << fd.extrapolated << " +- " << fd.extrapolated_stderr << " model " << fd.model_error << "\n";
    worst = std::max(worst, rel);
    o.require(rel <= 0.05, c.label + ": facet " + fmt(f.value) + " vs fd " + fmt(fd.extrapolated));
  }
  o.detail << cases.size() << " facet/FD pairs, max rel diff " << fmt(worst, 3);

  // Rejection and hit-and-run agree on first and second moments.
  std::vector<std::pair<std::string, ConvexBody>> bodies{
      {"cube n=3", ConvexBody::cube(3, 1.0)},
      {"simplex n=3", *regular_simplex_isotropic(3).body},
      {"random n=2", random_hpolytope(2, rng, false)},
      {"random n=4", random_hpolytope(4, rng, false)}};
  double worst_z = 0.0;
  for (const auto& [label, K] : bodies) {
    const int n = K.dim();
    const Samples a = sample_uniform_body(K, config(++seed, 200000), "rejection");
    const Samples b = sample_uniform_body(K, config(++seed, 200000), "hit-and-run");
    auto stats = [n](const Samples& S) {
      Mat V(2 * n, S.size());
      for (long i = 0; i < S.size(); ++i)
        for (int k = 0; k < n; ++k) {
          V(k, i) = S.X(k, i);
          V(n + k, i) = S.X(k, i) * S.X(k, i);
        }
      return mean_estimates(S, V);
    };
    const auto ea = stats(a), eb = stats(b);
    for (int k = 0; k < 2 * n; ++k) {
      const double z = std::abs(ea[k].value - eb[k].value) / std::hypot(ea[k].stderr, eb[k].stderr);
      worst_z = std::max(worst_z, z);
      o.require(z <= 4.0, label + " moment " + std::to_string(k) + " z=" + fmt(z, 3));
    }
  }
  o.detail << "; " << bodies.size() << " dual-sampler bodies, max moment z " << fmt(worst_z, 3);
}

void determinism(Outcome& o) {
  const auto dir = std::filesystem::temp_directory_path() / "lcp_acceptance_determinism";
  std::filesystem::create_directories(dir);
  const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
  std::ostringstream out, err;
  const int ca = run_cli({"check", "--suite", "default", "--seed", "0", "--out", a}, {}, out, err);
  const int cb = run_cli({"check", "--suite", "default", "--seed", "0", "--out", b}, {}, out, err);
  o.require(ca != 2 && cb != 2, "check failed to run: " + err.str());
  const std::string ta = read_file(a), tb = read_file(b);
  o.require(ta == tb, "report files differ");
  o.detail << "two default-suite runs, " << ta.size() << " bytes each, identical=" << (ta == tb ? "yes" : "no");
  std::filesystem::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"simplex sharpness", simplex_sharpness},
      {"uniform-body formula", uniform_formula},
      {"1D sharp bound", one_dimensional},
      {"symmetric bound 4n / 2n", symmetric_bound},
      {"general envelope", general_bound},
      {"level-set structure", level_sets},
      {"unconditional and product bounds", unconditional_product},
      {"preliminary inequalities", preliminaries},
      {"estimator cross-validation", cross_validation},
      {"determinism", determinism},
  };
  const std::map<int, double> time_limit{{1, 10.0}, {3, 1.0}, {4, 300.0}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  bool all = true;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (auto it = time_limit.find(id); it != time_limit.end() && secs > it->second) {
      o.pass = false;
      o.detail << " [runtime " << fmt(secs, 3) << " s over the " << fmt(it->second) << " s limit]";
    }
    all = all && o.pass;
    std::cout << "criterion " << id << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << "  "
              << o.detail.str() << "  [" << fmt(secs, 3) << " s]" << std::endl;
  }
  return all ? 0 : 1;
}

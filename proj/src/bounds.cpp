#include "lcp/bounds.hpp"

#include "lcp/geometry.hpp"
#include "lcp/lp.hpp"
#include "lcp/rng.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

namespace lcp {

namespace {

constexpr double kSigmas = 3.0;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Path { Exact, Statistical, Falsification };

double exact_tol(double lhs, double rhs) { return 1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)}); }

void decide(BoundReport& r, Path path, bool corrupt) {
  if (corrupt) r.rhs *= 1e-3;
  if (!std::isfinite(r.lhs) || !std::isfinite(r.rhs)) {
    r.verdict = Verdict::Skipped;
    if (r.note.empty()) r.note = "non-finite value";
    r.slack = kNaN;
    return;
  }
  r.slack = r.rhs - r.lhs;
  switch (path) {
    case Path::Exact:
      r.margin = 0.0;
      r.tol = exact_tol(r.lhs, r.rhs);
      r.verdict = r.lhs <= r.rhs + r.tol ? Verdict::Pass : Verdict::Fail;
      break;
    case Path::Statistical:
      r.tol = 0.0;
      if (r.lhs > r.rhs + r.margin) r.verdict = Verdict::Fail;
      else if (r.lhs >= r.rhs - r.margin && r.margin > 0.0) r.verdict = Verdict::PassWithinMargin;
      else r.verdict = Verdict::Pass;
      break;
    case Path::Falsification:
      r.tol = r.margin > 0.0 ? 0.0 : exact_tol(r.lhs, r.rhs);
      r.verdict = r.lhs > r.rhs + r.margin + r.tol ? Verdict::Fail : Verdict::FalsificationOnlyPass;
      break;
  }
}

// Exact when both sides are; otherwise a statistical comparison with
// margin 3 sqrt(se_l^2 + se_r^2).
void decide_pair(BoundReport& r, double se_lhs, double se_rhs, bool corrupt) {
  if (se_lhs == 0.0 && se_rhs == 0.0) {
    decide(r, Path::Exact, corrupt);
  } else {
    r.margin = kSigmas * std::hypot(se_lhs, se_rhs);
    decide(r, Path::Statistical, corrupt);
  }
}

BoundReport skipped(BoundReport r, const std::string& why) {
  r.verdict = Verdict::Skipped;
  r.lhs = r.rhs = r.slack = kNaN;
  r.note = why;
  return r;
}

// Reduces per-direction reports to the one closest to failing.
BoundReport worst_of(std::vector<BoundReport> rs, const std::string& note) {
  auto badness = [](const BoundReport& r) {
    if (r.verdict == Verdict::Skipped) return -std::numeric_limits<double>::infinity();
    const double scale = std::max(r.margin + r.tol, 1e-300);
    return (r.lhs - r.rhs) / scale;
  };
  auto rank = [](Verdict v) {
    switch (v) {
      case Verdict::Fail: return 4;
      case Verdict::PassWithinMargin: return 3;
      case Verdict::FalsificationOnlyPass: return 2;
      case Verdict::Pass: return 1;
      default: return 0;
    }
  };
  size_t best = 0;
  for (size_t i = 1; i < rs.size(); ++i) {
    const int a = rank(rs[i].verdict), b = rank(rs[best].verdict);
    if (a > b || (a == b && badness(rs[i]) > badness(rs[best]))) best = i;
  }
  BoundReport r = rs[best];
  r.params["directions"] = static_cast<double>(rs.size());
  r.note = note + (r.note.empty() ? "" : "; " + r.note);
  return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double factor_mass(const Measure1D& g, double lo, double hi) {
  return std::max(0.0, g.cdf(hi) - g.cdf(lo));
}

// mu(A) in closed form where one is cheap.
std::optional<double> exact_mass(const Measure& mu, const ConvexBody& A) {
  const int n = mu.dim();
  switch (mu.family()) {
    case Measure::Family::UniformBody: {
      const ConvexBody& K = mu.body();
      if (!K.is_polytope() || !A.is_polytope() || n > 4) return std::nullopt;
      try {
        return volume(intersect(A, K)) / volume(K);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::EmptyIntersection || e.code() == ErrorCode::LowerDimensional) return 0.0;
        throw;
      }
    }
    case Measure::Family::Product: {
      const auto box = A.as_box();
      if (!box) return std::nullopt;
      double m = 1.0;
      for (int k = 0; k < n; ++k) m *= factor_mass(mu.factors()[k], box->first[k], box->second[k]);
      return m;
    }
    case Measure::Family::Gaussian: {
      if (const auto box = A.as_box()) {
        double m = 1.0;
        for (int k = 0; k < n; ++k) m *= std::max(0.0, normal_cdf(box->second[k]) - normal_cdf(box->first[k]));
        return m;
      }
      if (const Ball* b = A.as_ball(); b && b->center.norm() == 0.0)
        return boost::math::gamma_p(n / 2.0, 0.5 * b->radius * b->radius);
      return std::nullopt;
    }
    case Measure::Family::PNormRadial: {
      if (const Ball* b = A.as_ball(); b && b->center.norm() == 0.0)
        return boost::math::gamma_p(n / mu.p(), std::pow(b->radius / mu.sigma(), mu.p()) / mu.p());
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

struct Inball {
  Vec center;
  double radius = 0.0;
};

Inball inball(const ConvexBody& A) {
  if (const Ball* b = A.as_ball()) return {b->center, b->radius};
  const InballResult r = chebyshev_inball(A);
  return {r.center, r.radius};
}

}  // namespace

struct BodyGeometry {
  std::mutex mutex;
  std::optional<Inball> ball;
  std::optional<MinWidth> width;
  uint64_t seed = 0;
  std::optional<double> volume;
  std::map<long, std::shared_ptr<const Samples>> uniform;  // by sample count
};

NamedBody named_body(std::string id, ConvexBody body, uint64_t seed) {
  auto g = std::make_shared<BodyGeometry>();
  g->seed = seed;
  return {std::move(id), std::move(body), std::move(g)};
}

namespace {

Inball inball(const NamedBody& A) {
  if (!A.geometry) return inball(A.body);
  {
    std::lock_guard<std::mutex> lock(A.geometry->mutex);
    if (A.geometry->ball) return *A.geometry->ball;
  }
  const Inball b = inball(A.body);
  std::lock_guard<std::mutex> lock(A.geometry->mutex);
  A.geometry->ball = b;
  return b;
}

MinWidth width_of(const NamedBody& A) {
  if (!A.geometry) return min_width(A.body);
  {
    std::lock_guard<std::mutex> lock(A.geometry->mutex);
    if (A.geometry->width) return *A.geometry->width;
  }
  const MinWidth w = min_width(A.body);
  std::lock_guard<std::mutex> lock(A.geometry->mutex);
  A.geometry->width = w;
  return w;
}

bool ball_inside(const Vec& c, double r, const ConvexBody& K) {
  if (const Ball* b = K.as_ball()) return (c - b->center).norm() + r <= b->radius * (1.0 + 1e-12);
  if (!K.is_polytope()) return false;
  const HPolytope& h = K.h_form();
  for (Eigen::Index i = 0; i < h.A.rows(); ++i)
    if (h.A.row(i).dot(c) + r * h.A.row(i).norm() > h.b[i] + 1e-9 * std::max(1.0, std::abs(h.b[i]))) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::PassWithinMargin: return "PASS_WITHIN_MARGIN";
    case Verdict::Fail: return "FAIL";
    case Verdict::FalsificationOnlyPass: return "FALSIFICATION_ONLY_PASS";
    case Verdict::Skipped: return "SKIPPED";
  }
  return "SKIPPED";
}

Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::Pass, Verdict::PassWithinMargin, Verdict::Fail, Verdict::FalsificationOnlyPass,
                    Verdict::Skipped})
    if (s == to_string(v)) return v;
  throw Error(ErrorCode::Config, "unknown verdict '" + s + "'");
}

namespace {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double number_from(const Json& j, const char* key) {
  require(j.contains(key), ErrorCode::Config, std::string("report record lacks '") + key + "'");
  const Json& v = j.at(key);
  if (v.is_null()) return kNaN;
  require(v.is_number(), ErrorCode::Config, std::string("report field '") + key + "' is not a number");
  return v.get<double>();
}

std::string string_from(const Json& j, const char* key) {
  require(j.contains(key) && j.at(key).is_string(), ErrorCode::Config,
          std::string("report field '") + key + "' missing or not a string");
  return j.at(key).get<std::string>();
}

}  // namespace

Json report_to_json(const BoundReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = number_or_null(v);
  return Json{{"check_id", r.check_id},   {"inequality", r.inequality},
              {"n", r.n},                 {"measure", r.measure},
              {"body", r.body},           {"params", params},
              {"lhs", number_or_null(r.lhs)},   {"rhs", number_or_null(r.rhs)},
              {"slack", number_or_null(r.slack)}, {"margin", number_or_null(r.margin)},
              {"tol", number_or_null(r.tol)},     {"verdict", to_string(r.verdict)},
              {"seed", r.seed},           {"samples", r.samples},
              {"note", r.note}};
}

BoundReport report_from_json(const Json& j) {
  require(j.is_object(), ErrorCode::Config, "report record is not an object");
  static const std::vector<std::string> keys{"check_id", "inequality", "n",      "measure", "body",
                                             "params",   "lhs",        "rhs",    "slack",   "margin",
                                             "tol",      "verdict",    "seed",   "samples", "note"};
  for (const auto& [k, v] : j.items()) {
    (void)v;
    require(std::find(keys.begin(), keys.end(), k) != keys.end(), ErrorCode::Config,
            "unknown report field '" + k + "'");
  }
  BoundReport r;
  r.check_id = string_from(j, "check_id");
  r.inequality = string_from(j, "inequality");
  require(j.contains("n") && j.at("n").is_number_integer(), ErrorCode::Config, "report field 'n' must be an integer");
  r.n = j.at("n").get<int>();
  r.measure = string_from(j, "measure");
  r.body = string_from(j, "body");
  require(j.contains("params") && j.at("params").is_object(), ErrorCode::Config, "report field 'params' must be an object");
  for (const auto& [k, v] : j.at("params").items())
    r.params[k] = v.is_null() ? kNaN : v.get<double>();
  r.lhs = number_from(j, "lhs");
  r.rhs = number_from(j, "rhs");
  r.slack = number_from(j, "slack");
  r.margin = number_from(j, "margin");
  r.tol = number_from(j, "tol");
  r.verdict = verdict_from_string(string_from(j, "verdict"));
  require(j.contains("seed") && j.at("seed").is_number_unsigned(), ErrorCode::Config, "report field 'seed' must be unsigned");
  r.seed = j.at("seed").get<uint64_t>();
  require(j.contains("samples") && j.at("samples").is_number_integer(), ErrorCode::Config,
          "report field 'samples' must be an integer");
  r.samples = j.at("samples").get<long>();
  r.note = string_from(j, "note");
  return r;
}

// ---------------------------------------------------------------------------
// Context and shared estimates

struct CheckCache {
  std::mutex mutex;
  std::optional<Samples> samples;
  std::map<size_t, PerimeterResult> perimeters;
  std::map<size_t, Estimate> masses;
  std::optional<bool> isotropic;
  std::optional<bool> centered;
};

CheckContext make_context(Measure mu, std::string measure_id, std::vector<NamedBody> bodies, SamplerConfig cfg) {
  for (const auto& b : bodies)
    require(b.body.dim() == mu.dim(), ErrorCode::InvalidArgument,
            "body '" + b.id + "' has dimension " + std::to_string(b.body.dim()) + ", measure has " +
                std::to_string(mu.dim()));
  CheckContext ctx{std::move(mu), std::move(measure_id), std::move(bodies), cfg, {}, {}, false,
                   std::make_shared<CheckCache>()};
  return ctx;
}

namespace {

CheckCache& cache_of(const CheckContext& ctx) {
  require(ctx.cache != nullptr, ErrorCode::InvalidArgument, "check context was not built by make_context");
  return *ctx.cache;
}

uint64_t samples_seed(const CheckContext& ctx) { return derive_seed(ctx.cfg.seed, 0x5a3d); }
uint64_t body_seed(const CheckContext& ctx, uint64_t tag, size_t i) {
  return derive_seed(derive_seed(ctx.cfg.seed, tag), i);
}

const Samples& mu_samples(const CheckContext& ctx) {
  CheckCache& c = cache_of(ctx);
  std::lock_guard<std::mutex> lock(c.mutex);
  if (!c.samples) {
    SamplerConfig cfg = ctx.cfg;
    cfg.seed = samples_seed(ctx);
    c.samples = sample(ctx.mu, cfg);
  }
  return *c.samples;
}

PerimeterResult perimeter_of(const CheckContext& ctx, size_t i) {
  CheckCache& c = cache_of(ctx);
  {
    std::lock_guard<std::mutex> lock(c.mutex);
    if (auto it = c.perimeters.find(i); it != c.perimeters.end()) return it->second;
  }
  SamplerConfig cfg = ctx.cfg;
  cfg.seed = body_seed(ctx, 0x7065, i);
  const PerimeterResult p = perimeter(ctx.mu, ctx.bodies[i].body, cfg);
  std::lock_guard<std::mutex> lock(c.mutex);
  c.perimeters[i] = p;
  return p;
}

// Uniform points of body i and its volume. With a geometry cache the points
// are shared by every measure and seeded from the body alone.
std::pair<std::shared_ptr<const Samples>, double> uniform_pool(const CheckContext& ctx, size_t i) {
  const NamedBody& A = ctx.bodies[i];
  SamplerConfig cfg = ctx.cfg;
  auto draw = [&] {
    // Rejection from the bounding box degrades quickly with dimension.
    const std::string method = A.body.as_ball() ? "ball" : A.body.dim() <= 4 ? "rejection" : "hit-and-run";
    return std::make_pair(std::make_shared<const Samples>(sample_uniform_body(A.body, cfg, method)),
                          volume(A.body));
  };
  if (!A.geometry) {
    cfg.seed = body_seed(ctx, 0x756e, i);
    return draw();
  }
  BodyGeometry& g = *A.geometry;
  cfg.seed = derive_seed(g.seed, 0x756e);
  {
    std::lock_guard<std::mutex> lock(g.mutex);
    if (auto it = g.uniform.find(cfg.samples); it != g.uniform.end()) return {it->second, *g.volume};
  }
  const auto p = draw();
  std::lock_guard<std::mutex> lock(g.mutex);
  g.uniform[cfg.samples] = p.first;
  g.volume = p.second;
  return p;
}

// Points for estimating mu(B), B inside A, as means of w(x) 1_B(x): the
// samples of mu (w = 1) when at least 1000 of them fall in A, otherwise
// uniform points of A with w = vol(A) f(x), which keeps small bodies from
// being estimated from a handful of hits. `volume` is 0 in the first case.
struct WeightedSamples {
  std::shared_ptr<const Samples> own;
  const Samples* S = nullptr;
  Vec w;
  double volume = 0.0;
  std::string method;
};

WeightedSamples mass_samples(const CheckContext& ctx, size_t i) {
  WeightedSamples out;
  const ConvexBody& A = ctx.bodies[i].body;
  const Samples& M = mu_samples(ctx);
  long hits = 0;
  for (long j = 0; j < M.size(); ++j) hits += A.contains(M.X.col(j), 0.0) ? 1 : 0;
  if (hits >= 1000 || !(A.is_polytope() || A.as_ball())) {
    out.S = &M;
    out.w = Vec::Ones(M.size());
    out.method = "samples of mu";
    return out;
  }
  const auto [U, vol] = uniform_pool(ctx, i);
  out.w.resize(U->size());
  for (long j = 0; j < U->size(); ++j) out.w[j] = vol * ctx.mu.density(U->X.col(j));
  out.own = U;
  out.S = U.get();
  out.volume = vol;
  out.method = "uniform points of the body weighted by vol f";
  return out;
}

Estimate mass_of(const CheckContext& ctx, size_t i) {
  CheckCache& c = cache_of(ctx);
  {
    std::lock_guard<std::mutex> lock(c.mutex);
    if (auto it = c.masses.find(i); it != c.masses.end()) return it->second;
  }
  Estimate e;
  const ConvexBody& A = ctx.bodies[i].body;
  if (auto m = exact_mass(ctx.mu, A)) {
    e.value = *m;
    e.method = "exact";
  } else {
    const WeightedSamples W = mass_samples(ctx, i);
    Mat V(1, W.w.size());
    for (long j = 0; j < W.S->size(); ++j) V(0, j) = A.contains(W.S->X.col(j), 0.0) ? W.w[j] : 0.0;
    e = mean_estimates(*W.S, V)[0];
    e.method = W.method;
  }
  std::lock_guard<std::mutex> lock(c.mutex);
  c.masses[i] = e;
  return e;
}

bool centered(const CheckContext& ctx) {
  CheckCache& c = cache_of(ctx);
  {
    std::lock_guard<std::mutex> lock(c.mutex);
    if (c.centered) return *c.centered;
  }
  bool ok;
  if (auto e = ctx.mu.exact_moments()) {
    ok = e->mean.cwiseAbs().maxCoeff() <= 1e-6;
  } else {
    const SampleMoments m = moments(ctx.mu, ctx.cfg);
    ok = ((m.mean.cwiseAbs() - 5.0 * m.mean_stderr).array() <= 1e-12).all();
  }
  std::lock_guard<std::mutex> lock(c.mutex);
  c.centered = ok;
  return ok;
}

bool isotropic(const CheckContext& ctx) {
  CheckCache& c = cache_of(ctx);
  {
    std::lock_guard<std::mutex> lock(c.mutex);
    if (c.isotropic) return *c.isotropic;
  }
  const bool ok = is_isotropic(ctx.mu, ctx.cfg);
  std::lock_guard<std::mutex> lock(c.mutex);
  c.isotropic = ok;
  return ok;
}

BoundReport base(const CheckContext& ctx, const std::string& id, const std::string& inequality,
                 const std::string& body) {
  BoundReport r;
  r.check_id = id;
  r.inequality = inequality;
  r.n = ctx.mu.dim();
  r.measure = ctx.measure_id;
  r.body = body;
  r.seed = ctx.cfg.seed;
  r.samples = ctx.cfg.samples;
  return r;
}

// Runs fn for every body, turning library errors into SKIPPED reports.
template <class Fn>
std::vector<BoundReport> per_body(const CheckContext& ctx, const std::string& id, const std::string& inequality,
                                  Fn fn) {
  std::vector<BoundReport> out;
  for (size_t i = 0; i < ctx.bodies.size(); ++i) {
    BoundReport r = base(ctx, id, inequality, ctx.bodies[i].id);
    try {
      fn(i, r, out);
    } catch (const Error& e) {
      out.push_back(skipped(r, std::string(to_string(e.code())) + ": " + e.what()));
    }
  }
  return out;
}

void set_perimeter_lhs(const CheckContext& ctx, size_t i, BoundReport& r, double& se) {
  const PerimeterResult p = perimeter_of(ctx, i);
  r.lhs = p.value;
  se = p.stderr;
  r.seed = p.seed;
  r.samples = p.samples;
  if (r.note.empty()) r.note = "perimeter: " + p.method;
}

// A lower estimate of sup_A f (exact where flagged). Lower estimates make
// the bounds that use it smaller, so passes remain valid.
struct SupOnBody {
  double value = 0.0;
  bool exact = false;
};

SupOnBody sup_on_body(const CheckContext& ctx, const ConvexBody& A, const Vec& xA) {
  const Measure& mu = ctx.mu;
  const int n = mu.dim();
  if (mu.family() == Measure::Family::UniformBody || A.contains(mu.argmax()))
    return {mu.sup_density(), true};
  if (mu.family() == Measure::Family::Gaussian || mu.family() == Measure::Family::PNormRadial) {
    if (const Ball* b = A.as_ball()) {
      const double d = b->center.norm();
      return {mu.density(b->center * ((d - b->radius) / d)), true};
    }
    if (A.is_polytope()) {
      const Projection pr = project_onto_polytope(A.h_form(), Vec::Zero(n));
      if (pr.converged) return {mu.density(pr.point), true};
    }
  }
  if (mu.family() == Measure::Family::BodyNorm && mu.body().is_polytope() && A.is_polytope()) {
    // Minimize the gauge of K over A: max -s subject to x in A, x in s K.
    const HPolytope& ha = A.h_form();
    const HPolytope& hk = mu.body().h_form();
    Mat M = Mat::Zero(ha.A.rows() + hk.A.rows(), n + 1);
    Vec b = Vec::Zero(M.rows());
    M.topLeftCorner(ha.A.rows(), n) = ha.A;
    b.head(ha.A.rows()) = ha.b;
    M.bottomLeftCorner(hk.A.rows(), n) = hk.A;
    M.bottomRightCorner(hk.A.rows(), 1) = -hk.b;
    Vec c = Vec::Zero(n + 1);
    c[n] = -1.0;
    const LpResult lp = lp_maximize(M, b, c);
    if (lp.status == LpStatus::Optimal) return {mu.density(lp.x.head(n)), true};
  }
  if (mu.family() == Measure::Family::Product) {
    if (const auto box = A.as_box()) {
      double v = 1.0;
      for (int k = 0; k < n; ++k) {
        const Measure1D& g = mu.factors()[k];
        v *= g.density(std::clamp(g.argmax(), box->first[k], box->second[k]));
      }
      return {v, true};
    }
  }
  double best = mu.density(xA);
  if (A.is_polytope())
    for (const Vec& v : A.structure().vertices()) best = std::max(best, mu.density(v));
  const Samples& S = mu_samples(ctx);
  for (long j = 0; j < S.size(); ++j)
    if (A.contains(S.X.col(j), 0.0)) best = std::max(best, mu.density(S.X.col(j)));
  return {best, false};
}

const char* kSupNote = "sup_A f sampled (a lower estimate, so the bound is conservative)";

// Coordinate axes plus random unit vectors (just +-1 on the line).
std::vector<Vec> test_directions(const CheckContext& ctx, int random_count) {
  const int n = ctx.mu.dim();
  std::vector<Vec> dirs;
  for (int k = 0; k < n; ++k) dirs.push_back(Vec::Unit(n, k));
  if (n == 1) {
    dirs.push_back(-Vec::Unit(1, 0));
    return dirs;
  }
  Rng rng(derive_seed(ctx.cfg.seed, 0x6469));
  for (int j = 0; j < random_count; ++j) dirs.push_back(rng.unit_vec(n));
  return dirs;
}

// Exact one-dimensional marginal where one is available.
std::optional<Measure1D> exact_marginal(const Measure& mu, const Vec& xi) {
  const int n = mu.dim();
  if (mu.family() == Measure::Family::Gaussian) return Measure1D::gaussian(0.0, 1.0);
  if (mu.family() == Measure::Family::Product) {
    for (int k = 0; k < n; ++k) {
      if (std::abs(std::abs(xi[k]) - 1.0) < 1e-15) {
        if (xi[k] > 0) return mu.factors()[k];
        const Measure1D& g = mu.factors()[k];
        if (g.family() == Measure1D::Family::ShiftedExp) return std::nullopt;
        return g.affine(-1.0, 0.0);
      }
    }
  }
  return std::nullopt;
}

struct MarginalInfo {
  Measure1D g;
  bool exact = false;
};

MarginalInfo marginal_of(const CheckContext& ctx, const Vec& xi) {
  if (auto g = exact_marginal(ctx.mu, xi)) return {*g, true};
  if (ctx.mu.dim() == 1 && ctx.mu.family() != Measure::Family::General) {
    // The measure is its own marginal: tabulate the density.
    const Measure& mu = ctx.mu;
    const double s = xi[0];
    const Samples& S = mu_samples(ctx);
    const double lo = S.X.row(0).minCoeff() - 1.0, hi = S.X.row(0).maxCoeff() + 1.0;
    return {Measure1D::from_log_density(
                [&mu, s](double t) {
                  Vec x(1);
                  x[0] = s * t;
                  return mu.log_density(x);
                },
                std::min(s * lo, s * hi), std::max(s * lo, s * hi), 20001),
            false};
  }
  return {empirical_marginal(mu_samples(ctx), xi), false};
}

}  // namespace

bool is_isotropic(const Measure& mu, const SamplerConfig& cfg) {
  const int n = mu.dim();
  if (auto e = mu.exact_moments())
    return e->mean.cwiseAbs().maxCoeff() <= 1e-6 && (e->cov - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-6;
  const SampleMoments m = moments(mu, cfg);
  const bool mean_ok = ((m.mean.cwiseAbs() - 5.0 * m.mean_stderr).array() <= 1e-12).all();
  const bool cov_ok = (((m.cov - Mat::Identity(n, n)).cwiseAbs() - 5.0 * m.cov_stderr).array() <= 1e-12).all();
  return mean_ok && cov_ok;
}

// ---------------------------------------------------------------------------
// Body checks

std::vector<BoundReport> check_measure_width(const CheckContext& ctx) {
  if (!isotropic(ctx))
    return {skipped(base(ctx, "measure_width", "mu(A) <= w_A", "*"), "measure is not isotropic")};
  return per_body(ctx, "measure_width", "mu(A) <= w_A", [&](size_t i, BoundReport& r, auto& out) {
    const Estimate m = mass_of(ctx, i);
    const MinWidth w = width_of(ctx.bodies[i]);
    r.lhs = m.value;
    r.rhs = w.value;
    r.note = std::string("rhs is the width in one direction") + (w.certified ? " (the minimum)" : "");
    decide_pair(r, m.stderr, 0.0, ctx.corrupt_rhs);
    out.push_back(r);
  });
}

std::vector<BoundReport> check_dilation(const CheckContext& ctx) {
  const int n = ctx.mu.dim();
  if (!centered(ctx))
    return {skipped(base(ctx, "dilation", "mu((1+d)A) <= e^{2nd} mu(A)", "*"), "measure is not centered")};
  std::vector<double> grid = ctx.delta_grid.empty() ? std::vector<double>{0.05, 0.1, 0.2, 0.5} : ctx.delta_grid;
  std::vector<double> exponents{2.0};
  if (ctx.mu.flags().geometric) exponents.push_back(1.0);
  return per_body(ctx, "dilation", "mu((1+d)A) <= e^{c n d} mu(A)", [&](size_t i, BoundReport& r0, auto& out) {
    const ConvexBody& A = ctx.bodies[i].body;
    const std::optional<double> m0 = exact_mass(ctx.mu, A);
    std::optional<WeightedSamples> pool;
    for (double d : grid) {
      const ConvexBody D = A.scaled(1.0 + d);
      const std::optional<double> m1 = m0 ? exact_mass(ctx.mu, D) : std::nullopt;
      for (double c : exponents) {
        BoundReport r = r0;
        if (c == 1.0) r.check_id = "dilation.geometric";
        r.params["delta"] = d;
        r.params["exponent"] = c;
        const double factor = std::exp(c * n * d);
        if (m0 && m1) {
          r.lhs = *m1;
          r.rhs = factor * *m0;
          r.note = "exact masses";
          decide(r, Path::Exact, ctx.corrupt_rhs);
        } else {
          // Common random numbers: one point set, the difference carries the
          // error. Uniform points u of A map to uniform points (1+d)u of the
          // dilate, which need not contain A.
          if (!pool) pool = mass_samples(ctx, i);
          const WeightedSamples& W = *pool;
          const Samples& S = *W.S;
          const double s = 1.0 + d;
          Mat V(3, S.size());
          for (long j = 0; j < S.size(); ++j) {
            const Vec x = S.X.col(j);
            double in1, in0;
            if (W.volume > 0.0) {
              in1 = std::pow(s, n) * W.volume * ctx.mu.density(s * x);
              in0 = W.w[j];
            } else {
              in1 = D.contains(x, 0.0) ? 1.0 : 0.0;
              in0 = A.contains(x, 0.0) ? 1.0 : 0.0;
            }
            V(0, j) = in1;
            V(1, j) = in0;
            V(2, j) = in1 - factor * in0;
          }
          const auto est = mean_estimates(S, V);
          r.lhs = est[0].value;
          r.rhs = factor * est[1].value;
          r.margin = kSigmas * est[2].stderr;
          r.seed = S.seed;
          r.samples = S.size();
          r.note = "common random numbers; " + W.method;
          decide(r, r.margin > 0.0 ? Path::Statistical : Path::Exact, ctx.corrupt_rhs);
        }
        out.push_back(r);
      }
    }
  });
}

std::vector<BoundReport> check_perimeter_inradius(const CheckContext& ctx) {
  const int n = ctx.mu.dim();
  const std::string ineq = "mu+(dA) <= 2n mu(A) / r";
  if (!centered(ctx)) return {skipped(base(ctx, "perimeter_inradius", ineq, "*"), "measure is not centered")};
  return per_body(ctx, "perimeter_inradius", ineq, [&](size_t i, BoundReport& r, auto& out) {
    const double rad = inradius_origin(ctx.bodies[i].body);
    double se_l;
    set_perimeter_lhs(ctx, i, r, se_l);
    const Estimate m = mass_of(ctx, i);
    r.rhs = 2.0 * n * m.value / rad;
    r.params["r"] = rad;
    decide_pair(r, se_l, 2.0 * n * m.stderr / rad, ctx.corrupt_rhs);
    out.push_back(r);
  });
}

std::vector<BoundReport> check_perimeter_incenter(const CheckContext& ctx) {
  const int n = ctx.mu.dim();
  const std::string ineq = "mu+(dA) <= mu(A) (n + ln(sup_A f / f(x_A))) / r_A";
  return per_body(ctx, "perimeter_incenter", ineq, [&](size_t i, BoundReport& r, auto& out) {
    const ConvexBody& A = ctx.bodies[i].body;
    const Inball ib = inball(ctx.bodies[i]);
    const double fx = ctx.mu.density(ib.center);
    if (!(fx > 0.0)) {
      out.push_back(skipped(r, "f(x_A) = 0: the inball center is outside the support"));
      return;
    }
    double se_l;
    set_perimeter_lhs(ctx, i, r, se_l);
    const SupOnBody sup = sup_on_body(ctx, A, ib.center);
    const double log_ratio = std::max(0.0, std::log(sup.value) - std::log(fx));
    const Estimate m = mass_of(ctx, i);
    const double coef = (n + log_ratio) / ib.radius;
    r.rhs = m.value * coef;
    r.params["r_A"] = ib.radius;
    r.params["log_ratio"] = log_ratio;
    if (!sup.exact) r.note += std::string("; ") + kSupNote;
    decide_pair(r, se_l, coef * m.stderr, ctx.corrupt_rhs);
    out.push_back(r);

    // Refined form: a weighted mean over the mass points restricted to A,
    // with the delta-method error of a ratio estimator.
    BoundReport q = base(ctx, "perimeter_incenter.refined", "mu+(dA) <= (w_A/r_A)(n + int_A ln(f/f(x_A)) dmu_A)",
                         ctx.bodies[i].id);
    const WeightedSamples W = mass_samples(ctx, i);
    const Samples& S = *W.S;
    const double lf = std::log(fx);
    std::vector<std::pair<double, double>> pts;  // (weight, log ratio)
    double sw = 0.0, swv = 0.0;
    for (long j = 0; j < S.size(); ++j) {
      const Vec x = S.X.col(j);
      if (!(W.w[j] > 0.0) || !A.contains(x, 0.0)) continue;
      const double v = ctx.mu.log_density(x) - lf;
      pts.emplace_back(W.w[j], v);
      sw += W.w[j];
      swv += W.w[j] * v;
    }
    const long k = static_cast<long>(pts.size());
    if (k < 2) {
      out.push_back(skipped(q, "fewer than two mass points fall in A"));
      return;
    }
    const double mean = swv / sw;
    double var = 0.0;
    for (const auto& [wj, v] : pts) var += wj * wj * (v - mean) * (v - mean);
    const double se = std::sqrt(var) / sw;
    const MinWidth w = width_of(ctx.bodies[i]);
    q.lhs = r.lhs;
    q.rhs = w.value / ib.radius * (n + mean);
    q.margin = kSigmas * std::hypot(se_l, w.value / ib.radius * se);
    q.params["w_A"] = w.value;
    q.params["r_A"] = ib.radius;
    q.params["samples_in_A"] = static_cast<double>(k);
    q.seed = r.seed;
    q.samples = r.samples;
    q.note = w.certified ? "" : "w_A from min_width (an upper estimate)";
    decide(q, Path::Falsification, ctx.corrupt_rhs);
    out.push_back(q);
  });
}

std::vector<BoundReport> check_symmetric_gamma(const CheckContext& ctx) {
  const int n = ctx.mu.dim();
  if (!isotropic(ctx))
    return {skipped(base(ctx, "symmetric_gamma", "mu+(dA) <= 4n", "*"), "measure is not isotropic")};
  return per_body(ctx, "symmetric_gamma", "mu+(dA) <= 4n", [&](size_t i, BoundReport& r, auto& out) {
    if (!is_symmetric(ctx.bodies[i].body)) {
      out.push_back(skipped(r, "body is not symmetric"));
      return;
    }
    double se;
    set_perimeter_lhs(ctx, i, r, se);
    BoundReport g = r;
    r.rhs = 4.0 * n;
    decide_pair(r, se, 0.0, ctx.corrupt_rhs);
    out.push_back(r);
    if (ctx.mu.flags().geometric) {
      g.check_id = "symmetric_gamma.geometric";
      g.inequality = "mu+(dA) <= 2n (f(0) = sup f)";
      g.rhs = 2.0 * n;
      decide_pair(g, se, 0.0, ctx.corrupt_rhs);
      out.push_back(g);
    }
  });
}

std::vector<BoundReport> check_general_gamma(const CheckContext& ctx) {
  const int n = ctx.mu.dim();
  if (!isotropic(ctx))
    return {skipped(base(ctx, "general_gamma.theorem", "mu+(dA) <= (14 + 3/sqrt(n)) n^{3/2}", "*"),
                    "measure is not isotropic")};
  const double n32 = n * std::sqrt(static_cast<double>(n));
  const LevelSet R6n = ctx.mu.level_set(6.0 * n);
  return per_body(ctx, "general_gamma.theorem", "mu+(dA) <= (14 + 3/sqrt(n)) n^{3/2}",
                  [&](size_t i, BoundReport& r, auto& out) {
    const ConvexBody& A = ctx.bodies[i].body;
    double se;
    set_perimeter_lhs(ctx, i, r, se);
    BoundReport t = r;
    t.rhs = (14.0 + 3.0 / std::sqrt(static_cast<double>(n))) * n32;
    decide_pair(t, se, 0.0, ctx.corrupt_rhs);
    out.push_back(t);

    BoundReport c = r;
    c.check_id = "general_gamma.corollary";
    c.inequality = "mu+(dA) <= 14 n^{3/2} for A in R_{6n}";
    bool inside = false;
    bool decidable = true;
    if (A.is_polytope()) {
      inside = true;
      for (const Vec& v : A.structure().vertices()) inside = inside && R6n.contains(v);
    } else if (const Ball* b = A.as_ball(); b && R6n.is_explicit()) {
      inside = ball_inside(b->center, b->radius, R6n.body());
    } else {
      decidable = false;
    }
    if (!decidable) {
      out.push_back(skipped(c, "containment in R_{6n} not decidable for this body"));
    } else if (!inside) {
      out.push_back(skipped(c, "A is not contained in R_{6n}"));
    } else {
      c.rhs = 14.0 * n32;
      decide_pair(c, se, 0.0, ctx.corrupt_rhs);
      out.push_back(c);
    }

    BoundReport p = r;
    p.check_id = "general_gamma.proposition";
    p.inequality = "mu+(dA) <= 2 sqrt(n) (n + ln(sup_A f / f(x_A)))";
    const Inball ib = inball(ctx.bodies[i]);
    const double fx = ctx.mu.density(ib.center);
    if (!(fx > 0.0)) {
      out.push_back(skipped(p, "f(x_A) = 0: the inball center is outside the support"));
      return;
    }
    const SupOnBody sup = sup_on_body(ctx, A, ib.center);
    const double log_ratio = std::max(0.0, std::log(sup.value) - std::log(fx));
    p.rhs = 2.0 * std::sqrt(static_cast<double>(n)) * (n + log_ratio);
    p.params["log_ratio"] = log_ratio;
    if (!sup.exact) p.note += std::string("; ") + kSupNote;
    decide_pair(p, se, 0.0, ctx.corrupt_rhs);
    out.push_back(p);
  });
}

std::vector<BoundReport> check_unconditional(const CheckContext& ctx) {
  const int n = ctx.mu.dim();
  const std::string ineq = "mu+(dA) <= sqrt(2) n";
  if (!ctx.mu.flags().unconditional)
    return {skipped(base(ctx, "unconditional", ineq, "*"), "measure is not unconditional")};
  if (!isotropic(ctx)) return {skipped(base(ctx, "unconditional", ineq, "*"), "measure is not isotropic")};
  std::vector<BoundReport> out = per_body(ctx, "unconditional", ineq, [&](size_t i, BoundReport& r, auto& o) {
    double se;
    set_perimeter_lhs(ctx, i, r, se);
    r.rhs = std::sqrt(2.0) * n;
    decide_pair(r, se, 0.0, ctx.corrupt_rhs);
    o.push_back(r);
  });
  if (ctx.bodies.empty()) return out;

  // Fiber lemma on the first body, one report per coordinate.
  const double eps = 0.01;
  const ConvexBody& A = ctx.bodies[0].body;
  const Samples& S = mu_samples(ctx);
  for (int k = 0; k < n; ++k) {
    BoundReport r = base(ctx, "unconditional.fiber", "mu((A + eps I_k) \\ A) <= 2 eps g_k(0)", ctx.bodies[0].id);
    r.params["k"] = k;
    r.params["eps"] = eps;
    const Vec ek = Vec::Unit(n, k);
    const Estimate lhs = estimate_prob(S, [&](const Vec& x) {
      if (A.contains(x, 0.0)) return false;
      const auto [lo, hi] = A.chord(x, ek);
      return lo <= hi && lo <= eps && hi >= -eps;
    });
    const MarginalInfo g = marginal_of(ctx, ek);
    const double g0 = g.g.density(0.0);
    r.lhs = lhs.value;
    r.rhs = 2.0 * eps * g0;
    r.seed = S.seed;
    r.samples = S.size();
    r.note = g.exact ? "exact marginal" : "empirical marginal";
    r.margin = kSigmas * std::hypot(lhs.stderr, 2.0 * eps * g.g.sup_stderr());
    decide(r, r.margin > 0.0 ? Path::Statistical : Path::Exact, ctx.corrupt_rhs);
    out.push_back(r);
  }
  return out;
}

std::vector<BoundReport> check_product(const CheckContext& ctx) {
  const int n = ctx.mu.dim();
  const std::string ineq = "mu+(dA) <= 2 sum_k ||g_k||_inf";
  if (ctx.mu.family() != Measure::Family::Product)
    return {skipped(base(ctx, "product", ineq, "*"), "measure is not a product")};
  double bound = 0.0;
  bool standardized = true;
  for (const auto& g : ctx.mu.factors()) {
    bound += 2.0 * g.sup();
    standardized = standardized && std::abs(g.mean()) <= 1e-9 && std::abs(g.variance() - 1.0) <= 1e-9;
  }
  return per_body(ctx, "product", ineq, [&](size_t i, BoundReport& r, auto& out) {
    double se;
    set_perimeter_lhs(ctx, i, r, se);
    BoundReport s = r;
    r.rhs = bound;
    decide_pair(r, se, 0.0, ctx.corrupt_rhs);
    out.push_back(r);
    if (standardized) {
      s.check_id = "product.standardized";
      s.inequality = "mu+(dA) <= 2n for standardized factors";
      s.rhs = 2.0 * n;
      decide_pair(s, se, 0.0, ctx.corrupt_rhs);
      out.push_back(s);
    }
  });
}

// ---------------------------------------------------------------------------
// Measure checks

std::optional<double> level_mass_exact(const Measure& mu, double t) {
  const int n = mu.dim();
  if (t <= 0.0) return 0.0;
  switch (mu.family()) {
    case Measure::Family::UniformBody:
      return 1.0;
    case Measure::Family::Gaussian:
      return boost::math::gamma_p(n / 2.0, t);
    case Measure::Family::PNormRadial:
    case Measure::Family::BodyNorm:
      return boost::math::gamma_p(n / mu.p(), t);
    case Measure::Family::Product: {
      double shape = 0.0;
      for (const auto& g : mu.factors()) {
        switch (g.family()) {
          case Measure1D::Family::Uniform: break;
          case Measure1D::Family::ShiftedExp: shape += 1.0; break;
          case Measure1D::Family::Gaussian: shape += 0.5; break;
          default: return std::nullopt;
        }
      }
      return shape == 0.0 ? 1.0 : boost::math::gamma_p(shape, t);
    }
    case Measure::Family::Affine:
      return level_mass_exact(mu.base(), t);
    default:
      return std::nullopt;
  }
}

std::vector<BoundReport> check_level_mass(const CheckContext& ctx) {
  const int n = ctx.mu.dim();
  std::vector<double> grid =
      ctx.t_grid.empty() ? std::vector<double>{6.0 * n, 7.0 * n, 8.0 * n, 10.0 * n, 12.0 * n} : ctx.t_grid;
  std::vector<BoundReport> out;
  const bool is_centered = centered(ctx);
  for (double t : grid) {
    BoundReport r = base(ctx, "level_mass", "1 - e^{-t/5} <= mu(R_t)", "R_t");
    r.params["t"] = t;
    if (!is_centered) {
      out.push_back(skipped(r, "measure is not centered"));
      continue;
    }
    if (t < 6.0 * n) {
      out.push_back(skipped(r, "t < 6n"));
      continue;
    }
    r.lhs = 1.0 - std::exp(-t / 5.0);
    if (auto m = level_mass_exact(ctx.mu, t)) {
      r.rhs = *m;
      r.note = "closed form";
      decide(r, Path::Exact, ctx.corrupt_rhs);
    } else {
      const LevelSet R = ctx.mu.level_set(t);
      const Samples& S = mu_samples(ctx);
      const Estimate e = estimate_prob(S, [&R](const Vec& x) { return R.contains(x); });
      r.rhs = e.value;
      r.seed = S.seed;
      r.samples = S.size();
      r.note = "sampled";
      decide_pair(r, 0.0, e.stderr, ctx.corrupt_rhs);
    }
    out.push_back(r);
  }
  return out;
}

std::vector<BoundReport> check_level_inradius(const CheckContext& ctx) {
  const int n = ctx.mu.dim();
  std::vector<BoundReport> out;
  std::vector<std::pair<double, double>> cases{{6.0 * n, 1.0 / 3.0}};
  if (ctx.mu.flags().geometric) cases.push_back({1.0 * n, 1.0 / 18.0});
  for (const auto& [t, bound] : cases) {
    BoundReport r = base(ctx, t == 6.0 * n ? "level_inradius" : "level_inradius.geometric",
                         t == 6.0 * n ? "1/3 <= r(R_{6n})" : "1/18 <= r(R_n)", "R_t");
    r.params["t"] = t;
    if (n < 3) {
      out.push_back(skipped(r, "needs n >= 3"));
      continue;
    }
    if (!isotropic(ctx)) {
      out.push_back(skipped(r, "measure is not isotropic"));
      continue;
    }
    r.lhs = bound;
    const LevelSet R = ctx.mu.level_set(t);
    try {
      if (R.is_explicit()) {
        r.rhs = inradius_origin(R.body());
        r.note = "explicit level set";
        decide(r, Path::Exact, ctx.corrupt_rhs);
      } else {
        std::vector<Vec> seeds;
        for (int k = 0; k < n; ++k) {
          seeds.push_back(Vec::Unit(n, k));
          seeds.push_back(-Vec::Unit(n, k));
        }
        const auto [rhat, dir] = sphere_minimize([&R](const Vec& u) { return R.radial(u); }, n, seeds, 2000);
        (void)dir;
        r.rhs = rhat;
        r.note = "radial scan over the membership oracle (an upper estimate of r)";
        decide(r, Path::Falsification, ctx.corrupt_rhs);
      }
    } catch (const Error& e) {
      out.push_back(skipped(r, std::string(to_string(e.code())) + ": " + e.what()));
      continue;
    }
    out.push_back(r);
  }
  return out;
}

std::optional<double> homogeneity_exponent(const Measure& mu) {
  switch (mu.family()) {
    case Measure::Family::Gaussian: return 2.0;
    case Measure::Family::PNormRadial:
    case Measure::Family::BodyNorm: return mu.p();
    default: return std::nullopt;
  }
}

double livshyts_bound(const Measure& mu, double t) {
  const int n = mu.dim();
  const LevelSet R = mu.level_set(t);
  require(R.is_explicit(), ErrorCode::Unsupported,
          "level set R_t has no explicit body; use the falsification checks (level_inradius) instead");
  const double vol = volume(R.body());
  const double r = inradius_origin(R.body());
  return n * (mu.sup_density() * vol + 1.0) / r;
}

LivshytsInf livshyts_inf(const Measure& mu, const std::vector<double>& extra) {
  const int n = mu.dim();
  std::vector<double> grid{1.0 * n, 2.0 * n, 6.0 * n, 10.0 * n};
  if (auto p = homogeneity_exponent(mu)) grid.insert(grid.begin(), n / std::exp(*p));
  grid.insert(grid.end(), extra.begin(), extra.end());
  LivshytsInf best{std::numeric_limits<double>::infinity(), kNaN};
  for (double t : grid) {
    double v;
    try {
      v = livshyts_bound(mu, t);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::OriginNotInterior) continue;
      throw;
    }
    if (v < best.value) best = {v, t};
  }
  require(std::isfinite(best.value), ErrorCode::OriginNotInterior, "no level set on the grid contains the origin");
  return best;
}

std::vector<BoundReport> check_livshyts(const CheckContext& ctx) {
  const int n = ctx.mu.dim();
  std::vector<BoundReport> out;
  const std::string ineq = "mu+(dA) <= inf_t n (||f||_inf vol(R_t) + 1) / r(R_t)";
  LivshytsInf inf;
  try {
    inf = livshyts_inf(ctx.mu);
  } catch (const Error& e) {
    out.push_back(skipped(base(ctx, "livshyts.inf", ineq, "*"), std::string(to_string(e.code())) + ": " + e.what()));
    return out;
  }
  std::vector<BoundReport> bodies = per_body(ctx, "livshyts.inf", ineq, [&](size_t i, BoundReport& r, auto& o) {
    double se;
    set_perimeter_lhs(ctx, i, r, se);
    r.rhs = inf.value;
    r.params["t"] = inf.t;
    decide_pair(r, se, 0.0, ctx.corrupt_rhs);
    o.push_back(r);
  });
  out.insert(out.end(), bodies.begin(), bodies.end());

  const auto p = homogeneity_exponent(ctx.mu);
  if (!p || !ctx.mu.flags().geometric) return out;
  const double t0 = n / std::exp(*p);
  const LevelSet R0 = ctx.mu.level_set(t0);
  const LevelSet Rn = ctx.mu.level_set(1.0 * n);
  const double rn = inradius_origin(Rn.body());

  BoundReport m = base(ctx, "livshyts.markov", "||f||_inf vol(R_{n/e^p}) <= 1", "R_t");
  m.params["t"] = t0;
  m.lhs = ctx.mu.sup_density() * volume(R0.body());
  m.rhs = 1.0;
  decide(m, Path::Exact, ctx.corrupt_rhs);
  out.push_back(m);

  BoundReport c = base(ctx, "livshyts.chain", "L(n/e^p) <= 2en / r(R_n)", "R_t");
  c.params["t"] = t0;
  c.lhs = livshyts_bound(ctx.mu, t0);
  c.rhs = 2.0 * std::exp(1.0) * n / rn;
  decide(c, Path::Exact, ctx.corrupt_rhs);
  out.push_back(c);

  BoundReport h = base(ctx, "livshyts.homogeneous", "2en / r(R_n) <= 36en", "R_t");
  if (!isotropic(ctx)) {
    out.push_back(skipped(h, "measure is not isotropic"));
    return out;
  }
  h.lhs = 2.0 * std::exp(1.0) * n / rn;
  h.rhs = 36.0 * std::exp(1.0) * n;
  h.params["r_n"] = rn;
  decide(h, Path::Exact, ctx.corrupt_rhs);
  out.push_back(h);
  return out;
}

std::vector<BoundReport> check_preliminaries(const CheckContext& ctx) {
  const Measure& mu = ctx.mu;
  const int n = mu.dim();
  std::vector<BoundReport> out;
  const bool is_centered = centered(ctx);
  const bool iso = isotropic(ctx);
  const std::vector<Vec> dirs = test_directions(ctx, 50);
  const std::string worst_note = "worst of " + std::to_string(dirs.size()) + " directions";

  // Halfspaces through the barycenter.
  {
    BoundReport r = base(ctx, "preliminaries.grunbaum", "mu(<x, xi> <= 0) <= 1 - 1/e", "halfspace");
    if (!is_centered) {
      out.push_back(skipped(r, "measure is not centered"));
    } else if (mu.flags().even) {
      r.lhs = 0.5;
      r.rhs = 1.0 - std::exp(-1.0);
      r.note = "even measure: every halfspace through 0 has mass 1/2";
      decide(r, Path::Exact, ctx.corrupt_rhs);
      out.push_back(r);
    } else {
      const Samples& S = mu_samples(ctx);
      std::vector<BoundReport> rs;
      Mat Xi(n, dirs.size());
      for (size_t d = 0; d < dirs.size(); ++d) Xi.col(d) = dirs[d];
      const Mat V = ((Xi.transpose() * S.X).array() <= 0.0).cast<double>().matrix();
      const auto est = mean_estimates(S, V);
      for (size_t d = 0; d < dirs.size(); ++d) {
        BoundReport q = r;
        q.rhs = 1.0 - std::exp(-1.0);
        q.seed = S.seed;
        q.samples = S.size();
        const auto g = exact_marginal(mu, dirs[d]);
        if (g) {
          q.lhs = g->cdf(0.0);
          q.note = "exact marginal";
          decide(q, Path::Exact, ctx.corrupt_rhs);
        } else {
          q.lhs = est[d].value;
          decide_pair(q, est[d].stderr, 0.0, ctx.corrupt_rhs);
        }
        rs.push_back(q);
      }
      out.push_back(worst_of(rs, worst_note));
    }
  }

  // Sup against the value at the barycenter.
  {
    BoundReport r = base(ctx, "preliminaries.fradelizi", "||f||_inf <= e^n f(0)", "-");
    if (!is_centered) {
      out.push_back(skipped(r, "measure is not centered"));
    } else {
      r.lhs = mu.sup_density();
      r.rhs = std::exp(static_cast<double>(n)) * mu.density(Vec::Zero(n));
      decide(r, Path::Exact, ctx.corrupt_rhs);
      out.push_back(r);
    }
  }

  // One-dimensional marginals.
  std::vector<BoundReport> sup_rs, hensley_rs, bc_lo, bc_hi;
  const auto mom = mu.exact_moments();
  std::optional<SampleMoments> smom;
  if (!mom) {
    SamplerConfig cfg = ctx.cfg;
    cfg.seed = samples_seed(ctx);
    smom = moments(mu, cfg);
  }
  for (const Vec& xi : dirs) {
    const MarginalInfo g = marginal_of(ctx, xi);
    const double sup = g.g.sup();
    const double se_sup = g.exact ? 0.0 : g.g.sup_stderr();
    const double var = mom ? xi.dot(mom->cov * xi) : xi.dot(smom->cov * xi);
    const double se_var =
        mom ? 0.0 : std::sqrt(xi.cwiseAbs2().dot(smom->cov_stderr.cwiseAbs2() * xi.cwiseAbs2()));
    const std::string src = g.exact ? "exact marginal" : "empirical marginal";

    BoundReport s = base(ctx, "preliminaries.marginal_sup", "||g_xi||_inf <= 1", "marginal");
    s.lhs = sup;
    s.rhs = 1.0;
    s.note = src;
    decide_pair(s, se_sup, 0.0, ctx.corrupt_rhs);
    sup_rs.push_back(s);

    BoundReport h = base(ctx, "preliminaries.even_marginal", "g_xi(0) <= 1/sqrt(2)", "marginal");
    // For even marginals g(0) is the maximum; the estimated sup is used for
    // empirical marginals since it can only err upward there.
    h.lhs = g.exact ? g.g.density(0.0) : sup;
    h.rhs = 1.0 / std::sqrt(2.0);
    h.note = src;
    decide_pair(h, se_sup, 0.0, ctx.corrupt_rhs);
    hensley_rs.push_back(h);

    const double prod = var * sup * sup;
    const double se_prod = std::hypot(2.0 * var * sup * se_sup, sup * sup * se_var);
    BoundReport lo = base(ctx, "preliminaries.bobkov_chistyakov_lower", "1/12 <= Var(X) ||g||_inf^2", "marginal");
    lo.lhs = 1.0 / 12.0;
    lo.rhs = prod;
    lo.note = src;
    decide_pair(lo, 0.0, se_prod, ctx.corrupt_rhs);
    bc_lo.push_back(lo);
    BoundReport hi = base(ctx, "preliminaries.bobkov_chistyakov_upper", "Var(X) ||g||_inf^2 <= 1", "marginal");
    hi.lhs = prod;
    hi.rhs = 1.0;
    hi.note = src;
    decide_pair(hi, se_prod, 0.0, ctx.corrupt_rhs);
    bc_hi.push_back(hi);
  }
  if (iso) {
    out.push_back(worst_of(sup_rs, worst_note));
    if (mu.flags().even) out.push_back(worst_of(hensley_rs, worst_note));
    else out.push_back(skipped(hensley_rs.front(), "measure is not even"));
  } else {
    out.push_back(skipped(sup_rs.front(), "measure is not isotropic"));
    out.push_back(skipped(hensley_rs.front(), "measure is not isotropic"));
  }
  out.push_back(worst_of(bc_lo, worst_note));
  out.push_back(worst_of(bc_hi, worst_note));

  // Inclusions for bodies in isotropic position, and surface area vs inradius.
  if (mu.family() == Measure::Family::UniformBody && mom) {
    const ConvexBody& K = mu.body();
    const double s2 = mom->cov.trace() / n;
    const double s = std::sqrt(s2);
    const bool position = mom->mean.cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, s) &&
                          (mom->cov - s2 * Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-9 * s2;
    BoundReport in = base(ctx, "preliminaries.kls_inradius", "sqrt((n+2)/n) L <= r(K)", "support");
    BoundReport cr = base(ctx, "preliminaries.kls_circumradius", "R(K) <= sqrt(n(n+2)) L", "support");
    if (!position) {
      out.push_back(skipped(in, "support is not in isotropic position"));
      out.push_back(skipped(cr, "support is not in isotropic position"));
    } else {
      in.lhs = std::sqrt((n + 2.0) / n) * s;
      in.rhs = inradius_origin(K);
      decide(in, Path::Exact, ctx.corrupt_rhs);
      out.push_back(in);
      cr.lhs = circumradius_origin(K);
      cr.rhs = std::sqrt(n * (n + 2.0)) * s;
      decide(cr, Path::Exact, ctx.corrupt_rhs);
      out.push_back(cr);
    }
    BoundReport sr = check_surface_inradius({"support", K, nullptr});
    sr.measure = ctx.measure_id;
    if (ctx.corrupt_rhs && sr.verdict != Verdict::Skipped) decide(sr, Path::Exact, true);
    out.push_back(sr);
  }
  return out;
}

BoundReport check_steinhagen(const NamedBody& A, int direction_budget) {
  BoundReport r;
  r.check_id = "steinhagen";
  r.inequality = "w_A <= 2 sqrt(n) r_A";
  r.n = A.body.dim();
  r.measure = "-";
  r.body = A.id;
  try {
    const Inball ib = inball(A);
    MinWidth w = direction_budget == 2000 ? width_of(A) : min_width(A.body, direction_budget);
    r.rhs = 2.0 * std::sqrt(static_cast<double>(r.n)) * ib.radius;
    if (w.value > r.rhs + exact_tol(w.value, r.rhs)) {
      w = min_width(A.body, 10 * direction_budget);
      r.note = "re-verified with 10x direction budget";
    }
    r.lhs = w.value;
    r.params["r_A"] = ib.radius;
    if (r.note.empty()) r.note = w.certified ? "exact width" : "lhs is a width in one direction, so >= w_A";
    decide(r, Path::Exact, false);
  } catch (const Error& e) {
    return skipped(r, std::string(to_string(e.code())) + ": " + e.what());
  }
  return r;
}

BoundReport check_surface_inradius(const NamedBody& A) {
  BoundReport r;
  r.check_id = "surface_inradius";
  r.inequality = "S(K) <= n vol(K) / r(K)";
  r.n = A.body.dim();
  r.measure = "-";
  r.body = A.id;
  try {
    const double rad = inradius_origin(A.body);
    r.lhs = surface_area(A.body);
    r.rhs = r.n * volume(A.body) / rad;
    r.params["r"] = rad;
    decide(r, Path::Exact, false);
  } catch (const Error& e) {
    return skipped(r, std::string(to_string(e.code())) + ": " + e.what());
  }
  return r;
}

std::vector<std::string> check_ids() {
  return {"measure_width",  "dilation",       "perimeter_inradius", "perimeter_incenter", "symmetric_gamma",
          "general_gamma",  "unconditional",  "product",            "level_mass",         "level_inradius",
          "livshyts",       "preliminaries",  "steinhagen",         "surface_inradius"};
}

}  // namespace lcp

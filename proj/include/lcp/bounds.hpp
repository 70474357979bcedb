#pragma once

#include "lcp/body.hpp"
#include "lcp/estimate.hpp"
#include "lcp/io.hpp"
#include "lcp/measure.hpp"
#include "lcp/perimeter.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lcp {

enum class Verdict { Pass, PassWithinMargin, Fail, FalsificationOnlyPass, Skipped };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

// One instance of one inequality, normalized to lhs <= rhs.
//
// Exact paths have margin 0 and a floating tolerance tol = 1e-9 max(1,
// |lhs|, |rhs|); statistical paths have margin = 3 combined standard errors
// and tol = 0. FAIL iff lhs > rhs + margin + tol. A statistical pass with
// |lhs - rhs| <= margin is PASS_WITHIN_MARGIN. Falsification-only checks
// (one side can only be over- or under-estimated in the safe direction for
// refutation) pass as FALSIFICATION_ONLY_PASS.
struct BoundReport {
  std::string check_id;
  std::string inequality;
  int n = 0;
  std::string measure;
  std::string body;
  std::map<std::string, double> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  Verdict verdict = Verdict::Skipped;
  uint64_t seed = 0;
  long samples = 0;
  std::string note;
};

Json report_to_json(const BoundReport& r);
BoundReport report_from_json(const Json& j);

struct BodyGeometry;

// `geometry` caches the inball, minimal width and uniform points; copies share it, so a body
// tested under several measures pays for them once. Null means no cache.
struct NamedBody {
  std::string id;
  ConvexBody body;
  std::shared_ptr<BodyGeometry> geometry;
};

// `seed` seeds the cached uniform points of the body.
NamedBody named_body(std::string id, ConvexBody body, uint64_t seed = 0);

struct CheckCache;

// A measure, the bodies to test it on, and the sampling budget. Per-body
// estimates (perimeter, mass) are computed once and shared by the checks;
// their seeds derive from cfg.seed and the body index only, so results do
// not depend on which check asks first.
struct CheckContext {
  Measure mu;
  std::string measure_id;
  std::vector<NamedBody> bodies;
  SamplerConfig cfg;
  std::vector<double> t_grid;      // level-mass grid; empty means {6n, 7n, 8n, 10n, 12n}
  std::vector<double> delta_grid;  // dilation grid; empty means {0.05, 0.1, 0.2, 0.5}
  bool corrupt_rhs = false;        // multiply every rhs by 0.001 (harness self-test)
  std::shared_ptr<CheckCache> cache;
};

CheckContext make_context(Measure mu, std::string measure_id, std::vector<NamedBody> bodies,
                          SamplerConfig cfg);

// Body checks: one report per body.
std::vector<BoundReport> check_measure_width(const CheckContext& ctx);
std::vector<BoundReport> check_dilation(const CheckContext& ctx);
std::vector<BoundReport> check_perimeter_inradius(const CheckContext& ctx);
// Also reports the refined form (w_A / r_A)(n + int_A ln(f / f(x_A)) dmu_A),
// falsification-only because w_A comes from min_width.
std::vector<BoundReport> check_perimeter_incenter(const CheckContext& ctx);
std::vector<BoundReport> check_symmetric_gamma(const CheckContext& ctx);
// (14 + 3/sqrt(n)) n^{3/2} always, 14 n^{3/2} when A lies in R_{6n}, and
// 2 sqrt(n)(n + ln(sup_A f / f(x_A))) when f(x_A) > 0.
std::vector<BoundReport> check_general_gamma(const CheckContext& ctx);
std::vector<BoundReport> check_unconditional(const CheckContext& ctx);
std::vector<BoundReport> check_product(const CheckContext& ctx);

// Measure checks.
std::vector<BoundReport> check_level_mass(const CheckContext& ctx);
std::vector<BoundReport> check_level_inradius(const CheckContext& ctx);
std::vector<BoundReport> check_livshyts(const CheckContext& ctx);
std::vector<BoundReport> check_preliminaries(const CheckContext& ctx);

// Pure geometry, no measure involved.
BoundReport check_steinhagen(const NamedBody& A, int direction_budget = 2000);
BoundReport check_surface_inradius(const NamedBody& A);

// mu(R_t) in closed form: a regularized incomplete gamma function for the
// radial, body-norm, Gaussian and exponential/Gaussian product families, 1
// for uniform measures. nullopt when no closed form is known.
std::optional<double> level_mass_exact(const Measure& mu, double t);

// n (||f||_inf vol(R_t) + 1) / r(R_t) for explicit level sets; throws
// Unsupported otherwise.
double livshyts_bound(const Measure& mu, double t);
struct LivshytsInf {
  double value = 0.0;
  double t = 0.0;
};
// Infimum over {n/e^p (homogeneous families), n, 2n, 6n, 10n} and `extra`.
LivshytsInf livshyts_inf(const Measure& mu, const std::vector<double>& extra = {});
// Exponent p with R_t = t^{1/p} R_1 for the homogeneous families.
std::optional<double> homogeneity_exponent(const Measure& mu);

// Mean and covariance agree with (0, I) to 1e-6 (closed form) or within 5
// standard errors (sampled).
bool is_isotropic(const Measure& mu, const SamplerConfig& cfg);

std::vector<std::string> check_ids();

// ---------------------------------------------------------------------------
// Suites

// Random bodies cycle through scales {0.5, 1, 2, 3} times `scale`.
struct BodySpec {
  int random_symmetric = 10;
  int random_general = 10;
  double scale = 1.0;
  bool support = true;  // add the support of uniform measures
  std::vector<Json> explicit_bodies;
};

struct MeasureSpec {
  std::string id;
  std::optional<std::string> gallery;  // gallery entry name
  double p = 1.5;                      // p-norm parameter for gallery entries
  std::optional<Json> json;            // explicit measure
};

struct SuiteConfig {
  std::vector<int> dimensions;
  std::vector<MeasureSpec> measures;
  BodySpec bodies;
  std::vector<std::string> checks;  // empty means all
  SamplerConfig sampler;
  std::vector<double> t_grid;
  std::vector<double> delta_grid;
  bool corrupt_rhs = false;
  std::string out_path;  // report JSON, optional
  std::string csv_path;  // report CSV, optional
};

// Desk-scale default: n in {1, 2, 3, 4, 6, 8}, the gallery measures, 20
// random bodies (fewer at n = 8).
SuiteConfig default_suite();
// Rejects unknown keys; errors name the offending location.
SuiteConfig suite_from_json(const Json& j);
Json suite_to_json(const SuiteConfig& cfg);

struct SuiteSummary {
  std::map<std::string, long> counts;  // verdict name -> count
  long total = 0;
  long fails = 0;
};

struct SuiteResult {
  std::vector<BoundReport> reports;
  SuiteSummary summary;
};

SuiteResult run_suite(const SuiteConfig& cfg);
SuiteSummary summarize(const std::vector<BoundReport>& reports);

Json reports_to_json(const std::vector<BoundReport>& reports);
std::vector<BoundReport> reports_from_json(const Json& j);
std::string reports_to_csv(const std::vector<BoundReport>& reports);

}  // namespace lcp

#include "lcp/bounds.hpp"
#include "lcp/gallery.hpp"
#include "lcp/parallel.hpp"
#include "lcp/random_body.hpp"
#include "lcp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace lcp {

namespace {

void only_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  require(j.is_object(), ErrorCode::Config, where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    require(ok, ErrorCode::Config, where + ": unknown key '" + k + "'");
  }
}

int get_int(const Json& j, const std::string& where) {
  require(j.is_number_integer(), ErrorCode::Config, where + ": expected an integer");
  return j.get<int>();
}

double get_number(const Json& j, const std::string& where) {
  require(j.is_number(), ErrorCode::Config, where + ": expected a number");
  return j.get<double>();
}

std::vector<double> get_numbers(const Json& j, const std::string& where) {
  require(j.is_array(), ErrorCode::Config, where + ": expected an array");
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string gallery_id(const std::string& name, double p) {
  if (name == "pnorm" || name.rfind("body_norm", 0) == 0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s(p=%g)", name.c_str(), p);
    return buf;
  }
  return name;
}

MeasureSpec gallery_spec(const std::string& name, double p) {
  MeasureSpec m;
  m.gallery = name;
  m.p = p;
  m.id = gallery_id(name, p);
  return m;
}

MeasureSpec measure_spec_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    require(s.rfind("gallery:", 0) == 0, ErrorCode::Config, where + ": measure strings must read 'gallery:<name>'");
    const std::string name = s.substr(8);
    const auto names = gallery_names();
    require(std::find(names.begin(), names.end(), name) != names.end(), ErrorCode::Config,
            where + ": unknown gallery entry '" + name + "'");
    return gallery_spec(name, 1.5);
  }
  require(j.is_object(), ErrorCode::Config, where + ": expected a string or an object");
  if (j.contains("gallery")) {
    only_keys(j, where, {"gallery", "p", "id"});
    require(j.at("gallery").is_string(), ErrorCode::Config, where + ".gallery: expected a string");
    const std::string name = j.at("gallery").get<std::string>();
    const auto names = gallery_names();
    require(std::find(names.begin(), names.end(), name) != names.end(), ErrorCode::Config,
            where + ": unknown gallery entry '" + name + "'");
    MeasureSpec m = gallery_spec(name, j.contains("p") ? get_number(j.at("p"), where + ".p") : 1.5);
    if (j.contains("id")) m.id = j.at("id").get<std::string>();
    return m;
  }
  if (j.contains("measure")) {
    only_keys(j, where, {"measure", "id"});
    MeasureSpec m;
    m.json = j.at("measure");
    // Validate now so errors point at the config.
    try {
      (void)measure_from_json(*m.json, 1);
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, where + ".measure: " + e.what());
    }
    m.id = j.contains("id") ? j.at("id").get<std::string>() : m.json->value("type", std::string("measure"));
    return m;
  }
  MeasureSpec m;
  m.json = j;
  try {
    (void)measure_from_json(j, 1);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, where + ": " + e.what());
  }
  m.id = j.value("type", std::string("measure"));
  return m;
}

Json measure_spec_to_json(const MeasureSpec& m) {
  if (m.gallery) return Json{{"gallery", *m.gallery}, {"p", m.p}, {"id", m.id}};
  return Json{{"measure", *m.json}, {"id", m.id}};
}

SamplerConfig sampler_from_json(const Json& j, const std::string& where) {
  only_keys(j, where, {"seed", "samples", "burn_in", "thinning", "chains", "threads"});
  SamplerConfig c;
  if (j.contains("seed")) {
    require(j.at("seed").is_number_unsigned(), ErrorCode::Config, where + ".seed: expected a nonnegative integer");
    c.seed = j.at("seed").get<uint64_t>();
  }
  if (j.contains("samples")) c.samples = get_int(j.at("samples"), where + ".samples");
  if (j.contains("burn_in")) c.burn_in = get_int(j.at("burn_in"), where + ".burn_in");
  if (j.contains("thinning")) c.thinning = get_int(j.at("thinning"), where + ".thinning");
  if (j.contains("chains")) c.chains = get_int(j.at("chains"), where + ".chains");
  if (j.contains("threads")) c.threads = get_int(j.at("threads"), where + ".threads");
  require(c.samples >= 2, ErrorCode::Config, where + ".samples: must be at least 2");
  require(c.chains >= 1, ErrorCode::Config, where + ".chains: must be positive");
  require(c.threads >= 1, ErrorCode::Config, where + ".threads: must be positive");
  return c;
}

Json sampler_to_json(const SamplerConfig& c) {
  return Json{{"seed", c.seed},         {"samples", c.samples}, {"burn_in", c.burn_in},
              {"thinning", c.thinning}, {"chains", c.chains},   {"threads", c.threads}};
}

// The measure of a spec in dimension n, or nullopt when it does not exist
// there.
std::optional<Measure> build_measure(const MeasureSpec& spec, int n) {
  if (spec.gallery) {
    try {
      Measure mu = gallery_entry(*spec.gallery, n, spec.p).measure;
      if (mu.dim() != n) return std::nullopt;
      return mu;
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  Measure mu = measure_from_json(*spec.json, n);
  if (mu.dim() != n) return std::nullopt;
  return mu;
}

std::vector<NamedBody> random_bodies(const SuiteConfig& cfg, int n) {
  static const double mult[] = {0.5, 1.0, 2.0, 3.0};
  std::vector<NamedBody> out;
  Rng rng(derive_seed(cfg.sampler.seed, 0xb0d7 + static_cast<uint64_t>(n)));
  auto seed = [&] { return derive_seed(derive_seed(cfg.sampler.seed, 0x9e0 + static_cast<uint64_t>(n)), out.size()); };
  for (int k = 0; k < cfg.bodies.random_symmetric; ++k)
    out.push_back(named_body("sym-" + std::to_string(k), random_hpolytope(n, rng, true, cfg.bodies.scale * mult[k % 4]), seed()));
  for (int k = 0; k < cfg.bodies.random_general; ++k)
    out.push_back(named_body("gen-" + std::to_string(k), random_hpolytope(n, rng, false, cfg.bodies.scale * mult[k % 4]), seed()));
  for (size_t k = 0; k < cfg.bodies.explicit_bodies.size(); ++k) {
    const ConvexBody b = body_from_json(cfg.bodies.explicit_bodies[k]);
    if (b.dim() == n) out.push_back(named_body("explicit-" + std::to_string(k), b, seed()));
  }
  return out;
}

bool selected(const SuiteConfig& cfg, const std::string& id) {
  return cfg.checks.empty() || std::find(cfg.checks.begin(), cfg.checks.end(), id) != cfg.checks.end();
}

using CheckFn = std::vector<BoundReport> (*)(const CheckContext&);

const std::vector<std::pair<std::string, CheckFn>>& measure_checks() {
  static const std::vector<std::pair<std::string, CheckFn>> table{
      {"measure_width", check_measure_width},
      {"dilation", check_dilation},
      {"perimeter_inradius", check_perimeter_inradius},
      {"perimeter_incenter", check_perimeter_incenter},
      {"symmetric_gamma", check_symmetric_gamma},
      {"general_gamma", check_general_gamma},
      {"unconditional", check_unconditional},
      {"product", check_product},
      {"level_mass", check_level_mass},
      {"level_inradius", check_level_inradius},
      {"livshyts", check_livshyts},
      {"preliminaries", check_preliminaries},
  };
  return table;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string csv_number(double x) {
  if (!std::isfinite(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

SuiteConfig default_suite() {
  SuiteConfig c;
  c.dimensions = {1, 2, 3, 4, 6, 8};
  c.measures = {gallery_spec("gaussian", 2.0),       gallery_spec("pnorm", 1.0),
                gallery_spec("pnorm", 3.0),          gallery_spec("cube", 1.5),
                gallery_spec("simplex", 1.5),        gallery_spec("cross_polytope", 1.5),
                gallery_spec("product_exp", 1.5),    gallery_spec("extremal_1d", 1.5),
                gallery_spec("body_norm_cube", 1.0), gallery_spec("body_norm_cross_polytope", 1.0)};
  c.sampler.samples = 20000;
  return c;
}

SuiteConfig suite_from_json(const Json& j) {
  only_keys(j, "suite", {"dimensions", "measures", "bodies", "checks", "sampler", "t_grid", "delta_grid",
                         "corrupt_rhs", "out", "csv"});
  SuiteConfig c;
  require(j.contains("dimensions") && j.at("dimensions").is_array() && !j.at("dimensions").empty(),
          ErrorCode::Config, "suite.dimensions: expected a nonempty array");
  for (size_t i = 0; i < j.at("dimensions").size(); ++i) {
    const int n = get_int(j.at("dimensions")[i], "suite.dimensions[" + std::to_string(i) + "]");
    require(n >= 1 && n <= 8, ErrorCode::Config, "suite.dimensions[" + std::to_string(i) + "]: must be in 1..8");
    c.dimensions.push_back(n);
  }
  require(j.contains("measures") && j.at("measures").is_array() && !j.at("measures").empty(), ErrorCode::Config,
          "suite.measures: expected a nonempty array");
  for (size_t i = 0; i < j.at("measures").size(); ++i)
    c.measures.push_back(measure_spec_from_json(j.at("measures")[i], "suite.measures[" + std::to_string(i) + "]"));
  if (j.contains("bodies")) {
    const Json& b = j.at("bodies");
    only_keys(b, "suite.bodies", {"random_symmetric", "random_general", "scale", "support", "explicit"});
    if (b.contains("random_symmetric"))
      c.bodies.random_symmetric = get_int(b.at("random_symmetric"), "suite.bodies.random_symmetric");
    if (b.contains("random_general"))
      c.bodies.random_general = get_int(b.at("random_general"), "suite.bodies.random_general");
    if (b.contains("scale")) c.bodies.scale = get_number(b.at("scale"), "suite.bodies.scale");
    if (b.contains("support")) {
      require(b.at("support").is_boolean(), ErrorCode::Config, "suite.bodies.support: expected a boolean");
      c.bodies.support = b.at("support").get<bool>();
    }
    if (b.contains("explicit")) {
      require(b.at("explicit").is_array(), ErrorCode::Config, "suite.bodies.explicit: expected an array");
      for (size_t i = 0; i < b.at("explicit").size(); ++i) {
        try {
          (void)body_from_json(b.at("explicit")[i]);
        } catch (const Error& e) {
          throw Error(ErrorCode::Config, "suite.bodies.explicit[" + std::to_string(i) + "]: " + e.what());
        }
        c.bodies.explicit_bodies.push_back(b.at("explicit")[i]);
      }
    }
    require(c.bodies.random_symmetric >= 0 && c.bodies.random_general >= 0 && c.bodies.scale > 0.0,
            ErrorCode::Config, "suite.bodies: counts must be nonnegative and scale positive");
  }
  if (j.contains("checks")) {
    const Json& ch = j.at("checks");
    if (ch.is_string()) {
      require(ch.get<std::string>() == "all", ErrorCode::Config, "suite.checks: expected \"all\" or a list");
    } else {
      require(ch.is_array(), ErrorCode::Config, "suite.checks: expected \"all\" or a list");
      const auto ids = check_ids();
      for (size_t i = 0; i < ch.size(); ++i) {
        require(ch[i].is_string(), ErrorCode::Config, "suite.checks[" + std::to_string(i) + "]: expected a string");
        const std::string id = ch[i].get<std::string>();
        require(std::find(ids.begin(), ids.end(), id) != ids.end(), ErrorCode::Config,
                "suite.checks[" + std::to_string(i) + "]: unknown check '" + id + "'");
        c.checks.push_back(id);
      }
    }
  }
  if (j.contains("sampler")) c.sampler = sampler_from_json(j.at("sampler"), "suite.sampler");
  if (j.contains("t_grid")) c.t_grid = get_numbers(j.at("t_grid"), "suite.t_grid");
  if (j.contains("delta_grid")) {
    c.delta_grid = get_numbers(j.at("delta_grid"), "suite.delta_grid");
    for (double d : c.delta_grid) require(d > 0.0, ErrorCode::Config, "suite.delta_grid: entries must be positive");
  }
  if (j.contains("corrupt_rhs")) {
    require(j.at("corrupt_rhs").is_boolean(), ErrorCode::Config, "suite.corrupt_rhs: expected a boolean");
    c.corrupt_rhs = j.at("corrupt_rhs").get<bool>();
  }
  if (j.contains("out")) {
    require(j.at("out").is_string(), ErrorCode::Config, "suite.out: expected a string");
    c.out_path = j.at("out").get<std::string>();
  }
  if (j.contains("csv")) {
    require(j.at("csv").is_string(), ErrorCode::Config, "suite.csv: expected a string");
    c.csv_path = j.at("csv").get<std::string>();
  }
  return c;
}

Json suite_to_json(const SuiteConfig& c) {
  Json measures = Json::array();
  for (const auto& m : c.measures) measures.push_back(measure_spec_to_json(m));
  Json bodies{{"random_symmetric", c.bodies.random_symmetric},
              {"random_general", c.bodies.random_general},
              {"scale", c.bodies.scale},
              {"support", c.bodies.support},
              {"explicit", c.bodies.explicit_bodies}};
  Json j{{"dimensions", c.dimensions}, {"measures", measures}, {"bodies", bodies}};
  j["checks"] = c.checks.empty() ? Json("all") : Json(c.checks);
  j["sampler"] = sampler_to_json(c.sampler);
  j["t_grid"] = c.t_grid;
  j["delta_grid"] = c.delta_grid;
  j["corrupt_rhs"] = c.corrupt_rhs;
  if (!c.out_path.empty()) j["out"] = c.out_path;
  if (!c.csv_path.empty()) j["csv"] = c.csv_path;
  return j;
}

SuiteSummary summarize(const std::vector<BoundReport>& reports) {
  SuiteSummary s;
  for (Verdict v : {Verdict::Pass, Verdict::PassWithinMargin, Verdict::Fail, Verdict::FalsificationOnlyPass,
                    Verdict::Skipped})
    s.counts[to_string(v)] = 0;
  for (const auto& r : reports) ++s.counts[to_string(r.verdict)];
  s.total = static_cast<long>(reports.size());
  s.fails = s.counts["FAIL"];
  return s;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
  require(!cfg.dimensions.empty() && !cfg.measures.empty(), ErrorCode::Config, "suite needs dimensions and measures");

  // One job per (dimension, measure), plus one per dimension for the
  // measure-free geometry checks (measure index -1).
  struct Job {
    int n;
    int measure;
  };
  std::vector<Job> jobs;
  std::map<int, std::vector<NamedBody>> bodies;
  for (int n : cfg.dimensions) {
    if (bodies.count(n)) continue;
    bodies[n] = random_bodies(cfg, n);
    jobs.push_back({n, -1});
    for (size_t m = 0; m < cfg.measures.size(); ++m) jobs.push_back({n, static_cast<int>(m)});
  }

  std::vector<std::vector<BoundReport>> results(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), cfg.sampler.threads, [&](int idx) {
    const Job& job = jobs[idx];
    const int n = job.n;
    std::vector<BoundReport>& out = results[idx];
    if (job.measure < 0) {
      for (const auto& b : bodies[n]) {
        if (selected(cfg, "steinhagen")) out.push_back(check_steinhagen(b));
        if (selected(cfg, "surface_inradius")) out.push_back(check_surface_inradius(b));
      }
      return;
    }
    const MeasureSpec& spec = cfg.measures[job.measure];
    const std::optional<Measure> mu = build_measure(spec, n);
    if (!mu) return;
    std::vector<NamedBody> bs = bodies[n];
    if (cfg.bodies.support && mu->family() == Measure::Family::UniformBody &&
        (mu->body().is_polytope() || mu->body().as_ball()))
      bs.push_back(named_body("support", mu->body(), derive_seed(derive_seed(cfg.sampler.seed, 0x5b + static_cast<uint64_t>(n)), job.measure)));
    SamplerConfig sc = cfg.sampler;
    sc.seed = derive_seed(derive_seed(cfg.sampler.seed, static_cast<uint64_t>(n)), job.measure + 1);
    sc.threads = 1;
    CheckContext ctx = make_context(*mu, spec.id, std::move(bs), sc);
    ctx.t_grid = cfg.t_grid;
    ctx.delta_grid = cfg.delta_grid;
    ctx.corrupt_rhs = cfg.corrupt_rhs;
    for (const auto& [id, fn] : measure_checks()) {
      if (!selected(cfg, id)) continue;
      std::vector<BoundReport> rs = fn(ctx);
      out.insert(out.end(), rs.begin(), rs.end());
    }
  });

  SuiteResult res;
  for (auto& r : results) res.reports.insert(res.reports.end(), r.begin(), r.end());
  if (cfg.corrupt_rhs) {
    // The geometry checks take no context; corrupt them here.
    for (auto& r : res.reports) {
      if (r.measure != "-" || r.verdict == Verdict::Skipped) continue;
      r.rhs *= 1e-3;
      r.slack = r.rhs - r.lhs;
      if (r.lhs > r.rhs + r.margin + r.tol) r.verdict = Verdict::Fail;
    }
  }
  res.summary = summarize(res.reports);
  return res;
}

Json reports_to_json(const std::vector<BoundReport>& reports) {
  Json a = Json::array();
  for (const auto& r : reports) a.push_back(report_to_json(r));
  return a;
}

std::vector<BoundReport> reports_from_json(const Json& j) {
  require(j.is_array(), ErrorCode::Config, "report file must hold a JSON array");
  std::vector<BoundReport> out;
  for (size_t i = 0; i < j.size(); ++i) {
    try {
      out.push_back(report_from_json(j[i]));
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, "record " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::string reports_to_csv(const std::vector<BoundReport>& reports) {
  std::string s = "check_id,n,measure,body,lhs,rhs,slack,margin,verdict,seed\n";
  for (const auto& r : reports) {
    s += csv_field(r.check_id) + "," + std::to_string(r.n) + "," + csv_field(r.measure) + "," + csv_field(r.body) +
         "," + csv_number(r.lhs) + "," + csv_number(r.rhs) + "," + csv_number(r.slack) + "," +
         csv_number(r.margin) + "," + to_string(r.verdict) + "," + std::to_string(r.seed) + "\n";
  }
  return s;
}

}  // namespace lcp

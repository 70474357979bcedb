#include "lcp/cli.hpp"

#include "lcp/gallery.hpp"
#include "lcp/io.hpp"
#include "lcp/perimeter.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace lcp {

namespace {

std::string num(double x, int digits) {
  if (!std::isfinite(x)) return std::isnan(x) ? "" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

bool is_perimeter_check(const std::string& id) {
  static const std::vector<std::string> prefixes{"perimeter_inradius", "perimeter_incenter", "symmetric_gamma",
                                                 "general_gamma", "unconditional", "product"};
  if (id.find(".fiber") != std::string::npos) return false;
  for (const auto& p : prefixes)
    if (id.rfind(p, 0) == 0) return true;
  return false;
}

// "gallery:name" or a measure JSON object.
Measure resolve_measure(const std::string& spec, int n, double p) {
  if (spec.rfind("gallery:", 0) == 0) return gallery_entry(spec.substr(8), n, p).measure;
  const Measure mu = measure_from_json(parse_json(spec, "--measure"), n);
  require(mu.dim() == n || n <= 0, ErrorCode::Config,
          "--measure has dimension " + std::to_string(mu.dim()) + " but --n is " + std::to_string(n));
  return mu;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_file_atomic(path, text);
}

struct Globals {
  std::optional<uint64_t> seed;
  std::optional<long> samples;
  std::optional<int> threads;
  bool json = false;
  bool csv = false;
};

void apply(const Globals& g, SamplerConfig& cfg) {
  if (g.seed) cfg.seed = *g.seed;
  if (g.samples) cfg.samples = *g.samples;
  if (g.threads) cfg.threads = *g.threads;
}

}  // namespace

std::string report_table(const std::vector<BoundReport>& reports) {
  std::vector<const BoundReport*> rows;
  for (const auto& r : reports) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const BoundReport* a, const BoundReport* b) {
    return a->n != b->n ? a->n < b->n : a->check_id < b->check_id;
  });
  std::vector<std::vector<std::string>> cells{
      {"check_id", "n", "measure", "body", "lhs", "rhs", "slack", "margin", "verdict"}};
  for (const BoundReport* r : rows)
    cells.push_back({r->check_id, std::to_string(r->n), r->measure, r->body, num(r->lhs, 9), num(r->rhs, 9),
                     num(r->slack, 9), num(r->margin, 9), to_string(r->verdict)});
  std::vector<size_t> width(cells[0].size(), 0);
  for (const auto& row : cells)
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream s;
  for (const auto& row : cells) {
    for (size_t c = 0; c < row.size(); ++c) {
      s << row[c];
      if (c + 1 < row.size()) s << std::string(width[c] - row[c].size() + 2, ' ');
    }
    s << '\n';
  }
  const SuiteSummary sum = summarize(reports);
  s << "total " << sum.total;
  for (const char* v : {"PASS", "PASS_WITHIN_MARGIN", "FALSIFICATION_ONLY_PASS", "SKIPPED", "FAIL"}) {
    auto it = sum.counts.find(v);
    s << ", " << v << ' ' << (it == sum.counts.end() ? 0 : it->second);
  }
  s << '\n';
  return s.str();
}

std::string envelope_csv(const std::vector<BoundReport>& reports) {
  std::ostringstream s;
  s << "n,gamma_lower,n_over_sqrt3,sqrt2_n,2n,4n,14n^1.5\n";
  std::map<int, double> best;
  for (const auto& r : reports) {
    auto it = best.emplace(r.n, std::nan("")).first;
    if (r.verdict == Verdict::Skipped || !is_perimeter_check(r.check_id) || !std::isfinite(r.lhs)) continue;
    if (std::isnan(it->second) || r.lhs > it->second) it->second = r.lhs;
  }
  for (const auto& [n, g] : best) {
    const double d = n;
    s << n << ',' << num(g, 9) << ',' << num(d / std::sqrt(3.0), 9) << ',' << num(std::sqrt(2.0) * d, 9) << ','
      << num(2.0 * d, 9) << ',' << num(4.0 * d, 9) << ',' << num(14.0 * std::pow(d, 1.5), 9) << '\n';
  }
  return s.str();
}

int run_cli(const std::vector<std::string>& args, const std::map<std::string, std::string>& env,
            std::ostream& out, std::ostream& err) {
  CLI::App app{"Log-concave perimeter toolkit"};
  app.name("lcp");
  app.require_subcommand(1);
  app.fallthrough();

  uint64_t seed = 0;
  long samples = 0;
  int threads = 0;
  Globals g;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides LCP_SEED; default 0)");
  auto* samples_opt = app.add_option("--samples", samples, "Samples per estimate")->check(CLI::PositiveNumber);
  auto* threads_opt = app.add_option("--threads", threads, "Worker thread cap")->check(CLI::PositiveNumber);
  app.add_flag("--json", g.json, "JSON output where a table or CSV is the default");
  app.add_flag("--csv", g.csv, "CSV output where a table or JSON is the default");

  // gallery
  auto* gallery = app.add_subcommand("gallery", "List or dump gallery entries");
  gallery->require_subcommand(1);
  auto* glist = gallery->add_subcommand("list", "Names of the gallery entries");
  auto* gdump = gallery->add_subcommand("dump", "Measure, body and metadata of one entry as JSON");
  std::string gname;
  int gn = 2;
  double gp = 1.5;
  gdump->add_option("--name", gname, "Entry name")->required();
  gdump->add_option("--n", gn, "Dimension")->check(CLI::Range(1, 8));
  gdump->add_option("--p", gp, "p for the p-norm families");

  // check
  auto* check = app.add_subcommand("check", "Run a verification suite");
  std::string suite = "default", out_path, csv_path;
  check->add_option("--suite", suite, "'default' or a suite JSON file");
  check->add_option("--out", out_path, "Report JSON");
  check->add_option("--csv", csv_path, "Report CSV");

  // gamma
  auto* gamma = app.add_subcommand("gamma", "Lower bound on Gamma by searching body families");
  std::string measure;
  int n = 2;
  double p = 1.5;
  std::vector<std::string> families;
  std::string trace_path, gamma_out;
  gamma->add_option("--measure", measure, "gallery:<name> or measure JSON")->required();
  gamma->add_option("--n", n, "Dimension")->check(CLI::Range(1, 8));
  gamma->add_option("--p", p, "p for the p-norm gallery families");
  gamma->add_option("--family", families, "Body families (repeatable; default all)");
  gamma->add_option("--trace", trace_path, "CSV of every candidate");
  gamma->add_option("--out", gamma_out, "Result JSON (default stdout)");

  // levelset
  auto* levelset = app.add_subcommand("levelset", "Describe the level set R_t");
  double t = 1.0;
  levelset->add_option("--measure", measure, "gallery:<name> or measure JSON")->required();
  levelset->add_option("--t", t, "Level parameter")->required()->check(CLI::NonNegativeNumber);
  levelset->add_option("--n", n, "Dimension")->check(CLI::Range(1, 8));
  levelset->add_option("--p", p, "p for the p-norm gallery families");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw samples as CSV");
  std::string sample_out;
  sample_cmd->add_option("--measure", measure, "gallery:<name> or measure JSON")->required();
  sample_cmd->add_option("--n", n, "Dimension")->check(CLI::Range(1, 8));
  sample_cmd->add_option("--p", p, "p for the p-norm gallery families");
  sample_cmd->add_option("--out", sample_out, "Output file (default stdout)");

  // report
  auto* report = app.add_subcommand("report", "Summarize a report file");
  std::string report_in, envelope_path;
  report->add_option("input", report_in, "Report JSON")->required();
  report->add_option("--envelope", envelope_path, "Envelope CSV (n, gamma lower bound, bound curves)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (seed_opt->count() > 0) {
      g.seed = seed;
    } else if (auto it = env.find("LCP_SEED"); it != env.end() && !it->second.empty()) {
      size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(it->second, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == it->second.size() && it->second[0] != '-', ErrorCode::Config,
              "LCP_SEED must be a nonnegative integer, got '" + it->second + "'");
      g.seed = v;
    }
    if (samples_opt->count() > 0) g.samples = samples;
    if (threads_opt->count() > 0) g.threads = threads;

    if (*glist) {
      const auto names = gallery_names();
      if (g.json) {
        out << Json(names).dump(2) << '\n';
      } else {
        for (const auto& name : names) out << name << '\n';
      }
      return 0;
    }
    if (*gdump) {
      const GalleryEntry e = gallery_entry(gname, gn, gp);
      Json j;
      j["name"] = e.name;
      j["n"] = e.n;
      j["measure"] = measure_to_json(e.measure);
      if (e.body) j["body"] = body_to_json(*e.body);
      j["meta"] = Json::object();
      for (const auto& [k, v] : e.meta) j["meta"][k] = v;
      j["notes"] = e.notes;
      out << j.dump(2) << '\n';
      return 0;
    }
    if (*check) {
      SuiteConfig cfg;
      if (suite == "default")
        cfg = default_suite();
      else
        cfg = suite_from_json(parse_json(read_file(suite), suite));
      apply(g, cfg.sampler);
      const SuiteResult r = run_suite(cfg);
      const std::string json_path = out_path.empty() ? cfg.out_path : out_path;
      const std::string table_path = csv_path.empty() ? cfg.csv_path : csv_path;
      if (!json_path.empty()) write_file_atomic(json_path, reports_to_json(r.reports).dump(2) + "\n");
      if (!table_path.empty()) write_file_atomic(table_path, reports_to_csv(r.reports));
      if (g.json) {
        Json j;
        j["total"] = r.summary.total;
        j["fails"] = r.summary.fails;
        j["counts"] = Json::object();
        for (const auto& [k, v] : r.summary.counts) j["counts"][k] = v;
        out << j.dump(2) << '\n';
      } else {
        out << "reports " << r.summary.total << '\n';
        for (const auto& [k, v] : r.summary.counts) out << k << ' ' << v << '\n';
        for (const auto& rep : r.reports)
          if (rep.verdict == Verdict::Fail)
            out << "FAIL " << rep.check_id << " n=" << rep.n << ' ' << rep.measure << ' ' << rep.body
                << " lhs=" << num(rep.lhs, 9) << " rhs=" << num(rep.rhs, 9) << " margin=" << num(rep.margin, 9)
                << '\n';
      }
      return r.summary.fails > 0 ? 1 : 0;
    }
    if (*gamma) {
      const Measure mu = resolve_measure(measure, n, p);
      SamplerConfig cfg;
      cfg.samples = 20000;
      apply(g, cfg);
      const GammaSearchResult r = gamma_search(mu, families.empty() ? gamma_families() : families, cfg);
      Json j;
      j["measure"] = measure;
      j["n"] = mu.dim();
      j["gamma_lower"] = r.best.value;
      j["stderr"] = r.best.stderr;
      j["margin"] = 3.0 * r.best.stderr;
      j["exact"] = r.best.exact;
      j["method"] = r.best.method;
      j["family"] = r.family;
      j["body"] = r.body_label;
      j["body_json"] = body_to_json(r.body);
      j["samples"] = r.best.samples;
      j["seed"] = cfg.seed;
      if (!trace_path.empty()) {
        std::ostringstream s;
        s << "family,body,value,stderr\n";
        for (const auto& row : r.trace)
          s << row.family << ",\"" << row.body << "\"," << num(row.value, 17) << ',' << num(row.stderr, 17) << '\n';
        write_file_atomic(trace_path, s.str());
      }
      emit(gamma_out, j.dump(2) + "\n", out);
      return 0;
    }
    if (*levelset) {
      const Measure mu = resolve_measure(measure, n, p);
      const LevelSet L = mu.level_set(t);
      Json j;
      j["measure"] = measure_to_json(mu);
      j["t"] = t;
      j["n"] = mu.dim();
      j["explicit"] = L.is_explicit();
      if (L.is_explicit()) j["body"] = body_to_json(L.body());
      if (auto m = level_mass_exact(mu, t))
        j["mass"] = *m;
      else
        j["mass"] = nullptr;
      out << j.dump(2) << '\n';
      return 0;
    }
    if (*sample_cmd) {
      const Measure mu = resolve_measure(measure, n, p);
      SamplerConfig cfg;
      cfg.samples = 1000;
      apply(g, cfg);
      const Samples S = sample(mu, cfg);
      std::ostringstream s;
      if (g.json) {
        Json j = Json::array();
        for (long i = 0; i < S.size(); ++i) j.push_back(vec_to_json(S.X.col(i)));
        s << j.dump() << '\n';
      } else {
        for (int k = 0; k < mu.dim(); ++k) s << (k ? "," : "") << 'x' << (k + 1);
        s << '\n';
        for (long i = 0; i < S.size(); ++i) {
          for (int k = 0; k < mu.dim(); ++k) s << (k ? "," : "") << num(S.X(k, i), 17);
          s << '\n';
        }
      }
      emit(sample_out, s.str(), out);
      return 0;
    }
    if (*report) {
      const std::vector<BoundReport> reports = reports_from_json(parse_json(read_file(report_in), report_in));
      if (!envelope_path.empty()) write_file_atomic(envelope_path, envelope_csv(reports));
      if (g.json) {
        const SuiteSummary sum = summarize(reports);
        Json j;
        j["total"] = sum.total;
        j["fails"] = sum.fails;
        j["counts"] = Json::object();
        for (const auto& [k, v] : sum.counts) j["counts"][k] = v;
        out << j.dump(2) << '\n';
      } else if (g.csv) {
        out << reports_to_csv(reports);
      } else {
        out << report_table(reports);
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace lcp

#include "lcp/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace lcp {

namespace {

void config(bool cond, const std::string& what) { require(cond, ErrorCode::Config, what); }

void only_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& what) {
  config(j.is_object(), what + ": expected a JSON object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : j.items())
    config(allowed.count(item.key()) > 0, what + ": unknown key '" + item.key() + "'");
}

const Json& field(const Json& j, const char* key, const std::string& what) {
  config(j.contains(key), what + ": missing key '" + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* key, const std::string& what) {
  const Json& v = field(j, key, what);
  config(v.is_number(), what + ": '" + key + "' must be a number");
  const double x = v.get<double>();
  config(std::isfinite(x), what + ": '" + key + "' must be finite");
  return x;
}

std::string type_of(const Json& j, const std::string& what) {
  config(j.is_object(), what + ": expected a JSON object");
  const Json& t = field(j, "type", what);
  config(t.is_string(), what + ": 'type' must be a string");
  return t.get<std::string>();
}

std::vector<double> doubles(const Json& j, const std::string& what) {
  config(j.is_array(), what + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    config(v.is_number(), what + ": expected an array of numbers");
    out.push_back(v.get<double>());
    config(std::isfinite(out.back()), what + ": numbers must be finite");
  }
  return out;
}

}  // namespace

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec vec_from_json(const Json& j, const std::string& what) {
  const auto d = doubles(j, what);
  return Eigen::Map<const Vec>(d.data(), static_cast<Eigen::Index>(d.size()));
}

Json mat_to_json(const Mat& M) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) a.push_back(vec_to_json(M.row(i).transpose()));
  return a;
}

Mat mat_from_json(const Json& j, const std::string& what) {
  config(j.is_array() && !j.empty(), what + ": expected a nonempty array of rows");
  const Eigen::Index cols = static_cast<Eigen::Index>(doubles(j[0], what).size());
  config(cols > 0, what + ": rows must be nonempty");
  Mat M(static_cast<Eigen::Index>(j.size()), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    const auto row = doubles(j[i], what);
    config(static_cast<Eigen::Index>(row.size()) == cols, what + ": rows have different lengths");
    for (Eigen::Index c = 0; c < cols; ++c) M(static_cast<Eigen::Index>(i), c) = row[c];
  }
  return M;
}

Json body_to_json(const ConvexBody& K) {
  switch (K.kind()) {
    case ConvexBody::Kind::HPolytope:
      return Json{{"type", "hpolytope"}, {"A", mat_to_json(K.as_h()->A)}, {"b", vec_to_json(K.as_h()->b)}};
    case ConvexBody::Kind::VPolytope: {
      Json v = Json::array();
      for (const Vec& x : K.as_v()->vertices) v.push_back(vec_to_json(x));
      return Json{{"type", "vpolytope"}, {"vertices", v}};
    }
    case ConvexBody::Kind::Ball:
      return Json{{"type", "ball"}, {"center", vec_to_json(K.as_ball()->center)}, {"radius", K.as_ball()->radius}};
    case ConvexBody::Kind::Intersection: {
      const auto [a, b] = K.intersection_parts();
      return Json{{"type", "intersection"}, {"parts", Json::array({body_to_json(a), body_to_json(b)})}};
    }
  }
  throw Error(ErrorCode::Unsupported, "unknown body kind");
}

ConvexBody body_from_json(const Json& j) {
  const std::string what = "body";
  const std::string type = type_of(j, what);
  if (type == "hpolytope") {
    only_keys(j, {"type", "A", "b"}, what);
    Mat A = mat_from_json(field(j, "A", what), "body.A");
    Vec b = vec_from_json(field(j, "b", what), "body.b");
    config(A.rows() == b.size(), "body: A and b have different row counts");
    return ConvexBody::hpolytope(std::move(A), std::move(b));
  }
  if (type == "vpolytope") {
    only_keys(j, {"type", "vertices"}, what);
    const Mat V = mat_from_json(field(j, "vertices", what), "body.vertices");
    std::vector<Vec> pts;
    for (Eigen::Index i = 0; i < V.rows(); ++i) pts.push_back(V.row(i).transpose());
    return ConvexBody::vpolytope(std::move(pts));
  }
  if (type == "ball") {
    only_keys(j, {"type", "center", "radius"}, what);
    return ConvexBody::ball(vec_from_json(field(j, "center", what), "body.center"), number(j, "radius", what));
  }
  if (type == "intersection") {
    only_keys(j, {"type", "parts"}, what);
    const Json& parts = field(j, "parts", what);
    config(parts.is_array() && parts.size() == 2, "body: 'parts' must hold two bodies");
    return intersect(body_from_json(parts[0]), body_from_json(parts[1]));
  }
  throw Error(ErrorCode::Config, "body: unknown type '" + type + "'");
}

Json measure1d_to_json(const Measure1D& m) {
  const auto& p = m.params();
  switch (m.family()) {
    case Measure1D::Family::Uniform: return Json{{"type", "uniform"}, {"a", p[0]}, {"b", p[1]}};
    case Measure1D::Family::ShiftedExp: return Json{{"type", "shifted_exp"}, {"rate", p[0]}, {"shift", p[1]}};
    case Measure1D::Family::Gaussian: return Json{{"type", "gaussian"}, {"mean", p[0]}, {"sd", p[1]}};
    case Measure1D::Family::TruncatedLinear:
      return Json{{"type", "truncated_linear"}, {"zero", p[0]}, {"peak", p[1]}};
    case Measure1D::Family::Tabulated:
      return Json{{"type", "tabulated"}, {"x", m.grid()}, {"density", m.grid_density()}};
  }
  throw Error(ErrorCode::Unsupported, "unknown 1D family");
}

Measure1D measure1d_from_json(const Json& j) {
  const std::string what = "factor";
  const std::string type = type_of(j, what);
  if (type == "uniform") {
    only_keys(j, {"type", "a", "b"}, what);
    return Measure1D::uniform(number(j, "a", what), number(j, "b", what));
  }
  if (type == "shifted_exp") {
    only_keys(j, {"type", "rate", "shift"}, what);
    return Measure1D::shifted_exp(number(j, "rate", what), number(j, "shift", what));
  }
  if (type == "gaussian") {
    only_keys(j, {"type", "mean", "sd"}, what);
    return Measure1D::gaussian(number(j, "mean", what), number(j, "sd", what));
  }
  if (type == "truncated_linear") {
    only_keys(j, {"type", "zero", "peak"}, what);
    return Measure1D::truncated_linear(number(j, "zero", what), number(j, "peak", what));
  }
  if (type == "tabulated") {
    only_keys(j, {"type", "x", "density"}, what);
    return Measure1D::tabulated(doubles(field(j, "x", what), "factor.x"),
                                doubles(field(j, "density", what), "factor.density"));
  }
  throw Error(ErrorCode::Config, "factor: unknown type '" + type + "'");
}

Json measure_to_json(const Measure& mu) {
  switch (mu.family()) {
    case Measure::Family::UniformBody: return Json{{"type", "uniform_body"}, {"body", body_to_json(mu.body())}};
    case Measure::Family::PNormRadial:
      return Json{{"type", "pnorm"}, {"n", mu.dim()}, {"p", mu.p()}, {"sigma", mu.sigma()}};
    case Measure::Family::BodyNorm:
      return Json{{"type", "body_norm"}, {"body", body_to_json(mu.body())}, {"p", mu.p()}, {"sigma", mu.sigma()}};
    case Measure::Family::Gaussian: return Json{{"type", "gaussian"}, {"n", mu.dim()}};
    case Measure::Family::Product: {
      Json f = Json::array();
      for (const auto& m : mu.factors()) f.push_back(measure1d_to_json(m));
      return Json{{"type", "product"}, {"factors", f}};
    }
    case Measure::Family::Affine:
      return Json{{"type", "affine"},
                  {"base", measure_to_json(mu.base())},
                  {"T", mat_to_json(mu.map())},
                  {"shift", vec_to_json(mu.shift())}};
    case Measure::Family::General: break;
  }
  throw Error(ErrorCode::Unsupported, "measure '" + mu.name() + "' has no JSON form");
}

Measure measure_from_json(const Json& j, int default_n) {
  const std::string what = "measure";
  const std::string type = type_of(j, what);
  auto dimension = [&]() {
    int n = default_n;
    if (j.contains("n")) {
      config(j.at("n").is_number_integer(), "measure: 'n' must be an integer");
      n = j.at("n").get<int>();
    }
    config(n >= 1 && n <= 9, "measure: dimension 'n' missing or out of range");
    return n;
  };
  if (type == "uniform_body") {
    only_keys(j, {"type", "body"}, what);
    return Measure::uniform_body(body_from_json(field(j, "body", what)));
  }
  if (type == "pnorm") {
    only_keys(j, {"type", "n", "p", "sigma"}, what);
    return Measure::pnorm(dimension(), number(j, "p", what), number(j, "sigma", what));
  }
  if (type == "body_norm") {
    only_keys(j, {"type", "body", "p", "sigma"}, what);
    return Measure::body_norm(body_from_json(field(j, "body", what)), number(j, "p", what),
                              number(j, "sigma", what));
  }
  if (type == "gaussian") {
    only_keys(j, {"type", "n"}, what);
    return Measure::gaussian(dimension());
  }
  if (type == "product") {
    only_keys(j, {"type", "factors"}, what);
    const Json& f = field(j, "factors", what);
    config(f.is_array() && !f.empty(), "measure: 'factors' must be a nonempty array");
    std::vector<Measure1D> factors;
    for (const auto& x : f) factors.push_back(measure1d_from_json(x));
    return Measure::product(std::move(factors));
  }
  if (type == "affine") {
    only_keys(j, {"type", "base", "T", "shift"}, what);
    const Measure base = measure_from_json(field(j, "base", what), default_n);
    const Mat T = mat_from_json(field(j, "T", what), "measure.T");
    const Vec s = vec_from_json(field(j, "shift", what), "measure.shift");
    config(T.rows() == base.dim() && T.cols() == base.dim() && s.size() == base.dim(),
           "measure: affine map has the wrong shape");
    return base.affine(T, s);
  }
  throw Error(ErrorCode::Config, "measure: unknown type '" + type + "'");
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, what + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::Config, "cannot write " + tmp.string());
    out << content;
    out.close();
    require(static_cast<bool>(out), ErrorCode::Config, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::Config, "cannot rename onto " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Config, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lcp

#include "lcp/measure.hpp"

#include "lcp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_unit_ball_volume(int n) { return 0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0); }

bool vertex_set_closed(const std::vector<Vec>& verts, const std::function<Vec(const Vec&)>& g) {
  double scale = 1.0;
  for (const Vec& v : verts) scale = std::max(scale, v.norm());
  for (const Vec& v : verts) {
    const Vec w = g(v);
    bool found = false;
    for (const Vec& u : verts)
      if ((u - w).norm() <= 1e-9 * scale) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

bool body_unconditional(const ConvexBody& K) {
  if (const Ball* b = K.as_ball()) return b->center.norm() <= 1e-12 * b->radius;
  if (!K.is_polytope()) return false;
  const auto& verts = K.structure().vertices();
  for (int j = 0; j < K.dim(); ++j)
    if (!vertex_set_closed(verts, [j](const Vec& v) {
          Vec w = v;
          w[j] = -w[j];
          return w;
        }))
      return false;
  return true;
}

bool body_permutation_invariant(const ConvexBody& K) {
  if (K.as_ball()) return true;
  if (!K.is_polytope()) return false;
  const auto& verts = K.structure().vertices();
  for (int j = 0; j + 1 < K.dim(); ++j)
    if (!vertex_set_closed(verts, [j](const Vec& v) {
          Vec w = v;
          std::swap(w[j], w[j + 1]);
          return w;
        }))
      return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// LevelSet

const ConvexBody& LevelSet::body() const {
  require(body_.has_value(), ErrorCode::Unsupported, "level set has no explicit body");
  return *body_;
}

bool LevelSet::contains(const Vec& x) const {
  if (body_) return body_->contains(x);
  return member_(x);
}

double LevelSet::radial(const Vec& u) const {
  if (body_) {
    if (!body_->contains(Vec::Zero(dim()))) return 0.0;
    return std::max(0.0, body_->chord(Vec::Zero(dim()), u).second);
  }
  if (!member_(Vec::Zero(dim_))) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (member_(hi * u)) {
    lo = hi;
    hi *= 2.0;
    require(hi < 1e12, ErrorCode::NonCompact, "level set appears unbounded");
  }
  for (int it = 0; it < 100 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (member_(mid * u))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Measure

struct Measure::Data {
  Family family = Family::Gaussian;
  int n = 0;
  std::string name;
  MeasureFlags flags;
  double log_norm = 0.0;  // log of the normalizing constant (or of 1/density)
  std::optional<ConvexBody> body;
  std::function<double(const Vec&)> gauge;  // ||x||_K for BodyNorm
  double p = 2.0;
  double sigma = 1.0;
  std::vector<Measure1D> factors;
  std::optional<Measure> base;
  Mat T, Tinv;
  Vec shift;
  double log_det = 0.0;
  std::function<double(const Vec&)> log_density;
  Vec argmax;
  Sampler sampler;
};

Measure Measure::uniform_body(ConvexBody K) {
  auto d = std::make_shared<Data>();
  d->family = Family::UniformBody;
  d->n = K.dim();
  d->name = "uniform_body";
  d->log_norm = std::log(volume(K));
  d->flags.even = is_symmetric(K);
  d->flags.unconditional = body_unconditional(K);
  d->flags.one_symmetric = d->flags.unconditional && body_permutation_invariant(K);
  d->flags.geometric = K.contains(Vec::Zero(K.dim()));
  d->argmax = K.is_polytope() ? chebyshev_inball(K).center
                              : (K.as_ball() ? K.as_ball()->center : Vec::Zero(K.dim()));
  if (d->flags.geometric) d->argmax = Vec::Zero(K.dim());
  d->body = std::move(K);
  return Measure(d);
}

double pnorm_log_normalizer(int n, double p, double sigma) {
  return std::log(static_cast<double>(n)) + log_unit_ball_volume(n) +
         (n / p - 1.0) * std::log(p) + std::lgamma(n / p) + n * std::log(sigma);
}

double pnorm_coordinate_variance(int n, double p, double sigma) {
  return sigma * sigma * std::exp((2.0 / p) * std::log(p) + std::lgamma((n + 2.0) / p) -
                                  std::lgamma(static_cast<double>(n) / p)) /
         n;
}

Measure Measure::pnorm(int n, double p, double sigma) {
  require(n >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  require(p >= 1.0 && std::isfinite(p), ErrorCode::InvalidArgument, "p must be at least 1");
  require(sigma > 0.0, ErrorCode::InvalidArgument, "sigma must be positive");
  auto d = std::make_shared<Data>();
  d->family = Family::PNormRadial;
  d->n = n;
  d->name = "pnorm";
  d->p = p;
  d->sigma = sigma;
  d->log_norm = pnorm_log_normalizer(n, p, sigma);
  d->flags = {true, true, true, true};
  d->argmax = Vec::Zero(n);
  return Measure(d);
}

Measure Measure::body_norm(ConvexBody K, double p, double sigma) {
  require(p >= 1.0 && std::isfinite(p), ErrorCode::InvalidArgument, "p must be at least 1");
  require(sigma > 0.0, ErrorCode::InvalidArgument, "sigma must be positive");
  require(is_symmetric(K), ErrorCode::InvalidArgument, "body_norm needs a symmetric body");
  auto d = std::make_shared<Data>();
  d->family = Family::BodyNorm;
  d->n = K.dim();
  d->name = "body_norm";
  d->p = p;
  d->sigma = sigma;
  d->log_norm = d->n * std::log(sigma) + std::log(volume(K)) + std::lgamma(1.0 + d->n / p);
  d->flags.even = true;
  d->flags.geometric = true;
  d->flags.unconditional = body_unconditional(K);
  d->flags.one_symmetric = d->flags.unconditional && body_permutation_invariant(K);
  d->argmax = Vec::Zero(d->n);
  if (const Ball* b = K.as_ball()) {
    const double r = b->radius;
    d->gauge = [r](const Vec& x) { return x.norm() / r; };
  } else {
    require(K.is_polytope(), ErrorCode::Unsupported, "body_norm needs a polytope or a ball");
    const HPolytope h = K.h_form();
    d->gauge = [h](const Vec& x) { return ((h.A * x).array() / h.b.array()).maxCoeff(); };
  }
  d->body = std::move(K);
  return Measure(d);
}

Measure Measure::product(std::vector<Measure1D> factors) {
  require(!factors.empty(), ErrorCode::InvalidArgument, "product needs at least one factor");
  auto d = std::make_shared<Data>();
  d->family = Family::Product;
  d->n = static_cast<int>(factors.size());
  d->name = "product";
  bool all_even = true, all_geo = true, identical = true;
  d->argmax = Vec(d->n);
  for (size_t k = 0; k < factors.size(); ++k) {
    const Measure1D& f = factors[k];
    all_even = all_even && f.even();
    all_geo = all_geo && std::abs(f.density(0.0) - f.sup()) <= 1e-12 * f.sup();
    identical = identical && f.family() == factors[0].family() && f.params() == factors[0].params();
    d->argmax[k] = f.argmax();
  }
  d->flags.even = all_even;
  d->flags.unconditional = all_even;
  d->flags.one_symmetric = all_even && identical;
  d->flags.geometric = all_geo;
  if (all_geo) d->argmax = Vec::Zero(d->n);
  d->factors = std::move(factors);
  return Measure(d);
}

Measure Measure::gaussian(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  auto d = std::make_shared<Data>();
  d->family = Family::Gaussian;
  d->n = n;
  d->name = "gaussian";
  d->log_norm = 0.5 * n * std::log(2.0 * M_PI);
  d->flags = {true, true, true, true};
  d->argmax = Vec::Zero(n);
  return Measure(d);
}

Measure Measure::general(int n, std::function<double(const Vec&)> log_density, Vec argmax,
                         MeasureFlags flags, Sampler sampler, std::string name) {
  require(argmax.size() == n, ErrorCode::InvalidArgument, "argmax has wrong dimension");
  auto d = std::make_shared<Data>();
  d->family = Family::General;
  d->n = n;
  d->name = std::move(name);
  d->flags = flags;
  d->log_density = std::move(log_density);
  d->argmax = std::move(argmax);
  d->sampler = std::move(sampler);
  return Measure(d);
}

Measure Measure::affine(const Mat& T, const Vec& shift) const {
  const int n = dim();
  require(T.rows() == n && T.cols() == n && shift.size() == n, ErrorCode::InvalidArgument,
          "affine map has wrong shape");
  Eigen::FullPivLU<Mat> lu(T);
  require(lu.isInvertible(), ErrorCode::Degenerate, "affine map is singular");
  const double det = T.determinant();
  const double lam = std::pow(std::abs(det), 1.0 / n);
  const bool similarity =
      (T.transpose() * T - lam * lam * Mat::Identity(n, n)).norm() <= 1e-12 * lam * lam;
  const bool diagonal = (T - Mat(T.diagonal().asDiagonal())).norm() == 0.0;
  const bool centered = shift.norm() == 0.0;

  switch (family()) {
    case Family::UniformBody:
      if (body().is_polytope() || similarity)
        return uniform_body(body().linear_image(T).translated(shift));
      break;
    case Family::PNormRadial:
      if (similarity && centered) return pnorm(n, p(), sigma() * lam);
      break;
    case Family::Gaussian:
      if (similarity && centered && std::abs(lam - 1.0) <= 1e-14) return gaussian(n);
      break;
    case Family::BodyNorm:
      if (centered) return body_norm(body().linear_image(T), p(), sigma());
      break;
    case Family::Product:
      if (diagonal) {
        std::vector<Measure1D> fs;
        for (int k = 0; k < n; ++k) fs.push_back(factors()[k].affine(T(k, k), shift[k]));
        return product(std::move(fs));
      }
      break;
    default:
      break;
  }
  auto d = std::make_shared<Data>();
  d->family = Family::Affine;
  d->n = n;
  d->name = "affine(" + name() + ")";
  d->base = *this;
  d->T = T;
  d->Tinv = lu.inverse();
  d->shift = shift;
  d->log_det = std::log(std::abs(det));
  d->argmax = T * argmax() + shift;
  const MeasureFlags& bf = flags();
  d->flags.even = bf.even && centered;
  d->flags.unconditional = bf.unconditional && centered && diagonal;
  d->flags.one_symmetric = bf.one_symmetric && centered && similarity && diagonal;
  d->flags.geometric = bf.geometric && centered;
  return Measure(d);
}

Measure::Family Measure::family() const { return d_->family; }
int Measure::dim() const { return d_->n; }
std::string Measure::name() const { return d_->name; }
const MeasureFlags& Measure::flags() const { return d_->flags; }
Vec Measure::argmax() const { return d_->argmax; }

const ConvexBody& Measure::body() const {
  require(d_->body.has_value(), ErrorCode::InvalidArgument, "measure has no body parameter");
  return *d_->body;
}
double Measure::p() const { return d_->p; }
double Measure::sigma() const { return d_->sigma; }
const std::vector<Measure1D>& Measure::factors() const { return d_->factors; }
const Measure& Measure::base() const {
  require(d_->base.has_value(), ErrorCode::InvalidArgument, "measure is not an affine image");
  return *d_->base;
}
const Mat& Measure::map() const { return d_->T; }
const Vec& Measure::shift() const { return d_->shift; }
const Measure::Sampler& Measure::general_sampler() const { return d_->sampler; }

double Measure::log_density(const Vec& x) const {
  const Data& d = *d_;
  switch (d.family) {
    case Family::UniformBody:
      return d.body->contains(x) ? -d.log_norm : -kInf;
    case Family::PNormRadial:
      return -std::pow(x.norm() / d.sigma, d.p) / d.p - d.log_norm;
    case Family::BodyNorm:
      return -std::pow(std::max(0.0, d.gauge(x)) / d.sigma, d.p) - d.log_norm;
    case Family::Gaussian:
      return -0.5 * x.squaredNorm() - d.log_norm;
    case Family::Product: {
      double s = 0.0;
      for (int k = 0; k < d.n; ++k) {
        s += d.factors[k].log_density(x[k]);
        if (s == -kInf) break;
      }
      return s;
    }
    case Family::General:
      return d.log_density(x);
    case Family::Affine:
      return d.base->log_density(d.Tinv * (x - d.shift)) - d.log_det;
  }
  return -kInf;
}

double Measure::density(const Vec& x) const { return std::exp(log_density(x)); }

double Measure::log_sup_density() const {
  const Data& d = *d_;
  switch (d.family) {
    case Family::UniformBody:
    case Family::PNormRadial:
    case Family::BodyNorm:
    case Family::Gaussian:
      return -d.log_norm;
    case Family::Product: {
      double s = 0.0;
      for (const auto& f : d.factors) s += std::log(f.sup());
      return s;
    }
    case Family::General:
      return d.log_density(d.argmax);
    case Family::Affine:
      return d.base->log_sup_density() - d.log_det;
  }
  return 0.0;
}

double Measure::sup_density() const { return std::exp(log_sup_density()); }

LevelSet Measure::level_set(double t) const {
  require(t >= 0.0, ErrorCode::InvalidArgument, "level t must be nonnegative");
  const Data& d = *d_;
  const int n = d.n;
  switch (d.family) {
    case Family::UniformBody:
      return LevelSet(t, *d.body);
    case Family::PNormRadial:
      if (t > 0.0) return LevelSet(t, ConvexBody::ball(Vec::Zero(n), d.sigma * std::pow(d.p * t, 1.0 / d.p)));
      break;
    case Family::Gaussian:
      if (t > 0.0) return LevelSet(t, ConvexBody::ball(Vec::Zero(n), std::sqrt(2.0 * t)));
      break;
    case Family::BodyNorm:
      if (t > 0.0) return LevelSet(t, d.body->scaled(d.sigma * std::pow(t, 1.0 / d.p)));
      break;
    case Family::Product: {
      bool all_uniform = true;
      for (const auto& f : d.factors) all_uniform = all_uniform && f.family() == Measure1D::Family::Uniform;
      if (all_uniform) {
        Vec lo(n), hi(n);
        for (int k = 0; k < n; ++k) {
          lo[k] = d.factors[k].support_lo();
          hi[k] = d.factors[k].support_hi();
        }
        return LevelSet(t, ConvexBody::box(lo, hi));
      }
      break;
    }
    case Family::Affine: {
      LevelSet b = d.base->level_set(t);
      if (b.is_explicit()) {
        try {
          return LevelSet(t, b.body().linear_image(d.T).translated(d.shift));
        } catch (const Error&) {
          // e.g. an ellipsoidal image; fall through to the oracle.
        }
      }
      break;
    }
    default:
      break;
  }
  const double threshold = log_sup_density() - t;
  Measure self = *this;
  // Relative slack so that the maximizer itself is always a member.
  const double slack = 1e-12 * std::max(1.0, std::abs(threshold));
  return LevelSet(
      t, [self, threshold, slack](const Vec& x) { return self.log_density(x) >= threshold - slack; }, n);
}

std::pair<Vec, Mat> uniform_body_moments(const ConvexBody& K) {
  const int n = K.dim();
  if (const Ball* b = K.as_ball())
    return {b->center, Mat::Identity(n, n) * (b->radius * b->radius / (n + 2.0))};
  if (auto box = K.as_box()) {
    const Vec side = box->second - box->first;
    return {0.5 * (box->first + box->second), Mat(side.array().square().matrix().asDiagonal()) / 12.0};
  }
  const auto& s = K.structure();
  const auto& V = s.vertices();
  // Work relative to a reference vertex to limit cancellation.
  const Vec ref = V.front();
  double vol = 0.0;
  Vec m1 = Vec::Zero(n);
  Mat m2 = Mat::Zero(n, n);
  Mat E(n, n);
  for (const auto& simplex : s.triangulation()) {
    for (int k = 1; k <= n; ++k) E.col(k - 1) = V[simplex[k]] - V[simplex[0]];
    const double w = std::abs(E.determinant());
    Vec sum = Vec::Zero(n);
    Mat outer = Mat::Zero(n, n);
    for (int v : simplex) {
      const Vec y = V[v] - ref;
      sum += y;
      outer += y * y.transpose();
    }
    // E[yy^T] over a simplex = (sum_i y_i y_i^T + (sum y_i)(sum y_i)^T) / ((n+1)(n+2)).
    vol += w;
    m1 += w * sum / (n + 1.0);
    m2 += w * (outer + sum * sum.transpose()) / ((n + 1.0) * (n + 2.0));
  }
  m1 /= vol;
  m2 /= vol;
  Mat cov = m2 - m1 * m1.transpose();
  cov = 0.5 * (cov + cov.transpose());
  return {m1 + ref, cov};
}

double isotropic_constant(double sup_density, const Mat& cov) {
  const int n = static_cast<int>(cov.rows());
  const double logdet = std::log(cov.determinant());
  return std::exp(std::log(sup_density) / n + logdet / (2.0 * n));
}

std::optional<ExactMoments> Measure::exact_moments() const {
  const Data& d = *d_;
  const int n = d.n;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  switch (d.family) {
    case Family::UniformBody: {
      if (!d.body->is_polytope() && !d.body->as_ball()) return std::nullopt;
      auto [m, c] = uniform_body_moments(*d.body);
      return ExactMoments{m, c, nan, nan};
    }
    case Family::PNormRadial: {
      const double lg = std::lgamma(n / d.p);
      const double e1 = d.sigma * std::exp(std::log(d.p) / d.p + std::lgamma((n + 1.0) / d.p) - lg);
      const double e2 = d.sigma * d.sigma * std::exp(2.0 * std::log(d.p) / d.p + std::lgamma((n + 2.0) / d.p) - lg);
      return ExactMoments{Vec::Zero(n), Mat::Identity(n, n) * (e2 / n), e1, e2 - e1 * e1};
    }
    case Family::Gaussian: {
      const double e1 = std::sqrt(2.0) * std::exp(std::lgamma((n + 1.0) / 2.0) - std::lgamma(n / 2.0));
      return ExactMoments{Vec::Zero(n), Mat::Identity(n, n), e1, n - e1 * e1};
    }
    case Family::BodyNorm: {
      if (!d.body->is_polytope() && !d.body->as_ball()) return std::nullopt;
      const Mat M = uniform_body_moments(*d.body).second;
      const double f = d.sigma * d.sigma * (n + 2.0) / n *
                       std::exp(std::lgamma((n + 2.0) / d.p) - std::lgamma(n / d.p));
      return ExactMoments{Vec::Zero(n), f * M, nan, nan};
    }
    case Family::Product: {
      Vec m(n), v(n);
      for (int k = 0; k < n; ++k) {
        m[k] = d.factors[k].mean();
        v[k] = d.factors[k].variance();
      }
      return ExactMoments{m, Mat(v.asDiagonal()), nan, nan};
    }
    case Family::Affine: {
      auto b = d.base->exact_moments();
      if (!b) return std::nullopt;
      return ExactMoments{d.T * b->mean + d.shift, d.T * b->cov * d.T.transpose(), nan, nan};
    }
    case Family::General:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace lcp

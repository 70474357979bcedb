#include "lcp/estimate.hpp"

#include "lcp/geometry.hpp"
#include "lcp/lp.hpp"
#include "lcp/parallel.hpp"
#include "lcp/rng.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace lcp {

namespace {

std::vector<long> stream_offsets(long total, int chains) {
  std::vector<long> off(chains + 1, 0);
  for (int k = 0; k < chains; ++k) off[k + 1] = off[k] + total / chains + (k < total % chains ? 1 : 0);
  return off;
}

int resolved_burn_in(const SamplerConfig& cfg, int n) { return cfg.burn_in >= 0 ? cfg.burn_in : 10 * n * n; }
int resolved_thinning(const SamplerConfig& cfg, int n) { return cfg.thinning > 0 ? cfg.thinning : n; }

Vec interior_point(const ConvexBody& K) {
  if (const Ball* b = K.as_ball()) return b->center;
  if (K.is_polytope()) return chebyshev_inball(K).center;
  const auto [lo, hi] = bounding_box(K);
  const Vec mid = 0.5 * (lo + hi);
  if (K.contains(mid)) return mid;
  Rng rng(0x5eed);
  for (int t = 0; t < 1000000; ++t) {
    Vec x(K.dim());
    for (int j = 0; j < K.dim(); ++j) x[j] = rng.uniform(lo[j], hi[j]);
    if (K.contains(x, 0.0)) return x;
  }
  throw Error(ErrorCode::SamplerUnavailable, "could not find an interior starting point");
}

double bbox_acceptance(const ConvexBody& K) {
  const auto [lo, hi] = bounding_box(K);
  const double box_vol = (hi - lo).prod();
  if (K.is_polytope() || K.as_ball()) return volume(K) / box_vol;
  Rng rng(0xacce);
  int hit = 0;
  const int trials = 4096;
  for (int t = 0; t < trials; ++t) {
    Vec x(K.dim());
    for (int j = 0; j < K.dim(); ++j) x[j] = rng.uniform(lo[j], hi[j]);
    hit += K.contains(x, 0.0);
  }
  return static_cast<double>(hit) / trials;
}

std::string uniform_method(const ConvexBody& K) {
  if (K.as_ball()) return "ball";
  return bbox_acceptance(K) >= 1e-3 ? "rejection" : "hit-and-run";
}

void fill_uniform_stream(const ConvexBody& K, const std::string& method, const SamplerConfig& cfg,
                         uint64_t seed, Eigen::Ref<Mat> out) {
  const int n = K.dim();
  Rng rng(seed);
  const long count = out.cols();
  if (method == "ball") {
    const Ball& b = *K.as_ball();
    for (long i = 0; i < count; ++i) {
      const Vec u = rng.unit_vec(n);
      out.col(i) = b.center + b.radius * std::pow(rng.uniform(), 1.0 / n) * u;
    }
  } else if (method == "rejection") {
    const auto [lo, hi] = bounding_box(K);
    Vec x(n);
    for (long i = 0; i < count;) {
      for (int j = 0; j < n; ++j) x[j] = rng.uniform(lo[j], hi[j]);
      if (K.contains(x, 0.0)) out.col(i++) = x;
    }
  } else {
    Vec x = interior_point(K);
    const int burn = resolved_burn_in(cfg, n);
    const int thin = resolved_thinning(cfg, n);
    auto step = [&] {
      const Vec u = rng.unit_vec(n);
      const auto [a, b] = K.chord(x, u);
      if (a < b) x += rng.uniform(a, b) * u;
    };
    for (int s = 0; s < burn; ++s) step();
    for (long i = 0; i < count; ++i) {
      for (int s = 0; s < thin; ++s) step();
      out.col(i) = x;
    }
  }
}

Samples uniform_samples(const ConvexBody& K, const SamplerConfig& cfg, const std::string& method) {
  require(cfg.samples > 0 && cfg.chains > 0, ErrorCode::InvalidArgument,
          "sample count and chain count must be positive");
  Samples S;
  S.X.resize(K.dim(), cfg.samples);
  S.offsets = stream_offsets(cfg.samples, cfg.chains);
  S.iid = method != "hit-and-run";
  S.method = method;
  S.seed = cfg.seed;
  parallel_for(cfg.chains, cfg.threads, [&](int k) {
    const long b = S.offsets[k], e = S.offsets[k + 1];
    fill_uniform_stream(K, method, cfg, derive_seed(cfg.seed, k), S.X.middleCols(b, e - b));
  });
  return S;
}

// Fills S.X column-by-column from an i.i.d. per-stream generator.
template <class Gen>
Samples iid_samples(int n, const SamplerConfig& cfg, const std::string& method, Gen gen) {
  require(cfg.samples > 0 && cfg.chains > 0, ErrorCode::InvalidArgument,
          "sample count and chain count must be positive");
  Samples S;
  S.X.resize(n, cfg.samples);
  S.offsets = stream_offsets(cfg.samples, cfg.chains);
  S.iid = true;
  S.method = method;
  S.seed = cfg.seed;
  parallel_for(cfg.chains, cfg.threads, [&](int k) {
    Rng rng(derive_seed(cfg.seed, k));
    for (long i = S.offsets[k]; i < S.offsets[k + 1]; ++i) S.X.col(i) = gen(rng);
  });
  return S;
}

// Per-row means of V (values x samples) with standard errors, honoring the
// stream structure of S.
void mean_and_stderr(const Samples& S, const Mat& V, Vec& mean, Vec& se) {
  const long N = V.cols();
  const int chains = static_cast<int>(S.offsets.size()) - 1;
  mean = Vec::Zero(V.rows());
  se = Vec::Zero(V.rows());
  Mat stream_means(V.rows(), chains);
  for (int k = 0; k < chains; ++k) {
    const long b = S.offsets[k], e = S.offsets[k + 1];
    stream_means.col(k) = e > b ? Vec(V.middleCols(b, e - b).rowwise().sum() / double(e - b))
                                : Vec::Zero(V.rows());
  }
  for (int k = 0; k < chains; ++k)
    mean += stream_means.col(k) * (double(S.offsets[k + 1] - S.offsets[k]) / N);
  if (S.iid || chains < 2) {
    for (Eigen::Index r = 0; r < V.rows(); ++r) {
      const double var = N > 1 ? (V.row(r).array() - mean[r]).square().sum() / (N - 1) : 0.0;
      se[r] = std::sqrt(var / N);
    }
  } else {
    for (Eigen::Index r = 0; r < V.rows(); ++r) {
      const double var = (stream_means.row(r).array() - mean[r]).square().sum() / (chains - 1);
      se[r] = std::sqrt(var / chains);
    }
  }
}

}  // namespace

std::string sampler_method(const Measure& mu, const SamplerConfig& cfg) {
  switch (mu.family()) {
    case Measure::Family::Gaussian: return "gaussian";
    case Measure::Family::Product: return "product";
    case Measure::Family::PNormRadial: return "radial";
    case Measure::Family::BodyNorm: return "body-norm";
    case Measure::Family::Affine: return "affine";
    case Measure::Family::UniformBody: return uniform_method(mu.body());
    case Measure::Family::General:
      require(static_cast<bool>(mu.general_sampler()), ErrorCode::SamplerUnavailable,
              "no sampler registered for this measure");
      return "general";
  }
  (void)cfg;
  return "";
}

Samples sample_uniform_body(const ConvexBody& K, const SamplerConfig& cfg, const std::string& method) {
  require(method == "rejection" || method == "hit-and-run" || method == "ball",
          ErrorCode::InvalidArgument, "unknown uniform sampling method " + method);
  return uniform_samples(K, cfg, method);
}

Samples sample(const Measure& mu, const SamplerConfig& cfg) {
  const int n = mu.dim();
  const std::string method = sampler_method(mu, cfg);
  switch (mu.family()) {
    case Measure::Family::Gaussian:
      return iid_samples(n, cfg, method, [n](Rng& rng) { return rng.normal_vec(n); });
    case Measure::Family::Product: {
      const auto& fs = mu.factors();
      return iid_samples(n, cfg, method, [&fs, n](Rng& rng) {
        Vec x(n);
        for (int k = 0; k < n; ++k) x[k] = fs[k].sample(rng);
        return x;
      });
    }
    case Measure::Family::PNormRadial: {
      const double p = mu.p(), sigma = mu.sigma();
      return iid_samples(n, cfg, method, [=](Rng& rng) {
        const Vec u = rng.unit_vec(n);
        const double g = boost::math::gamma_p_inv(n / p, rng.uniform_open());
        return Vec(sigma * std::pow(p * g, 1.0 / p) * u);
      });
    }
    case Measure::Family::UniformBody:
      return uniform_samples(mu.body(), cfg, method);
    case Measure::Family::BodyNorm: {
      const ConvexBody& K = mu.body();
      Samples S = uniform_samples(K, cfg, uniform_method(K));
      const double p = mu.p(), sigma = mu.sigma();
      const HPolytope* h = K.is_polytope() ? &K.h_form() : nullptr;
      const double r = K.as_ball() ? K.as_ball()->radius : 1.0;
      // Radial part from a separate family of streams.
      for (int k = 0; k + 1 < static_cast<int>(S.offsets.size()); ++k) {
        Rng rng(derive_seed(cfg.seed ^ 0x6b6f726d, k));
        for (long i = S.offsets[k]; i < S.offsets[k + 1]; ++i) {
          const Vec y = S.X.col(i);
          const double gauge =
              h ? ((h->A * y).array() / h->b.array()).maxCoeff() : y.norm() / r;
          const double g = boost::math::gamma_p_inv(n / p, rng.uniform_open());
          S.X.col(i) = sigma * std::pow(g, 1.0 / p) * y / std::max(gauge, 1e-300);
        }
      }
      S.method = method;
      return S;
    }
    case Measure::Family::Affine: {
      Samples S = sample(mu.base(), cfg);
      S.X = (mu.map() * S.X).colwise() + mu.shift();
      S.method = method;
      return S;
    }
    case Measure::Family::General: {
      const auto& gen = mu.general_sampler();
      return iid_samples(n, cfg, method, [&gen](Rng& rng) { return gen(rng); });
    }
  }
  throw Error(ErrorCode::SamplerUnavailable, "no sampler");
}

Estimate mean_estimate(const Samples& S, const std::function<double(const Vec&)>& g) {
  Mat V(1, S.size());
  for (long i = 0; i < S.size(); ++i) V(0, i) = g(S.X.col(i));
  Vec m, se;
  mean_and_stderr(S, V, m, se);
  return {m[0], se[0], S.size(), S.seed, S.method};
}

std::vector<Estimate> mean_estimates(const Samples& S, const Mat& V) {
  require(V.cols() == S.size(), ErrorCode::InvalidArgument, "one value column per sample expected");
  Vec m, se;
  mean_and_stderr(S, V, m, se);
  std::vector<Estimate> out;
  for (Eigen::Index r = 0; r < V.rows(); ++r) out.push_back({m[r], se[r], S.size(), S.seed, S.method});
  return out;
}

Estimate estimate_prob(const Samples& S, const std::function<bool(const Vec&)>& member) {
  Estimate e = mean_estimate(S, [&](const Vec& x) { return member(x) ? 1.0 : 0.0; });
  if (S.iid) e.stderr = std::sqrt(std::max(0.0, e.value * (1.0 - e.value)) / S.size());
  return e;
}

Estimate estimate_prob(const Measure& mu, const ConvexBody& A, const SamplerConfig& cfg) {
  const Samples S = sample(mu, cfg);
  return estimate_prob(S, [&](const Vec& x) { return A.contains(x); });
}

SampleMoments moments(const Measure& mu, const SamplerConfig& cfg) {
  const int n = mu.dim();
  SampleMoments out;
  const auto exact = mu.exact_moments();
  const bool need_norm = !exact || !std::isfinite(exact->mean_norm);
  if (exact) {
    out.mean = exact->mean;
    out.cov = exact->cov;
    out.mean_norm = exact->mean_norm;
    out.var_norm = exact->var_norm;
    out.mean_stderr = Vec::Zero(n);
    out.cov_stderr = Mat::Zero(n, n);
    out.exact = true;
    if (!need_norm) return out;
  }
  require(cfg.samples >= 2, ErrorCode::InvalidArgument, "moments need samples");
  const Samples S = sample(mu, cfg);
  const long N = S.size();
  // Rows: x (n), x x^T upper part as full n*n, |x|, |x|^2.
  Mat V(n + n * n + 2, N);
  for (long i = 0; i < N; ++i) {
    const Vec x = S.X.col(i);
    V.col(i).head(n) = x;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) V(n + a * n + b, i) = x[a] * x[b];
    V(n + n * n, i) = x.norm();
    V(n + n * n + 1, i) = x.squaredNorm();
  }
  Vec m, se;
  mean_and_stderr(S, V, m, se);
  const double en = m[n + n * n], en2 = m[n + n * n + 1];
  out.mean_norm = en;
  out.var_norm = en2 - en * en;
  out.mean_norm_stderr = se[n + n * n];
  if (!exact) {
    out.mean = m.head(n);
    out.mean_stderr = se.head(n);
    out.cov.resize(n, n);
    out.cov_stderr.resize(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        out.cov(a, b) = m[n + a * n + b] - out.mean[a] * out.mean[b];
        out.cov_stderr(a, b) = se[n + a * n + b];
      }
  }
  return out;
}

Isotropized isotropize(const Measure& mu, const SamplerConfig& cfg) {
  const int n = mu.dim();
  SampleMoments mo;
  if (auto ex = mu.exact_moments()) {
    mo.mean = ex->mean;
    mo.cov = ex->cov;
    mo.exact = true;
  } else {
    mo = moments(mu, cfg);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (mo.cov + mo.cov.transpose()));
  const Vec lam = es.eigenvalues();
  require(lam.minCoeff() > 1e-12 * std::max(1.0, lam.maxCoeff()), ErrorCode::Degenerate,
          "covariance is singular; the measure is not full-dimensional");
  const Mat Q = es.eigenvectors();
  Mat T = Q * lam.cwiseMax(1e-12).cwiseSqrt().cwiseInverse().asDiagonal() * Q.transpose();
  T = 0.5 * (T + T.transpose());
  // Snap a numerically scalar map to an exact multiple of the identity so
  // rotation-invariant families keep their closed forms.
  const double scal = T.trace() / n;
  if ((T - scal * Mat::Identity(n, n)).norm() <= 1e-13 * scal) T = scal * Mat::Identity(n, n);
  Vec shift = -T * mo.mean;
  if (shift.norm() <= 1e-15 * std::max(1.0, mo.mean.norm())) shift.setZero();
  return {mu.affine(T, shift), T, shift, mo.exact};
}

double isotropic_constant(const Measure& mu, const SamplerConfig& cfg) {
  Mat cov;
  if (auto ex = mu.exact_moments())
    cov = ex->cov;
  else
    cov = moments(mu, cfg).cov;
  return isotropic_constant(mu.sup_density(), cov);
}

Measure1D marginal_1d(const Measure& mu, const Vec& xi, const SamplerConfig& cfg) {
  const int n = mu.dim();
  require(xi.size() == n && std::abs(xi.norm() - 1.0) <= 1e-9, ErrorCode::InvalidArgument,
          "marginal direction must be a unit vector");
  if (mu.family() == Measure::Family::Gaussian) return Measure1D::gaussian(0.0, 1.0);
  if (mu.family() == Measure::Family::Product) {
    Eigen::Index k;
    xi.cwiseAbs().maxCoeff(&k);
    if (std::abs(std::abs(xi[k]) - 1.0) <= 1e-12) {
      if (xi[k] > 0.0) return mu.factors()[k];
      try {
        return mu.factors()[k].affine(-1.0, 0.0);
      } catch (const Error&) {
        // fall back to the empirical marginal
      }
    }
  }
  return empirical_marginal(sample(mu, cfg), xi);
}

Measure1D empirical_marginal(const Samples& S, const Vec& xi) {
  const long N = S.size();
  require(N >= 2 && xi.size() == S.X.rows(), ErrorCode::InvalidArgument, "bad samples for a marginal");
  const Vec y = xi.transpose() * S.X;
  const double m = y.mean();
  const double sd = std::sqrt((y.array() - m).square().sum() / (N - 1));
  require(sd > 0.0, ErrorCode::Degenerate, "marginal has zero variance");
  const int bins = 512;
  const double lo = m - 8.0 * sd, hi = m + 8.0 * sd, h = (hi - lo) / bins;
  const int chains = static_cast<int>(S.offsets.size()) - 1;
  // counts(b, k): points of stream k in bin b.
  Mat counts = Mat::Zero(bins, chains);
  for (int k = 0; k < chains; ++k)
    for (long i = S.offsets[k]; i < S.offsets[k + 1]; ++i) {
      const long b = static_cast<long>(std::floor((y[i] - lo) / h));
      if (b >= 0 && b < bins) counts(b, k) += 1.0;
    }
  std::vector<double> x(bins), d(bins), se(bins);
  for (int b = 0; b < bins; ++b) {
    x[b] = lo + (b + 0.5) * h;
    const double p = counts.row(b).sum() / N;
    d[b] = p / h;
    if (S.iid || chains < 2) {
      se[b] = std::sqrt(p * (1.0 - p) / N) / h;
    } else {
      double v = 0.0;
      for (int k = 0; k < chains; ++k) {
        const double len = static_cast<double>(S.offsets[k + 1] - S.offsets[k]);
        const double pk = len > 0 ? counts(b, k) / len : 0.0;
        v += (pk - p) * (pk - p);
      }
      se[b] = std::sqrt(v / (chains - 1) / chains) / h;
    }
  }
  return Measure1D::tabulated(std::move(x), std::move(d), std::move(se));
}

std::vector<Vec> sample_facet(const ConvexBody& K, int facet, long count, uint64_t seed) {
  const auto& st = K.structure();
  require(facet >= 0 && facet < static_cast<int>(st.facets().size()), ErrorCode::InvalidArgument,
          "facet index out of range");
  const int n = K.dim();
  std::vector<Vec> out;
  out.reserve(count);
  if (n == 1) {
    out.assign(count, st.vertices()[st.facets()[facet].vertices.front()]);
    return out;
  }
  const auto simplices = st.facet_triangulation(facet);
  std::vector<double> cum;
  double total = 0.0;
  for (double v : st.facet_simplex_volumes(facet)) cum.push_back(total += v);
  require(total > 0.0, ErrorCode::Degenerate, "facet has zero area");
  Rng rng(seed);
  std::vector<double> w(n);
  for (long i = 0; i < count; ++i) {
    const double u = rng.uniform() * total;
    const size_t k = std::min<size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin(),
                                      simplices.size() - 1);
    double sw = 0.0;
    for (int j = 0; j < n; ++j) sw += (w[j] = rng.exponential());
    Vec x = Vec::Zero(n);
    for (int j = 0; j < n; ++j) x += (w[j] / sw) * st.vertices()[simplices[k][j]];
    out.push_back(std::move(x));
  }
  return out;
}

Estimate estimate_facet_integral(const Measure& mu, const ConvexBody& K, int facet,
                                 const SamplerConfig& cfg) {
  const double area = K.dim() == 1 ? 1.0 : K.structure().facet_area(facet);
  const uint64_t seed = derive_seed(cfg.seed, 0x100000 + static_cast<uint64_t>(facet));
  const auto pts = sample_facet(K, facet, cfg.samples, seed);
  long double s = 0.0L, s2 = 0.0L;
  for (const Vec& x : pts) {
    const double f = mu.density(x);
    s += f;
    s2 += static_cast<long double>(f) * f;
  }
  const double N = static_cast<double>(pts.size());
  const double mean = static_cast<double>(s / N);
  const double var = N > 1 ? std::max(0.0, static_cast<double>((s2 - s * s / N) / (N - 1))) : 0.0;
  return {area * mean, area * std::sqrt(var / N), static_cast<long>(pts.size()), seed, "facet-mc"};
}

}  // namespace lcp

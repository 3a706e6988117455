#include "regimecast/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace regimecast {

void warn(WarningSink* sink, std::string msg) {
  if (sink) {
    sink->add(std::move(msg));
  } else {
    std::fprintf(stderr, "[regimecast] warning: %s\n", msg.c_str());
  }
}

double sample_normal(Rng& rng) {
  // Marsaglia polar method; the second variate of each accepted pair is
  // discarded so the stream position depends only on the call count.
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double sample_exponential(Rng& rng) { return -std::log(rng.uniform()); }

double sample_gamma(double shape, Rng& rng) {
  require(std::isfinite(shape) && shape > 0.0, "sample_gamma: shape must be > 0");
  if (shape < 1.0) {
    // Boost via Gamma(shape+1) and a uniform power.
    const double g = sample_gamma(shape + 1.0, rng);
    return g * std::pow(rng.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

double sample_chisq(double df, Rng& rng) { return 2.0 * sample_gamma(0.5 * df, rng); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_logpdf(double x, double mean, double var) {
  const double z = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + z * z / var);
}

// ---- GIG ---------------------------------------------------------------------

bool GigParams::valid() const {
  if (!std::isfinite(p) || !std::isfinite(chi) || !std::isfinite(psi)) return false;
  if (chi > 0.0 && psi > 0.0) return true;
  if (chi > 0.0 && psi == 0.0 && p < 0.0) return true;
  if (chi == 0.0 && psi > 0.0 && p > 0.0) return true;
  return false;
}

namespace {

// Log of the unnormalized GIG density.
inline double gig_logh(double x, double p, double chi, double psi) {
  return (p - 1.0) * std::log(x) - 0.5 * (chi / x + psi * x);
}

// Mode of the density for psi > 0; written to avoid cancellation when p < 1
// and chi*psi is tiny.
inline double gig_mode(double p, double chi, double psi) {
  const double disc = std::sqrt((p - 1.0) * (p - 1.0) + chi * psi);
  if (p >= 1.0) return ((p - 1.0) + disc) / psi;
  return chi / (disc + (1.0 - p));
}

// Real roots of x^3 + a2 x^2 + a1 x + a0 = 0 (trigonometric method).
inline int solve_cubic(double a2, double a1, double a0, double roots[3]) {
  const double q = (3.0 * a1 - a2 * a2) / 9.0;
  const double r = (9.0 * a2 * a1 - 27.0 * a0 - 2.0 * a2 * a2 * a2) / 54.0;
  const double disc = q * q * q + r * r;
  if (disc <= 0.0) {
    const double theta = std::acos(std::clamp(r / std::sqrt(-q * q * q), -1.0, 1.0));
    const double f = 2.0 * std::sqrt(-q);
    for (int i = 0; i < 3; ++i)
      roots[i] = f * std::cos((theta + 2.0 * std::numbers::pi * i) / 3.0) - a2 / 3.0;
    return 3;
  }
  const double s = std::cbrt(r + std::sqrt(disc));
  const double t = std::cbrt(r - std::sqrt(disc));
  roots[0] = s + t - a2 / 3.0;
  return 1;
}

// Maximize f over (lo, hi) by golden-section search; f must be unimodal on
// the bracket. Used only as a fallback when the cubic roots land outside
// their expected intervals.
template <typename F>
double golden_max(const F& f, double lo, double hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 200; ++it) {
    if (f(c) > f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  return 0.5 * (a + b);
}

// Ratio-of-uniforms with mode shift. h is normalized by its mode value so
// all envelope arithmetic stays in a safe floating point range even for
// chi near the 1e-10 floor.
double sample_gig_rou(double p, double chi, double psi, Rng& rng) {
  const double mode = gig_mode(p, chi, psi);
  const double lh_mode = gig_logh(mode, p, chi, psi);

  auto u_at = [&](double x) {
    return (x - mode) * std::exp(0.5 * (gig_logh(x, p, chi, psi) - lh_mode));
  };

  // Stationary points of (x-mode)^2 * h(x) solve a cubic with one root in
  // (0, mode) and one above the mode (a third root can fall outside the
  // support).
  const double a2 = -(2.0 * (p + 1.0) + psi * mode) / psi;
  const double a1 = (2.0 * (p - 1.0) * mode - chi) / psi;
  const double a0 = chi * mode / psi;
  double roots[3];
  const int n_roots = solve_cubic(a2, a1, a0, roots);
  double x_left = -1.0, x_right = -1.0;
  for (int i = 0; i < n_roots; ++i) {
    if (roots[i] > 0.0 && roots[i] < mode) x_left = roots[i];
    if (roots[i] > mode && (x_right < 0.0 || roots[i] < x_right)) x_right = roots[i];
  }
  if (x_left < 0.0)
    x_left = golden_max([&](double x) { return -u_at(x); }, mode * 1e-12, mode);
  if (x_right < 0.0) {
    double hi = 2.0 * mode + 1.0;
    while (u_at(2.0 * hi) > u_at(hi)) hi *= 2.0;
    x_right = golden_max([&](double x) { return u_at(x); }, mode, 2.0 * hi);
  }
  const double u_minus = u_at(x_left);
  const double u_plus = u_at(x_right);
  require(std::isfinite(u_minus) && std::isfinite(u_plus) && u_plus > 0.0 && u_minus <= 0.0,
          "sample_gig: envelope construction failed");

  for (;;) {
    const double u = u_minus + rng.uniform() * (u_plus - u_minus);
    const double v = rng.uniform();  // v_max = sqrt(h(mode)/h(mode)) = 1
    const double x = u / v + mode;
    if (x <= 0.0) continue;
    if (2.0 * std::log(v) <= gig_logh(x, p, chi, psi) - lh_mode) return x;
  }
}

}  // namespace

double sample_gig(const GigParams& params, Rng& rng) {
  require(params.valid(), "sample_gig: parameters outside the valid region");
  const double p = params.p, chi = params.chi, psi = params.psi;
  if (chi == 0.0) return sample_gamma(p, 0.5 * psi, rng);
  if (psi == 0.0) return 0.5 * chi / sample_gamma(-p, rng);
  return sample_gig_rou(p, chi, psi, rng);
}

// ---- Wishart -------------------------------------------------------------------

Matrix sample_wishart(const WishartParams& params, Rng& rng) {
  const Eigen::Index m = params.rate.rows();
  require(params.rate.cols() == m && m > 0, "sample_wishart: rate must be square");
  require(params.rate.allFinite(), "sample_wishart: non-finite rate matrix");
  require(params.shape > 0.5 * (static_cast<double>(m) - 1.0),
          "sample_wishart: shape must exceed (m-1)/2");

  const double n = 2.0 * params.shape;       // degrees of freedom
  Matrix scale = 2.0 * params.rate;          // V = (2*rate)^{-1}
  Eigen::LLT<Matrix> llt_rate(scale);
  if (llt_rate.info() != Eigen::Success)
    throw std::runtime_error("sample_wishart: rate matrix is not positive definite");
  Matrix v = llt_rate.solve(Matrix::Identity(m, m));
  v = 0.5 * (v + v.transpose()).eval();
  Eigen::LLT<Matrix> llt_v(v);
  if (llt_v.info() != Eigen::Success)
    throw std::runtime_error("sample_wishart: scale matrix is not positive definite");
  const Matrix lv = llt_v.matrixL();

  // Bartlett decomposition.
  Matrix a = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, i) = std::sqrt(sample_chisq(n - static_cast<double>(i), rng));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = sample_normal(rng);
  }
  const Matrix la = lv * a;
  Matrix x = la * la.transpose();
  return 0.5 * (x + x.transpose());
}

// ---- multivariate normal ---------------------------------------------------------

Vector sample_mvn(const Vector& mean, const Matrix& cov_chol, Rng& rng) {
  const Eigen::Index n = mean.size();
  require(cov_chol.rows() == n && cov_chol.cols() == n,
          "sample_mvn: dimension mismatch between mean and factor");
  require(mean.allFinite() && cov_chol.allFinite(), "sample_mvn: non-finite input");
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = sample_normal(rng);
  return mean + cov_chol.triangularView<Eigen::Lower>() * z;
}

// ---- truncated normal ---------------------------------------------------------------

namespace {

// Standard normal conditioned on Z > a.
double sample_normal_lower_truncated(double a, Rng& rng) {
  if (a < 0.45) {
    for (;;) {
      const double z = sample_normal(rng);
      if (z > a) return z;
    }
  }
  // Robert (1995): translated exponential proposal, efficient far in the tail.
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a + sample_exponential(rng) / alpha;
    const double d = z - alpha;
    if (std::log(rng.uniform()) <= -0.5 * d * d) return z;
  }
}

}  // namespace

double sample_truncated_normal(double mu, TruncationSide side, Rng& rng) {
  require(std::isfinite(mu), "sample_truncated_normal: non-finite mean");
  if (side == TruncationSide::positive) {
    return mu + sample_normal_lower_truncated(-mu, rng);
  }
  return -(-mu + sample_normal_lower_truncated(mu, rng));
}

}  // namespace regimecast

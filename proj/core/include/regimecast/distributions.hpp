#pragma once

#include "regimecast/rng.hpp"
#include "regimecast/types.hpp"

namespace regimecast {

// ---- scalar primitives ----------------------------------------------------

double sample_normal(Rng& rng);
double sample_exponential(Rng& rng);

// Gamma(shape) with unit rate, Marsaglia-Tsang; valid for any shape > 0.
double sample_gamma(double shape, Rng& rng);
inline double sample_gamma(double shape, double rate, Rng& rng) {
  return sample_gamma(shape, rng) / rate;
}
double sample_chisq(double df, Rng& rng);

double norm_cdf(double x);
double norm_logpdf(double x, double mean = 0.0, double var = 1.0);

// ---- generalized inverse Gaussian ------------------------------------------

// Density proportional to x^(p-1) * exp(-(chi/x + psi*x)/2) on x > 0.
// Valid regions: {chi>0, psi>0}, {chi>0, psi=0, p<0}, {chi=0, psi>0, p>0}.
struct GigParams {
  double p = 0.0;
  double chi = 0.0;
  double psi = 0.0;

  bool valid() const;
};

// Boundaries reduce to Gamma(p, rate psi/2) and inverse-Gamma(-p, chi/2);
// the interior uses ratio-of-uniforms with mode shift, which stays correct
// for p < 0 and chi down to the 1e-10 floor used by the shrinkage step.
double sample_gig(const GigParams& params, Rng& rng);

// ---- Wishart ----------------------------------------------------------------

// Rate parameterization: density proportional to
//   |X|^(shape-(m+1)/2) * exp(-tr(rate * X)),
// so E[X] = shape * rate^{-1}. Internally converted to the standard scale
// form with degrees of freedom n = 2*shape and scale V = (2*rate)^{-1}.
struct WishartParams {
  double shape = 0.0;  // requires shape > (m-1)/2
  Matrix rate;         // m x m symmetric positive definite
};

Matrix sample_wishart(const WishartParams& params, Rng& rng);

// ---- multivariate normal ----------------------------------------------------

// Draw from N(mean, L L') given the lower Cholesky factor L. A zero factor
// is allowed and returns the mean exactly.
Vector sample_mvn(const Vector& mean, const Matrix& cov_chol, Rng& rng);

// ---- truncated normal --------------------------------------------------------

enum class TruncationSide { positive, nonpositive };

// N(mu, 1) restricted to (0, inf) or (-inf, 0]. Uses plain rejection near
// the bulk and Robert's translated-exponential proposal in the far tail,
// so it does not degenerate for |mu| up to 8 and beyond.
double sample_truncated_normal(double mu, TruncationSide side, Rng& rng);

}  // namespace regimecast

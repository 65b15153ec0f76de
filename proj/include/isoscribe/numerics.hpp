#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "isoscribe/rng.hpp"

namespace isoscribe {

// Log of the gamma function for x > 0. Lanczos approximation, relative error
// below 1e-13 over [1e-3, 1e6]. Throws std::domain_error for x <= 0.
double ln_gamma(double x);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x),
// a > 0, x >= 0. Series expansion for x < a + 1, continued fraction
// otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Chi-squared survival function P(X > x) for df >= 1 degrees of freedom.
// Throws std::domain_error for df < 1 or x < 0.
double chi2_sf(double x, int df);

// Log multinomial pmf. With include_coefficient:
//   ln[(sum c)! / prod c_i!] + sum c_i ln p_i
// without, just the sum term. Probabilities must be nonnegative and sum to 1
// within 1e-9; a zero probability paired with a positive count yields -inf.
double log_multinomial_pmf(std::span<const std::int64_t> counts,
                           std::span<const double> probs,
                           bool include_coefficient);

std::int64_t sample_poisson(RngStream& stream, double mu);

// Draws n category labels by inversion of the cumulative distribution;
// returns per-category counts (sums to n).
std::vector<std::int64_t> sample_multinomial(RngStream& stream, std::int64_t n,
                                             std::span<const double> probs);

struct LogisticFit {
  double intercept = 0.0;
  double slope = 0.0;
  bool converged = false;
  int iterations = 0;
  bool separation_detected = false;
  // Standard errors from the observed information at the solution (valid
  // only when converged).
  double intercept_se = 0.0;
  double slope_se = 0.0;
};

// Maximum-likelihood logistic regression of binary y on a single covariate x
// plus intercept, by Newton iteration (iteratively reweighted least squares).
// Converges when the parameter step max-norm drops below 1e-10, capped at
// 100 iterations. Parameters exceeding 50 in magnitude flag separation and
// stop the iteration. A constant covariate throws std::invalid_argument
// ("degenerate design"); single-class y returns a non-converged fit with
// separation_detected set.
LogisticFit fit_logistic(std::span<const double> x, std::span<const int> y);

// Inverse-logit(intercept + slope * size). Throws std::invalid_argument on a
// non-converged fit.
double predict_accuracy(const LogisticFit& fit, double size);

}  // namespace isoscribe

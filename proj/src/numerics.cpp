#include "isoscribe/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace isoscribe {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLnSqrt2Pi = 0.91893853320467274178;

// Lanczos g = 607/128, 15 terms (Godfrey coefficients).
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

double ln_gamma_lanczos(double z) {
  // z >= 0.5; computes lgamma via Gamma(z+1)/z form for stability near 1.
  const double zm1 = z - 1.0;
  double sum = kLanczos[0];
  for (int k = 1; k < 15; ++k) sum += kLanczos[k] / (zm1 + k);
  const double base = zm1 + kLanczosG + 0.5;
  return kLnSqrt2Pi + (zm1 + 0.5) * std::log(base) - base + std::log(sum);
}

constexpr int kGammaItMax = 500;
constexpr double kGammaEps = 1e-16;

// Lower regularized incomplete gamma by series, for x < a + 1.
double gamma_p_series(double a, double x) {
  if (x <= 0.0) return 0.0;
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kGammaItMax; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
}

// Upper regularized incomplete gamma by Lentz continued fraction, x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaItMax; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - ln_gamma(a)) * h;
}

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("ln_gamma: x must be positive");
  if (x < 0.5) {
    // Reflection: lgamma(x) = ln(pi / sin(pi x)) - lgamma(1 - x).
    return std::log(kPi / std::sin(kPi * x)) - ln_gamma_lanczos(1.0 - x);
  }
  return ln_gamma_lanczos(x);
}

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p: a must be positive");
  if (x < 0.0) throw std::domain_error("gamma_p: x must be nonnegative");
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_q: a must be positive");
  if (x < 0.0) throw std::domain_error("gamma_q: x must be nonnegative");
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_sf(double x, int df) {
  if (df < 1) throw std::domain_error("chi2_sf: df must be >= 1");
  if (x < 0.0) throw std::domain_error("chi2_sf: x must be nonnegative");
  return gamma_q(0.5 * df, 0.5 * x);
}

double log_multinomial_pmf(std::span<const std::int64_t> counts,
                           std::span<const double> probs,
                           bool include_coefficient) {
  if (counts.size() != probs.size())
    throw std::invalid_argument("log_multinomial_pmf: size mismatch");
  double psum = 0.0;
  for (double p : probs) {
    if (p < 0.0)
      throw std::invalid_argument("log_multinomial_pmf: negative probability");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-9)
    throw std::invalid_argument("log_multinomial_pmf: probs must sum to 1");

  std::int64_t n = 0;
  double log_term = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::int64_t c = counts[i];
    if (c < 0)
      throw std::invalid_argument("log_multinomial_pmf: negative count");
    if (c == 0) continue;
    n += c;
    if (probs[i] == 0.0) return -std::numeric_limits<double>::infinity();
    log_term += static_cast<double>(c) * std::log(probs[i]);
  }
  if (!include_coefficient) return log_term;

  double log_coef = ln_gamma(static_cast<double>(n) + 1.0);
  for (const std::int64_t c : counts) {
    if (c > 1) log_coef -= ln_gamma(static_cast<double>(c) + 1.0);
  }
  return log_coef + log_term;
}

std::int64_t sample_poisson(RngStream& stream, double mu) {
  if (!(mu > 0.0)) throw std::domain_error("sample_poisson: mu must be > 0");
  if (mu > 30.0) {
    // Split by Poisson additivity; keeps the product method in range.
    const double half = 0.5 * mu;
    return sample_poisson(stream, half) + sample_poisson(stream, mu - half);
  }
  const double limit = std::exp(-mu);
  std::int64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= stream.next_double();
  } while (p > limit);
  return k - 1;
}

std::vector<std::int64_t> sample_multinomial(RngStream& stream, std::int64_t n,
                                             std::span<const double> probs) {
  if (n < 0) throw std::domain_error("sample_multinomial: n must be >= 0");
  double psum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0))
      throw std::invalid_argument(
          "sample_multinomial: probs must be strictly positive");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-9)
    throw std::invalid_argument("sample_multinomial: probs must sum to 1");

  std::vector<double> cum(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cum[i] = acc;
  }
  std::vector<std::int64_t> counts(probs.size(), 0);
  for (std::int64_t t = 0; t < n; ++t) {
    const double u = stream.next_double() * acc;
    std::size_t lo = 0, hi = cum.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (u < cum[mid])
        hi = mid;
      else
        lo = mid + 1;
    }
    ++counts[lo];
  }
  return counts;
}

LogisticFit fit_logistic(std::span<const double> x, std::span<const int> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("fit_logistic: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("fit_logistic: need >= 2 rows");
  double xmin = x[0], xmax = x[0];
  for (double v : x) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  if (xmin == xmax) throw std::invalid_argument("degenerate design");

  LogisticFit fit;
  const std::size_t n = x.size();
  for (int iter = 1; iter <= 100; ++iter) {
    fit.iterations = iter;
    double g0 = 0.0, g1 = 0.0, h00 = 0.0, h01 = 0.0, h11 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double eta = fit.intercept + fit.slope * x[i];
      const double p = 1.0 / (1.0 + std::exp(-eta));
      const double r = static_cast<double>(y[i]) - p;
      const double w = p * (1.0 - p);
      g0 += r;
      g1 += r * x[i];
      h00 += w;
      h01 += w * x[i];
      h11 += w * x[i] * x[i];
    }
    const double det = h00 * h11 - h01 * h01;
    if (det <= 0.0 || !std::isfinite(det)) {
      fit.separation_detected = true;
      return fit;
    }
    const double step0 = (h11 * g0 - h01 * g1) / det;
    const double step1 = (h00 * g1 - h01 * g0) / det;
    fit.intercept += step0;
    fit.slope += step1;
    if (std::abs(fit.intercept) > 50.0 || std::abs(fit.slope) > 50.0) {
      fit.separation_detected = true;
      return fit;
    }
    if (std::max(std::abs(step0), std::abs(step1)) < 1e-10) {
      fit.converged = true;
      fit.intercept_se = std::sqrt(h11 / det);
      fit.slope_se = std::sqrt(h00 / det);
      return fit;
    }
  }
  return fit;
}

double predict_accuracy(const LogisticFit& fit, double size) {
  if (!fit.converged)
    throw std::invalid_argument("predict_accuracy: fit did not converge");
  const double eta = fit.intercept + fit.slope * size;
  return 1.0 / (1.0 + std::exp(-eta));
}

}  // namespace isoscribe

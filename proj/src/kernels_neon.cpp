// NEON kernel variants for aarch64.
#if defined(__aarch64__)

#include <arm_neon.h>

#include "isoscribe/kernels.hpp"

namespace isoscribe::kernels::neon {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double result = vaddvq_f64(acc);
  for (; i < n; ++i) result += a[i] * b[i];
  return result;
}

double sym_kl_neon(const double* q1, const double* lq1, const double* q2,
                   const double* lq2, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t dq = vsubq_f64(vld1q_f64(q1 + i), vld1q_f64(q2 + i));
    float64x2_t dl = vsubq_f64(vld1q_f64(lq1 + i), vld1q_f64(lq2 + i));
    acc = vfmaq_f64(acc, dq, dl);
  }
  double result = vaddvq_f64(acc);
  for (; i < n; ++i) result += (q1[i] - q2[i]) * (lq1[i] - lq2[i]);
  return 0.5 * result;
}

double chi2_two_row_neon(const double* r1, const double* r2, std::size_t k,
                         double n1, double n2) {
  const double total = n1 + n2;
  const double f1s = n1 / total;
  const double f2s = n2 / total;
  const float64x2_t f1 = vdupq_n_f64(f1s);
  const float64x2_t f2 = vdupq_n_f64(f2s);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= k; j += 2) {
    float64x2_t a = vld1q_f64(r1 + j);
    float64x2_t b = vld1q_f64(r2 + j);
    float64x2_t col = vaddq_f64(a, b);
    float64x2_t e1 = vmulq_f64(f1, col);
    float64x2_t e2 = vmulq_f64(f2, col);
    float64x2_t d1 = vsubq_f64(a, e1);
    float64x2_t d2 = vsubq_f64(b, e2);
    acc = vaddq_f64(acc, vdivq_f64(vmulq_f64(d1, d1), e1));
    acc = vaddq_f64(acc, vdivq_f64(vmulq_f64(d2, d2), e2));
  }
  double result = vaddvq_f64(acc);
  for (; j < k; ++j) {
    const double col = r1[j] + r2[j];
    const double e1 = f1s * col;
    const double e2 = f2s * col;
    const double d1 = r1[j] - e1;
    const double d2 = r2[j] - e2;
    result += d1 * d1 / e1 + d2 * d2 / e2;
  }
  return result;
}

void smooth_neon(const double* counts, std::size_t n, double total,
                 double* out) {
  const double priors = 1.0 / static_cast<double>(n);
  const double scales = 1.0 / (total + 1.0);
  const float64x2_t prior = vdupq_n_f64(priors);
  const float64x2_t scale = vdupq_n_f64(scales);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t c = vld1q_f64(counts + i);
    vst1q_f64(out + i, vmulq_f64(vaddq_f64(c, prior), scale));
  }
  for (; i < n; ++i) out[i] = (counts[i] + priors) * scales;
}

}  // namespace

extern const Ops ops;
const Ops ops = {dot_neon, sym_kl_neon, chi2_two_row_neon, smooth_neon};

}  // namespace isoscribe::kernels::neon

#endif  // __aarch64__

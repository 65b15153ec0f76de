// AVX2 kernel variants. Compiled with -mavx2; only dispatched to when the
// CPU reports AVX2 support (see kernels.cpp).
#if defined(__x86_64__)

#include <immintrin.h>

#include "isoscribe/kernels.hpp"

namespace isoscribe::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double result = hsum(acc);
  for (; i < n; ++i) result += a[i] * b[i];
  return result;
}

double sym_kl_avx2(const double* q1, const double* lq1, const double* q2,
                   const double* lq2, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d dq = _mm256_sub_pd(_mm256_loadu_pd(q1 + i), _mm256_loadu_pd(q2 + i));
    __m256d dl =
        _mm256_sub_pd(_mm256_loadu_pd(lq1 + i), _mm256_loadu_pd(lq2 + i));
    acc = _mm256_fmadd_pd(dq, dl, acc);
  }
  double result = hsum(acc);
  for (; i < n; ++i) result += (q1[i] - q2[i]) * (lq1[i] - lq2[i]);
  return 0.5 * result;
}

double chi2_two_row_avx2(const double* r1, const double* r2, std::size_t k,
                         double n1, double n2) {
  const double total = n1 + n2;
  const double f1s = n1 / total;
  const double f2s = n2 / total;
  const __m256d f1 = _mm256_set1_pd(f1s);
  const __m256d f2 = _mm256_set1_pd(f2s);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= k; j += 4) {
    __m256d a = _mm256_loadu_pd(r1 + j);
    __m256d b = _mm256_loadu_pd(r2 + j);
    __m256d col = _mm256_add_pd(a, b);
    __m256d e1 = _mm256_mul_pd(f1, col);
    __m256d e2 = _mm256_mul_pd(f2, col);
    __m256d d1 = _mm256_sub_pd(a, e1);
    __m256d d2 = _mm256_sub_pd(b, e2);
    acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_mul_pd(d1, d1), e1));
    acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_mul_pd(d2, d2), e2));
  }
  double result = hsum(acc);
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

void smooth_avx2(const double* counts, std::size_t n, double total,
                 double* out) {
  const double priors = 1.0 / static_cast<double>(n);
  const double scales = 1.0 / (total + 1.0);
  const __m256d prior = _mm256_set1_pd(priors);
  const __m256d scale = _mm256_set1_pd(scales);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d c = _mm256_loadu_pd(counts + i);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_add_pd(c, prior), scale));
  }
  for (; i < n; ++i) out[i] = (counts[i] + priors) * scales;
}

}  // namespace

extern const Ops ops;
const Ops ops = {dot_avx2, sym_kl_avx2, chi2_two_row_avx2, smooth_avx2};

}  // namespace isoscribe::kernels::avx2

#endif  // __x86_64__

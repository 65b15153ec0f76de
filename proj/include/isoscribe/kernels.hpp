#pragma once

#include <cstddef>
#include <string>

namespace isoscribe::kernels {

// Dense inner-loop kernels used by the classifiers. Each kernel has a scalar
// reference implementation plus SIMD variants (AVX2 on x86-64, NEON on
// aarch64) selected at runtime. The SIMD variants must agree with the scalar
// reference to within floating-point reassociation error; the test suite
// checks equivalence on random inputs.
struct Ops {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // Symmetric Kullback-Leibler distance with precomputed logs:
  //   0.5 * sum_i (q1[i] - q2[i]) * (lq1[i] - lq2[i])
  // which equals 0.5 * sum_i [q2 ln(q2/q1) + q1 ln(q1/q2)].
  double (*sym_kl)(const double* q1, const double* lq1, const double* q2,
                   const double* lq2, std::size_t n);

  // Pearson statistic for a 2 x k table with rows r1, r2 and row totals
  // n1 = sum r1, n2 = sum r2. Caller guarantees every column total is
  // positive and n1, n2 > 0.
  double (*chi2_two_row)(const double* r1, const double* r2, std::size_t k,
                         double n1, double n2);

  // out[i] = (counts[i] + 1/n) / (total + 1)
  void (*smooth)(const double* counts, std::size_t n, double total,
                 double* out);
};

enum class Backend { Scalar, Avx2, Neon };

// Kernel set for the best backend this CPU supports (or the one forced via
// set_backend).
const Ops& active();
Backend active_backend();
std::string backend_name(Backend b);

// Force a backend; throws std::runtime_error if unsupported on this CPU.
// Intended for tests and benchmarking.
void set_backend(Backend b);

bool backend_supported(Backend b);

const Ops& scalar_ops();

}  // namespace isoscribe::kernels

#include "isoscribe/kernels.hpp"

#include <stdexcept>

namespace isoscribe::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sym_kl_scalar(const double* q1, const double* lq1, const double* q2,
                     const double* lq2, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (q1[i] - q2[i]) * (lq1[i] - lq2[i]);
  return 0.5 * acc;
}

double chi2_two_row_scalar(const double* r1, const double* r2, std::size_t k,
                           double n1, double n2) {
  const double total = n1 + n2;
  const double f1 = n1 / total;
  const double f2 = n2 / total;
  double acc = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double col = r1[j] + r2[j];
    const double e1 = f1 * col;
    const double e2 = f2 * col;
    const double d1 = r1[j] - e1;
    const double d2 = r2[j] - e2;
    acc += d1 * d1 / e1 + d2 * d2 / e2;
  }
  return acc;
}

void smooth_scalar(const double* counts, std::size_t n, double total,
                   double* out) {
  const double prior = 1.0 / static_cast<double>(n);
  const double scale = 1.0 / (total + 1.0);
  for (std::size_t i = 0; i < n; ++i) out[i] = (counts[i] + prior) * scale;
}

constexpr Ops kScalarOps = {dot_scalar, sym_kl_scalar, chi2_two_row_scalar,
                            smooth_scalar};

Backend g_backend = [] {
  if (backend_supported(Backend::Avx2)) return Backend::Avx2;
  if (backend_supported(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}();

}  // namespace

#if defined(__x86_64__)
namespace avx2 {
extern const Ops ops;
}
#endif
#if defined(__aarch64__)
namespace neon {
extern const Ops ops;
}
#endif

const Ops& scalar_ops() { return kScalarOps; }

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(__x86_64__)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Ops& active() {
  switch (g_backend) {
#if defined(__x86_64__)
    case Backend::Avx2:
      return avx2::ops;
#endif
#if defined(__aarch64__)
    case Backend::Neon:
      return neon::ops;
#endif
    default:
      return kScalarOps;
  }
}

Backend active_backend() { return g_backend; }

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw std::runtime_error("kernel backend not supported on this CPU: " +
                             backend_name(b));
  g_backend = b;
}

}  // namespace isoscribe::kernels

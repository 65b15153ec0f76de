#include <doctest.h>

#include <cmath>
#include <vector>

#include "isoscribe/kernels.hpp"
#include "isoscribe/rng.hpp"

using namespace isoscribe;
using kernels::Backend;

namespace {

std::vector<double> random_vector(RngStream& s, std::size_t n, double lo,
                                  double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * s.next_double();
  return v;
}

std::vector<Backend> supported_backends() {
  std::vector<Backend> out = {Backend::Scalar};
  if (kernels::backend_supported(Backend::Avx2)) out.push_back(Backend::Avx2);
  if (kernels::backend_supported(Backend::Neon)) out.push_back(Backend::Neon);
  return out;
}

}  // namespace

TEST_CASE("scalar dot matches straightforward sum") {
  const auto& ops = kernels::scalar_ops();
  const std::vector<double> a = {1, 2, 3};
  const std::vector<double> b = {4, 5, 6};
  CHECK(ops.dot(a.data(), b.data(), 3) == doctest::Approx(32.0));
  CHECK(ops.dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("scalar sym_kl equals direct formula") {
  const auto& ops = kernels::scalar_ops();
  const std::vector<double> q1 = {0.5, 0.5}, q2 = {0.25, 0.75};
  std::vector<double> l1(2), l2(2);
  for (int i = 0; i < 2; ++i) {
    l1[i] = std::log(q1[i]);
    l2[i] = std::log(q2[i]);
  }
  double direct = 0.0;
  for (int i = 0; i < 2; ++i)
    direct += q2[i] * std::log(q2[i] / q1[i]) + q1[i] * std::log(q1[i] / q2[i]);
  direct *= 0.5;
  CHECK(ops.sym_kl(q1.data(), l1.data(), q2.data(), l2.data(), 2) ==
        doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("scalar chi2_two_row hand cases") {
  const auto& ops = kernels::scalar_ops();
  {
    const std::vector<double> r1 = {2, 2}, r2 = {2, 2};
    CHECK(ops.chi2_two_row(r1.data(), r2.data(), 2, 4, 4) ==
          doctest::Approx(0.0));
  }
  {
    // Expected count 5 everywhere, each cell contributes 25/5.
    const std::vector<double> r1 = {10, 0}, r2 = {0, 10};
    CHECK(ops.chi2_two_row(r1.data(), r2.data(), 2, 10, 10) ==
          doctest::Approx(20.0));
  }
}

TEST_CASE("scalar smooth matches closed form") {
  const auto& ops = kernels::scalar_ops();
  const std::vector<double> counts = {3, 1, 0, 0};
  std::vector<double> out(4);
  ops.smooth(counts.data(), 4, 4.0, out.data());
  CHECK(out[0] == doctest::Approx(0.65));
  CHECK(out[1] == doctest::Approx(0.25));
  CHECK(out[2] == doctest::Approx(0.05));
  CHECK(out[3] == doctest::Approx(0.05));
}

TEST_CASE("SIMD variants agree with the scalar reference") {
  const auto& ref = kernels::scalar_ops();
  const Backend original = kernels::active_backend();
  RngStream s(99, "kernel-equivalence");

  for (const Backend backend : supported_backends()) {
    kernels::set_backend(backend);
    const auto& ops = kernels::active();
    CAPTURE(kernels::backend_name(backend));

    // Odd lengths exercise the remainder loops.
    for (const std::size_t n : {1u, 2u, 3u, 4u, 7u, 8u, 17u, 68u, 129u}) {
      const auto a = random_vector(s, n, -2.0, 2.0);
      const auto b = random_vector(s, n, -2.0, 2.0);
      CHECK(ops.dot(a.data(), b.data(), n) ==
            doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(1e-12));

      auto q1 = random_vector(s, n, 0.01, 1.0);
      auto q2 = random_vector(s, n, 0.01, 1.0);
      std::vector<double> l1(n), l2(n);
      for (std::size_t i = 0; i < n; ++i) {
        l1[i] = std::log(q1[i]);
        l2[i] = std::log(q2[i]);
      }
      CHECK(ops.sym_kl(q1.data(), l1.data(), q2.data(), l2.data(), n) ==
            doctest::Approx(
                ref.sym_kl(q1.data(), l1.data(), q2.data(), l2.data(), n))
                .epsilon(1e-12));

      // Rows with positive column totals.
      auto r1 = random_vector(s, n, 0.0, 20.0);
      auto r2 = random_vector(s, n, 1.0, 20.0);
      double n1 = 0, n2 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        r1[i] = std::floor(r1[i]);
        r2[i] = std::floor(r2[i]);
        n1 += r1[i];
        n2 += r2[i];
      }
      if (n1 > 0 && n2 > 0) {
        CHECK(ops.chi2_two_row(r1.data(), r2.data(), n, n1, n2) ==
              doctest::Approx(ref.chi2_two_row(r1.data(), r2.data(), n, n1, n2))
                  .epsilon(1e-12));
      }

      std::vector<double> out_ref(n), out_var(n);
      ref.smooth(r1.data(), n, n1, out_ref.data());
      ops.smooth(r1.data(), n, n1, out_var.data());
      for (std::size_t i = 0; i < n; ++i)
        CHECK(out_var[i] == doctest::Approx(out_ref[i]).epsilon(1e-14));
    }
  }
  kernels::set_backend(original);
}

TEST_CASE("forcing an unsupported backend throws") {
#if !defined(__aarch64__)
  CHECK_THROWS(kernels::set_backend(Backend::Neon));
#else
  CHECK_THROWS(kernels::set_backend(Backend::Avx2));
#endif
}

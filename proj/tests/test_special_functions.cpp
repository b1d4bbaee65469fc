#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "wtoda/special_functions.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <numbers>

using namespace wtoda;
using std::numbers::pi;

TEST_CASE("Gamma against mpmath") {
  for (const auto& r : oracle::kGamma) {
    const Complex z(r.re, r.im);
    const ComplexValue g = gamma(z), lg = log_gamma(z);
    CHECK_FALSE(g.pole);
    CHECK(std::abs(g.value - Complex(r.g_re, r.g_im)) <= 1e-13 * std::abs(Complex(r.g_re, r.g_im)));
    // principal branch: equal to the continued log Gamma modulo 2 pi i
    CHECK(std::abs(lg.value.real() - r.lg_re) <= 1e-12 * std::max(1.0, std::abs(r.lg_re)));
    const double turns = (r.lg_im - lg.value.imag()) / (2.0 * pi);
    CHECK(std::abs(turns - std::round(turns)) <= 1e-12 * std::max(1.0, std::abs(r.lg_im)));
    CHECK(lg.value.imag() > -pi);
    CHECK(lg.value.imag() <= pi);
  }
}

TEST_CASE("Gamma identities on vertical lines") {
  for (double y : {0.1, 1.0, 4.0, 15.0}) {
    // |Gamma(iy)|^2 = pi / (y sinh(pi y)), |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
    const double a = std::norm(gamma(Complex(0.0, y)).value);
    CHECK(a == doctest::Approx(pi / (y * std::sinh(pi * y))).epsilon(1e-12));
    const double b = std::norm(gamma(Complex(0.5, y)).value);
    CHECK(b == doctest::Approx(pi / std::cosh(pi * y)).epsilon(1e-12));
  }
  for (int k = 0; k <= 4; ++k) CHECK(gamma(Complex(-k, 0.0)).pole);
  // real axis agrees with std::tgamma
  for (double x : {0.1, 0.7, 1.5, 3.3, 7.9, -0.5, -2.3})
    CHECK(gamma(Complex(x, 0.0)).value.real() == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
}

TEST_CASE("Beta against Boost") {
  for (auto [a, b] : {std::pair{0.5, 1.3}, std::pair{2.0, 3.5}, std::pair{0.5, 0.1}}) {
    CHECK(beta(Complex(a, 0.0), Complex(b, 0.0)).value.real() ==
          doctest::Approx(boost::math::beta(a, b)).epsilon(1e-13));
  }
  CHECK(beta(Complex(0.5, 0.0), Complex(-1.0, 0.0)).pole);
  // B(1/2, -s) for s = i t: B(1/2, x) = Gamma(1/2) Gamma(x) / Gamma(x + 1/2)
  const Complex x(0.0, -1.7);
  const Complex direct = gamma(Complex(0.5, 0.0)).value * gamma(x).value / gamma(x + 0.5).value;
  CHECK(std::abs(beta(Complex(0.5, 0.0), x).value - direct) < 1e-13 * std::abs(direct));
}

TEST_CASE("K_{i mu} against mpmath and the real-axis integral") {
  for (const auto& r : oracle::kBessel) {
    const double v = bessel_k_imaginary_order(r.mu, r.x);
    CHECK(std::abs(v - r.value) <= 1e-10 * std::abs(r.value));
  }
  for (double mu : {0.0, 0.3, 1.0, 2.5, 4.0})
    for (double x : {0.2, 1.0, 3.0, 8.0}) {
      const double ref = oracle::bessel_k_imag(mu, x);
      CHECK(std::abs(bessel_k_imaginary_order(mu, x) - ref) <= 1e-10 * std::abs(ref) + 1e-15);
    }
  // scaled form
  CHECK(bessel_k_imaginary_order_scaled(2.0, 40.0) ==
        doctest::Approx(std::exp(40.0) * oracle::bessel_k_imag(2.0, 40.0)).epsilon(1e-9));
  // continuity in mu: K_{i 1e-8}(2) = K_0(2)
  CHECK(bessel_k_imaginary_order(1e-8, 2.0) == doctest::Approx(std::cyl_bessel_k(0.0, 2.0)).epsilon(1e-12));
}

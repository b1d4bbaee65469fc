#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wtoda/plancherel.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <numbers>
#include <random>

using namespace wtoda;
using std::numbers::pi;

TEST_CASE("A1 factor is a real Beta value in the convergence region") {
  const RootSystem rs = build_root_system(2, Variant::SL);
  for (double p : {-0.3, -1.0, -2.5, -7.0}) {
    const Eigen::Vector2cd nu(p / 2.0, -p / 2.0);  // (nu, alpha) = p, s = p / 2
    const ComplexValue c = c_function(rs, nu);
    CHECK(c.value.real() == doctest::Approx(boost::math::beta(0.5, -p / 2.0)).epsilon(1e-13));
    CHECK(std::abs(c.value.imag()) < 1e-15);
    CHECK(std::abs(std::exp(log_c_function(rs, nu).value) - c.value) < 1e-13 * std::abs(c.value));
  }
  // B(1/2, -s) has poles at s = 0, 1, 2, ...
  CHECK(c_function(rs, Eigen::Vector2cd(0.0, 0.0)).pole);
  CHECK(c_function(rs, Eigen::Vector2cd(1.0, -1.0)).pole);
}

TEST_CASE("A2 c-function factorizes over the three positive roots") {
  const RootSystem rs = build_root_system(3, Variant::SL);
  const Eigen::Vector3cd nu(Complex(-1.1, 0.3), Complex(0.2, -0.5), Complex(0.9, 0.2));
  Complex product{1.0, 0.0};
  for (std::size_t k = 0; k < 3; ++k) {
    const Complex s = dual_inner(nu, rs.root(k).cast<Complex>()) / 2.0;
    product *= beta(Complex(0.5, 0.0), -s).value;
    CHECK(std::abs(c_alpha(rs, k, nu).value - beta(Complex(0.5, 0.0), -s).value) < 1e-13);
  }
  CHECK(std::abs(c_function(rs, nu).value - product) < 1e-12 * std::abs(product));
}

TEST_CASE("mu closed form") {
  // |B(1/2, i s)|^2 = pi / (s tanh(pi s)), so mu = C prod s tanh(pi s) / pi
  for (int n : {2, 3}) {
    const RootSystem rs = build_root_system(n, Variant::SL);
    const PlancherelDensity pd{rs, 2.5};
    const Eigen::MatrixXd b = rs.orthonormal_basis();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd eta(n - 1);
      for (int d = 0; d < n - 1; ++d) eta(d) = u(rng);
      const DualVector nu = b * eta;
      double expected = 2.5;
      for (std::size_t k = 0; k < rs.positive_roots.size(); ++k) {
        const double s = dual_inner(nu, rs.root(k)) / 2.0;
        expected *= s * std::tanh(pi * s) / pi;
      }
      CHECK(mu_density(pd, nu).value == doctest::Approx(expected).epsilon(1e-11));
      CHECK(mu_density(pd, -nu).value == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(mu_density(pd, DualVector::Zero(n)).value == 0.0);
    CHECK(mu_density(pd, DualVector::Zero(n)).at_pole);
  }
}

TEST_CASE("calibration constants and the polynomial bound") {
  CHECK(rank_one_calibration() == doctest::Approx(1.0 / (4.0 * pi)));
  CHECK(closed_form_calibration(build_root_system(2, Variant::SL)) == doctest::Approx(1.0 / (4.0 * pi)));
  CHECK(closed_form_calibration(build_root_system(3, Variant::SL)) == doctest::Approx(1.0 / (24.0 * pi * pi)));
  for (int n : {2, 3}) {
    const RootSystem rs = build_root_system(n, Variant::SL);
    const PlancherelDensity pd{rs, 1.0};
    const Eigen::MatrixXd b = rs.orthonormal_basis();
    std::vector<DualVector> samples;
    for (int i = 1; i <= 200; ++i) {
      Eigen::VectorXd eta = Eigen::VectorXd::Constant(n - 1, 0.0);
      eta(0) = 0.25 * i;
      if (n == 3) eta(1) = 0.61 * i;
      samples.push_back(b * eta);
    }
    const PolynomialBound fit = fit_polynomial_bound(pd, samples);
    // degree of prod s tanh(pi s): one per positive root
    CHECK(fit.exponent == doctest::Approx(n == 2 ? 1.0 : 3.0).epsilon(0.1));
    for (const auto& nu : samples) CHECK(mu_density(pd, nu).value <= fit.constant * std::pow(1.0 + nu.norm(), fit.exponent) * (1 + 1e-12));
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "wtoda/special_functions.hpp"
#include "wtoda/whittaker.hpp"

#include <numbers>

using namespace wtoda;
using std::numbers::pi;

namespace {
const RootSystem kA1 = build_root_system(2, Variant::SL);
const RootSystem kA2 = build_root_system(3, Variant::SL);

ClassOneOptions fast() {
  ClassOneOptions o;
  o.compute_residual = false;
  return o;
}
}  // namespace

TEST_CASE("series coefficients obey the recursion (A1, by hand)") {
  // lambda = i nu; a_m (8 m^2 + 4 m (lambda, alpha)) = 2 q a_{m-1}
  const Eigen::Vector2cd lambda = Eigen::Vector2cd(0.8, -0.8) * Complex(0.0, 1.0);
  const double q = 0.7;
  const SeriesSolution s = build_series(kA1, lambda, {q}, 12);
  const Complex la = dual_inner(lambda, kA1.root(0).cast<Complex>());
  Complex a{1.0, 0.0};
  for (int m = 1; m <= 12; ++m) {
    a *= 2.0 * q / (8.0 * m * m + 4.0 * m * la);
    CHECK(std::abs(s.coefficients[s.position({m})] - a) <= 1e-14 * std::abs(a));
  }
  CHECK(std::abs(s.coefficients[0] - 1.0) == 0.0);
}

TEST_CASE("A1 closed form against the Bessel integral") {
  const double q = 0.5;
  const Eigen::MatrixXd b = kA1.orthonormal_basis();
  for (double eta : {0.4, 1.5, 3.0}) {
    const WhittakerEvaluator k = class_one(kA1, b.col(0) * eta, {q}, fast());
    const double s = eta / std::sqrt(2.0);  // (nu, alpha) / (alpha, alpha)
    for (double y : {-1.0, 0.0, 0.8}) {
      const Eigen::VectorXd h = b.col(0) * y;
      const double z = std::sqrt(q) * std::exp(std::sqrt(2.0) * y);
      const double ref = 2.0 * std::sqrt(std::cosh(pi * s)) * oracle::bessel_k_imag(s, z);
      const Complex v = k(h);
      CHECK(v.real() == doctest::Approx(ref).epsilon(1e-9));
      CHECK(std::abs(v.imag()) < 1e-14 * std::abs(ref) + 1e-300);
      CHECK(whittaker_rank1(eta, q, y) == doctest::Approx(oracle::bessel_k_imag(s, z)).epsilon(1e-9));
    }
  }
}

TEST_CASE("A1 series combination reproduces the closed form") {
  const Eigen::MatrixXd b = kA1.orthonormal_basis();
  ClassOneOptions series = fast();
  series.method = WhittakerMethod::SeriesClassOne;
  for (double eta : {0.7, 2.2, 5.0}) {
    const WhittakerEvaluator closed = class_one(kA1, b.col(0) * eta, {1.0}, fast());
    const WhittakerEvaluator sum = class_one(kA1, b.col(0) * eta, {1.0}, series);
    for (double y : {-2.0, -1.0, 0.0, 0.5}) {
      const Complex a = closed(b.col(0) * y), c = sum(b.col(0) * y);
      CHECK(std::abs(a - c) <= 1e-8 * std::abs(a));
    }
  }
}

TEST_CASE("A2 class-one evaluator") {
  const Eigen::MatrixXd b = kA2.orthonormal_basis();
  ClassOneOptions opts;
  opts.verify_coefficients = true;
  const DualVector nu = b * Eigen::Vector2d(1.0, 2.0);
  const WhittakerEvaluator k = class_one(kA2, nu, {1.0, 1.0}, opts);
  CHECK(k.experimental());
  CHECK(k.eigenvalue() == doctest::Approx(0.5 * nu.squaredNorm()));
  CHECK(k.accuracy().eig_residual <= 1e-6);
  CHECK(k.accuracy().coefficient_mismatch <= 1e-6);
  // Weyl invariance
  const auto w = weyl_group(kA2);
  for (const auto& e : w) {
    const WhittakerEvaluator kw = class_one(kA2, e.apply(nu), {1.0, 1.0}, fast());
    for (const auto& y : {Eigen::Vector2d(-0.5, 0.3), Eigen::Vector2d(0.2, -1.0), Eigen::Vector2d(0.0, 0.0)}) {
      const Complex a = k(b * y), c = kw(b * y);
      CHECK(std::abs(a - c) <= 1e-8 * std::abs(a));
    }
  }
  // conj K(h) = K(-w0 h); real on the fixed line alpha_1(h) = alpha_2(h)
  for (const auto& y : {Eigen::Vector2d(-0.5, 0.3), Eigen::Vector2d(0.2, -1.0), Eigen::Vector2d(-1.0, -1.0)}) {
    const Eigen::Vector3d h = b * y;
    const Eigen::Vector3d hs(-h(2), -h(1), -h(0));
    const Complex a = k(h), c = k(hs);
    CHECK(std::abs(a - std::conj(c)) <= 1e-10 * std::abs(a));
  }
  for (double t : {-1.5, -0.4, 0.7}) {
    const Eigen::Vector3d h(t, 0.0, -t);
    const Complex a = k(h);
    CHECK(std::abs(a.imag()) <= 1e-10 * std::abs(a));
  }
}

TEST_CASE("refusals") {
  const Eigen::MatrixXd b = kA2.orthonormal_basis();
  // on the wall (nu, alpha_1) = 0
  const DualVector wall = Eigen::Vector3d(1.0, 1.0, -2.0) / 3.0;
  CHECK_THROWS_AS(class_one(kA2, wall, {1.0, 1.0}, fast()), Refusal);
  CHECK_THROWS_AS(class_one(kA2, b * Eigen::Vector2d(1.0, 2.0), {0.0, 1.0}, fast()), Refusal);
  CHECK_THROWS_AS(class_one(build_root_system(4, Variant::SL), Eigen::Vector4d(3, 1, -1, -3), {1, 1, 1}, fast()),
                  Refusal);
  CHECK_THROWS_AS(couplings_from_character(CharacterData{{1.0, 0.0}}), Refusal);
  CHECK(couplings_from_character(CharacterData{{0.5, -2.0}}) == std::vector<double>{0.25, 4.0});
}

TEST_CASE("Jacquet integral is proportional to the decaying series (A1)") {
  CharacterData chi{{1.0}};
  OracleQuadrature q;
  q.nodes_per_dim = 257;
  const DualVector nu = Eigen::Vector2d(-1.65, 1.65);
  const WhittakerEvaluator j = jacquet_evaluator(kA1, chi, nu, q);
  const WhittakerEvaluator s = decaying_series(kA1, nu, {1.0});
  const Eigen::MatrixXd b = kA1.orthonormal_basis();
  std::vector<Complex> r;
  for (double y : {-2.5, -2.0, -1.5, -1.0}) r.push_back(j(b.col(0) * y) / s(b.col(0) * y));
  for (const auto& x : r) CHECK(std::abs(x - r[0]) <= 1e-6 * std::abs(r[0]));
}

TEST_CASE("decay-matching coefficients agree with the Gamma closed form") {
  const Eigen::MatrixXd b = kA1.orthonormal_basis();
  const DualVector nu = b.col(0) * 1.3;
  const std::vector<Complex> ratios = decaying_combination(kA1, nu, {1.0}, 60);
  REQUIRE(ratios.size() == 2);
  // G(-lambda)/G(lambda) for lambda = i nu with alpha(h0) = log(1/2)
  const Complex la = Complex(0.0, 1.0) * dual_inner(nu, kA1.root(0));
  const Complex g_plus = gamma(-la / 2.0).value * std::exp(la / 2.0 * std::log(0.5));
  const Complex g_minus = gamma(la / 2.0).value * std::exp(-la / 2.0 * std::log(0.5));
  CHECK(std::abs(ratios[1] - g_minus / g_plus) < 1e-6 * std::abs(g_minus / g_plus));
  CHECK(coefficient_gap({1.0, g_minus / g_plus}, ratios) < 1e-6);
}

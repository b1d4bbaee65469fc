#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "wtoda/matrix_groups.hpp"
#include "wtoda/plancherel.hpp"

#include <numbers>

using namespace wtoda;

TEST_CASE("Iwasawa factors reconstruct g") {
  std::mt19937_64 rng(7);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd g = random_sl(n, rng);
      CHECK(g.determinant() == doctest::Approx(1.0).epsilon(1e-12));
      const IwasawaNbarAK f = iwasawa_nbar_ak(g);
      CHECK((f.nbar * f.a.asDiagonal() * f.k - g).norm() < 1e-12 * g.norm());
      CHECK((f.k * f.k.transpose() - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-12);
      CHECK(f.nbar.isLowerTriangular(1e-14));
      CHECK((f.nbar.diagonal().array() - 1.0).abs().maxCoeff() < 1e-13);
      CHECK(f.a.minCoeff() > 0.0);
      const IwasawaNAK u = iwasawa_nak(g);
      CHECK((u.n * u.a.asDiagonal() * u.k - g).norm() < 1e-12 * g.norm());
      CHECK(u.n.isUpperTriangular(1e-14));
    }
  }
  CHECK_THROWS_AS(iwasawa_nbar_ak(Eigen::MatrixXd::Zero(2, 2)), SingularMatrix);
  CHECK_THROWS(GroupElement::make(Eigen::MatrixXd::Identity(2, 2) * 2.0, GroupTag::SL));
}

TEST_CASE("log a of unipotent elements matches the QR route") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (int n : {2, 3, 4}) {
    const int m = n * (n - 1) / 2;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x(static_cast<std::size_t>(m));
      for (auto& v : x) v = normal(rng);
      Eigen::MatrixXd u = Eigen::MatrixXd::Identity(n, n);
      int k = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) u(i, j) = x[static_cast<std::size_t>(k++)];
      std::vector<double> log_a(static_cast<std::size_t>(n));
      log_a_of_unipotent(n, x.data(), log_a.data());
      const Eigen::VectorXd ref = iwasawa_nbar_ak(u).a.array().log();
      for (int i = 0; i < n; ++i) CHECK(log_a[static_cast<std::size_t>(i)] == doctest::Approx(ref(i)).epsilon(1e-10));
    }
  }
}

TEST_CASE("rho from the adjoint action and the norms") {
  for (int n : {2, 3, 4}) {
    const RootSystem rs = build_root_system(n, Variant::SL);
    CHECK((rho_from_adjoint(rs) - rs.rho).norm() < 1e-14);
  }
  // |diag(e^t, e^-t)| = e^{2|t|}
  Eigen::Matrix2d g = Eigen::Vector2d(std::exp(0.7), std::exp(-0.7)).asDiagonal();
  CHECK(norm_bars(g) == doctest::Approx(std::exp(1.4)).epsilon(1e-12));
  CHECK(norm_doublebar(g) == doctest::Approx(std::exp(0.7)).epsilon(1e-12));
  CHECK(norm_bars(Eigen::Matrix3d::Identity()) == doctest::Approx(1.0));
}

TEST_CASE("c-function quadrature, SL(2), against a direct line integral") {
  const RootSystem rs = build_root_system(2, Variant::SL);
  OracleQuadrature q;
  for (double p : {-1.3, -2.0, -3.5}) {
    const DualVector nu = Eigen::Vector2d(p / 2.0, -p / 2.0);
    const Eigen::VectorXd shift = nu - rs.rho;
    auto f = [&](double x) {
      Eigen::Matrix2d n;
      n << 1.0, x, 0.0, 1.0;
      // a from |diag R| of n^T = Q R, valid for any x
      const Eigen::Matrix2d r = Eigen::HouseholderQR<Eigen::Matrix2d>(n.transpose()).matrixQR();
      return std::exp(shift(0) * std::log(std::abs(r(0, 0))) + shift(1) * std::log(std::abs(r(1, 1))));
    };
    const double ref = oracle::integrate(f, -std::numeric_limits<double>::infinity(),
                                         std::numeric_limits<double>::infinity());
    const QuadratureValue v = c_function_quadrature(rs, nu.cast<Complex>(), q);
    CHECK(v.value.real() == doctest::Approx(ref).epsilon(1e-9));
    CHECK(std::abs(v.value.imag()) < 1e-14);
    CHECK(v.value.real() == doctest::Approx(c_function(rs, nu.cast<Complex>()).value.real()).epsilon(1e-9));
  }
  CHECK_THROWS_AS(c_function_quadrature(rs, Eigen::Vector2cd(0.5, -0.5), q), Refusal);
}

TEST_CASE("Jacquet quadrature") {
  const RootSystem rs = build_root_system(2, Variant::SL);
  OracleQuadrature q;
  const Eigen::Vector2cd nu(-1.0, 1.0);  // nu = -2 rho
  CharacterData trivial{{0.0}};
  CHECK(std::abs(jacquet_quadrature(rs, trivial, nu, q).value - c_function(rs, nu).value) < 1e-8);
  CharacterData plus{{1.0}}, minus{{-1.0}};
  const Complex a = jacquet_quadrature(rs, plus, nu, q).value, b = jacquet_quadrature(rs, minus, nu, q).value;
  CHECK(std::isfinite(a.real()));
  CHECK(std::abs(a - std::conj(b)) < 1e-12);
  // int (1 + x^2)^{-v - 1/2} cos(x) dx = 2^{1-v} sqrt(pi) K_v(1) / Gamma(v + 1/2), here v = 1.65;
  // the oscillatory tail converges slowly, so the check is against the reported error
  q.nodes_per_dim = 257;
  const double v = 1.65;
  const QuadratureValue j = jacquet_quadrature(rs, plus, Eigen::Vector2cd(-v, v), q);
  const double ref = std::pow(2.0, 1.0 - v) * std::sqrt(std::numbers::pi) * std::cyl_bessel_k(v, 1.0) / std::tgamma(v + 0.5);
  CHECK(std::abs(j.value.real() - ref) <= j.error);
  CHECK(j.error < 1e-4 * ref);
}

TEST_CASE("rho growth inequality on random pairs") {
  for (int n : {2, 3}) {
    const RhoGrowthReport r = rho_growth_check(build_root_system(n, Variant::SL), 500, 3, 1e-10);
    CHECK(r.violations == 0);
    CHECK(r.max_ratio <= 1.0 + 1e-10);
    CHECK(r.max_ratio > 0.5);
  }
}

TEST_CASE("kernel probe") {
  const auto rows2 = beuzart_plessis_probe(build_root_system(2, Variant::SL), CharacterData{{1.0}}, 0.1, {1.0, 2.0});
  CHECK(rows2[1].partial == 1.0);
  const auto rows = beuzart_plessis_probe(build_root_system(3, Variant::SL), CharacterData{{1.0, 1.0}}, 0.5,
                                          {1.0, 2.0, 4.0});
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].partial > rows[0].partial);
  CHECK(rows[2].cauchy_diff == doctest::Approx(rows[2].partial - rows[1].partial));
  CHECK_THROWS_AS(beuzart_plessis_probe(build_root_system(3, Variant::SL), CharacterData{{0.0, 1.0}}, 0.1, {1.0}),
                  Refusal);
}

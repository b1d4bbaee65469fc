#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wtoda/core_algebra.hpp"

#include <set>

using namespace wtoda;

TEST_CASE("type A root data") {
  for (int n : {2, 3, 4}) {
    for (Variant v : {Variant::SL, Variant::GL}) {
      const RootSystem rs = build_root_system(n, v);
      CHECK(rs.positive_roots.size() == static_cast<std::size_t>(n * (n - 1) / 2));
      CHECK(rs.simple_roots.size() == static_cast<std::size_t>(n - 1));
      CHECK(rs.rank() == (v == Variant::GL ? n : n - 1));
      // rho = half the sum of positive roots, computed here by hand
      Eigen::VectorXd rho = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          rho(i) += 0.5;
          rho(j) -= 0.5;
        }
      CHECK((rs.rho - rho).norm() < 1e-14);
      for (std::size_t k = 0; k < rs.positive_roots.size(); ++k) {
        const Eigen::VectorXi back = rs.simple_coordinates[k];
        Eigen::VectorXi sum = Eigen::VectorXi::Zero(n);
        for (int i = 0; i + 1 < n; ++i) sum += back(i) * rs.simple_roots[static_cast<std::size_t>(i)];
        CHECK(sum == rs.positive_roots[k]);
      }
    }
  }
}

TEST_CASE("orthonormal basis") {
  for (int n : {2, 3}) {
    const RootSystem sl = build_root_system(n, Variant::SL);
    const Eigen::MatrixXd b = sl.orthonormal_basis();
    CHECK(b.cols() == n - 1);
    CHECK((b.transpose() * b - Eigen::MatrixXd::Identity(n - 1, n - 1)).norm() < 1e-14);
    CHECK(b.colwise().sum().norm() < 1e-14);
    const Eigen::MatrixXd g = build_root_system(n, Variant::GL).orthonormal_basis();
    CHECK((g - Eigen::MatrixXd::Identity(n, n)).norm() == 0.0);
  }
}

TEST_CASE("Weyl group of A2") {
  const RootSystem rs = build_root_system(3, Variant::SL);
  const auto w = weyl_group(rs);
  REQUIRE(w.size() == 6);
  CHECK(w.front().is_identity());
  std::set<std::vector<int>> perms;
  for (const auto& e : w) perms.insert(e.perm);
  CHECK(perms.size() == 6);
  // W permutes the roots and preserves the form
  Eigen::Vector3d lambda(0.7, -0.2, -0.5);
  std::multiset<int> kept;
  for (const auto& e : w) {
    CHECK(std::abs(dual_inner(e.apply(lambda), e.apply(lambda)) - dual_inner(lambda, lambda)) < 1e-14);
    int positive = 0;
    for (std::size_t k = 0; k < rs.positive_roots.size(); ++k) {
      const Eigen::VectorXd image = e.apply(rs.root(k));
      for (std::size_t j = 0; j < rs.positive_roots.size(); ++j) positive += (image - rs.root(j)).norm() < 1e-14;
    }
    kept.insert(positive);
  }
  // 3 - length(w) positive roots stay positive; lengths in S3 are 0,1,1,2,2,3
  CHECK(kept == std::multiset<int>{0, 1, 1, 2, 2, 3});
  // closure under composition
  for (const auto& a : w)
    for (const auto& b : w) CHECK(perms.count(a.compose(b).perm) == 1);
}

TEST_CASE("pairing and remove_trace") {
  Eigen::Vector3d lambda(1.0, 2.0, 3.0), h(0.5, -1.0, 0.25);
  CHECK(pairing(lambda, h) == doctest::Approx(0.5 - 2.0 + 0.75));
  CHECK(remove_trace(lambda).sum() == doctest::Approx(0.0));
  CHECK_THROWS_AS(pairing(Eigen::VectorXd(lambda), Eigen::VectorXd(Eigen::Vector2d(1.0, 1.0))), std::invalid_argument);
  CHECK_THROWS_AS(build_root_system(1, Variant::SL), std::invalid_argument);
  CHECK(variant_from_string(to_string(Variant::GL)) == Variant::GL);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wtoda/quadrature.hpp"

#include <numbers>

using namespace wtoda;

namespace {
double apply(const Rule& r, double (*f)(double)) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}
}  // namespace

TEST_CASE("Gauss-Legendre is exact for degree 2n-1") {
  const Rule r = gauss_legendre(6, 0.0, 2.0);
  CHECK(apply(r, [](double x) { return std::pow(x, 11); }) == doctest::Approx(std::pow(2.0, 12) / 12.0).epsilon(1e-13));
  const Rule c = composite_gauss_legendre(64, -1.0, 3.0);
  CHECK(apply(c, [](double x) { return std::exp(x); }) == doctest::Approx(std::exp(3.0) - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("tanh-sinh handles endpoint singularities") {
  const Rule r = tanh_sinh(129, 0.0, 1.0);
  // the cut at t_max = 3.2 leaves about 2 sqrt(1e-17) of the 1/sqrt(x) mass
  CHECK(apply(r, [](double x) { return 1.0 / std::sqrt(x); }) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(apply(r, [](double x) { return std::log(x); }) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("real-line rules") {
  for (RuleKind k : {RuleKind::TanhSinh, RuleKind::GaussLegendre}) {
    const Rule r = real_line_rule(k, 257, 1.0);
    CHECK(apply(r, [](double x) { return 1.0 / (1.0 + x * x); }) == doctest::Approx(std::numbers::pi).epsilon(1e-8));
    CHECK(apply(r, [](double x) { return std::exp(-x * x); }) ==
          doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
  }
  CHECK(rule_from_string(to_string(RuleKind::TanhSinh)) == RuleKind::TanhSinh);
  CHECK_THROWS(rule_from_string("simpson"));
}

TEST_CASE("coarsen keeps every other node") {
  const Rule r = tanh_sinh(65, -1.0, 1.0);
  const Rule c = coarsen(r);
  CHECK(c.size() == 33);
  CHECK(apply(c, [](double x) { return x * x; }) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("pairwise sum and parallel_for") {
  std::vector<double> v(1000001, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100000.1).epsilon(1e-15));
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK(worker_count() >= 1);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wtoda/toda.hpp"
#include "wtoda/whittaker.hpp"

using namespace wtoda;

namespace {
double max_gap(const GridFunction& a, const std::function<Complex(const Eigen::VectorXd&)>& f) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a.valid[k]) worst = std::max(worst, std::abs(a.values[k] - f(a.coords(k))));
  return worst;
}
}  // namespace

TEST_CASE("grid bookkeeping") {
  const GridFunction f = GridFunction::centered(2, 5, 0.1, Eigen::Vector2d(1.0, -1.0),
                                                [](const Eigen::VectorXd& y) { return Complex(y(0), y(1)); });
  CHECK(f.size() == 25);
  for (std::size_t k = 0; k < f.size(); ++k) {
    CHECK(f.flat(f.unflat(k)) == k);
    CHECK(f.values[k] == Complex(f.coords(k)(0), f.coords(k)(1)));
  }
  CHECK(f.coords(12).isApprox(Eigen::Vector2d(1.0, -1.0)));
}

TEST_CASE("L_c on exponentials") {
  // f = e^{a.y}: L_c f = (-|a|^2 / 2 + V) f
  for (int n : {2, 3}) {
    const RootSystem rs = build_root_system(n, Variant::SL);
    const TodaOperator op = TodaOperator::make(rs, std::vector<double>(static_cast<std::size_t>(n - 1), 0.3));
    Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(n - 1, 0.4, -0.7);
    auto f = [&](const Eigen::VectorXd& y) { return Complex(std::exp(a.dot(y)), 0.0); };
    const GridFunction g = GridFunction::centered(n - 1, n == 2 ? 41 : 21, 1e-2, Eigen::VectorXd::Zero(n - 1), f);
    const Eigen::MatrixXd b = rs.orthonormal_basis();
    const double gap = max_gap(apply_toda(op, g), [&](const Eigen::VectorXd& y) {
      double v = 0.0;
      for (int i = 0; i + 1 < n; ++i) v += 0.3 * std::exp(2.0 * rs.simple_root(static_cast<std::size_t>(i)).dot(b * y));
      return (-0.5 * a.squaredNorm() + v) * f(y);
    });
    CHECK(gap < 1e-8);
    CHECK(op.potential(Eigen::VectorXd::Zero(n - 1)) == doctest::Approx(0.3 * (n - 1)));
  }
}

TEST_CASE("A1 Whittaker samples are eigenfunctions") {
  const RootSystem rs = build_root_system(2, Variant::SL);
  const Eigen::MatrixXd b = rs.orthonormal_basis();
  for (double eta : {0.5, 2.0, 6.0}) {
    ClassOneOptions o;
    o.compute_residual = false;
    const WhittakerEvaluator k = class_one(rs, b.col(0) * eta, {1.0}, o);
    const GridFunction f = GridFunction::centered(1, 21, 1e-3, Eigen::VectorXd::Constant(1, -0.5),
                                                  [&](const Eigen::VectorXd& y) { return k(b * y); });
    const GridFunction lf = apply_toda(TodaOperator::make(rs, {1.0}), f);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      scale = std::max(scale, std::abs(f.values[i]));
      if (lf.valid[i]) worst = std::max(worst, std::abs(lf.values[i] - 0.5 * eta * eta * f.values[i]));
    }
    CHECK(worst / scale < 1e-6);
  }
}

TEST_CASE("conjugation and radial Casimir identities") {
  for (int n : {2, 3}) {
    const RootSystem rs = build_root_system(n, Variant::SL);
    const int l = n - 1;
    const GridFunction g = GridFunction::centered(l, l == 1 ? 81 : 31, 1e-2, Eigen::VectorXd::Zero(l),
                                                  [](const Eigen::VectorXd& y) {
                                                    return Complex(std::exp(-y.squaredNorm()) * std::cos(y.sum()), 0.0);
                                                  });
    CHECK(conjugation_identity_check(rs, g).relative <= 1e-6);
    CharacterData chi{std::vector<double>(static_cast<std::size_t>(l), 0.8)};
    const CasimirReport c = radial_casimir_check(rs, chi, g);
    CHECK(c.identity.relative <= 1e-8);
    CHECK(c.stencil.relative <= 1e-6);
    // zero character: the Casimir check collapses to the conjugation identity
    const CasimirReport c0 = radial_casimir_check(rs, CharacterData{std::vector<double>(static_cast<std::size_t>(l), 0.0)}, g);
    CHECK(c0.stencil.max_residual == doctest::Approx(conjugation_identity_check(rs, g).max_residual).epsilon(1e-6));
  }
}

TEST_CASE("D_1 on GL(n)") {
  for (int n : {2, 3}) {
    const RootSystem rs = build_root_system(n, Variant::GL);
    const TodaOperator op = TodaOperator::make(rs, std::vector<double>(static_cast<std::size_t>(n - 1), 1.0));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    Eigen::VectorXd w(n);
    for (int d = 0; d < n; ++d) w(d) = u(rng);
    const GridFunction f = GridFunction::centered(n, n == 2 ? 41 : 21, 1e-2, Eigen::VectorXd::Zero(n),
                                                  [&](const Eigen::VectorXd& y) { return Complex(std::sin(w.dot(y)) + y(0) * y(0), 0.0); });
    CHECK(d1_commutator(op, f) <= 1e-8);
  }
  // D_1 K_nu = i sum(nu) K_nu on GL(2)
  const RootSystem gl2 = build_root_system(2, Variant::GL);
  ClassOneOptions o;
  o.compute_residual = false;
  const DualVector nu = Eigen::Vector2d(1.4, 0.3);
  const WhittakerEvaluator k = class_one(gl2, nu, {1.0}, o);
  const GridFunction f = GridFunction::centered(2, 11, 1e-3, Eigen::Vector2d(0.2, -0.1),
                                                [&](const Eigen::VectorXd& y) { return k(y); });
  const GridFunction d = d1_apply(gl2, f);
  const Complex symbol = d1_symbol(nu);
  CHECK(std::abs(symbol - Complex(0.0, 1.7)) < 1e-14);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    scale = std::max(scale, std::abs(f.values[i]));
    if (d.valid[i]) worst = std::max(worst, std::abs(d.values[i] - symbol * f.values[i]));
  }
  CHECK(worst / scale < 1e-6);
  CHECK_THROWS_AS(d1_apply(build_root_system(2, Variant::SL), GridFunction::centered(1, 11, 1e-2, Eigen::VectorXd::Zero(1), [](const Eigen::VectorXd&) { return Complex(1.0, 0.0); })), Refusal);
}

TEST_CASE("classical flow conserves energy and momentum") {
  for (int n : {2, 3, 4}) {
    ClassicalState s{Eigen::VectorXd::LinSpaced(n, 0.0, -1.0 * (n - 1)), Eigen::VectorXd::LinSpaced(n, 0.3, -0.2)};
    const std::vector<double> c(static_cast<std::size_t>(n - 1), 1.0);
    const FlowResult r = classical_flow(s, c, 1e-3, 10000, 1000);
    CHECK_FALSE(r.halted);
    CHECK(r.energy_drift <= 1e-8);
    CHECK(r.momentum_drift <= 1e-8);
    CHECK(r.rows.front().energy == doctest::Approx(toda_hamiltonian(s, c)));
  }
  // two particles: H = p^2 / 2 (relative) + e^{2 (q1 - q2)}; a head-on start bounces back
  ClassicalState s{Eigen::Vector2d(-3.0, 3.0), Eigen::Vector2d(1.0, -1.0)};
  const FlowResult r = classical_flow(s, {1.0}, 1e-3, 8000, 8000);
  CHECK(r.rows.back().p(0) < 0.0);
  // energy balance fixes |p| at the end
  const auto& last = r.rows.back();
  const double pe = std::sqrt(1.0 + std::exp(-12.0) - std::exp(2.0 * (last.q(0) - last.q(1))));
  CHECK(last.p(0) == doctest::Approx(-pe).epsilon(1e-9));
  // overflow is reported, not propagated
  ClassicalState wild{Eigen::Vector2d(400.0, -400.0), Eigen::Vector2d(0.0, 0.0)};
  const FlowResult h = classical_flow(wild, {1.0}, 1e-3, 10);
  CHECK(h.halted);
  CHECK_FALSE(h.diagnostic.empty());
}

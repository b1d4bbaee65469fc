#include "cli_support.hpp"
#include "wtoda/plancherel.hpp"
#include "wtoda/spectral_transform.hpp"
#include "wtoda/toda.hpp"
#include "wtoda/whittaker.hpp"

#include <numbers>

namespace wtoda {

namespace {

using nlohmann::json;

json skipped(const std::string& suite, const std::string& why) {
  return {{"suite", suite}, {"passed", true}, {"skipped", true}, {"reason", why}};
}

DualVector from_pairings(const RootSystem& rs, std::initializer_list<double> p) {
  return detail::dual_from_simple_pairings(rs, Eigen::Map<const Eigen::VectorXd>(p.begin(), static_cast<Eigen::Index>(p.size())));
}

// ratio quadrature / product over five parameters in the convergence region
json suite_c_function(const RunConfig& config) {
  const RootSystem rs = config.rs.semisimple();
  const int l = rs.semisimple_rank();
  std::vector<DualVector> nus;
  if (l == 1) {
    for (double p : {-1.3, -2.0, -2.7, -3.5, -5.0}) nus.push_back(from_pairings(rs, {p}));
  } else {
    nus = {from_pairings(rs, {-1.2, -1.5}), from_pairings(rs, {-2.0, -2.0}), from_pairings(rs, {-1.7, -2.6}),
           from_pairings(rs, {-3.0, -1.4}), from_pairings(rs, {-2.5, -3.3})};
  }
  const double tol = l == 1 ? 1e-6 : 1e-4;
  std::vector<Complex> ratios;
  json rows = json::array();
  for (const auto& nu : nus) {
    const QuadratureValue q = c_function_quadrature(rs, nu.cast<Complex>(), config.quad);
    const ComplexValue c = c_function(rs, nu.cast<Complex>());
    ratios.push_back(q.value / c.value);
    rows.push_back({{"nu", std::vector<double>(nu.data(), nu.data() + nu.size())},
                    {"quadrature", detail::complex_json(q.value)},
                    {"quadrature_error", q.error},
                    {"product", detail::complex_json(c.value)},
                    {"ratio", detail::complex_json(ratios.back())}});
  }
  const double spread = detail::ratio_spread(ratios);
  return {{"suite", "c_function"}, {"passed", spread <= tol}, {"spread", spread}, {"tolerance", tol},
          {"quadrature", to_json(config.quad)}, {"rows", rows}};
}

// mu against prod s tanh(pi s) / pi, plus mu(0) = 0 and mu(nu) = mu(-nu)
json suite_plancherel(const RunConfig& config) {
  const RootSystem rs = config.rs.semisimple();
  const int l = rs.semisimple_rank();
  const PlancherelDensity pd{rs, 1.0};
  const Eigen::MatrixXd basis = rs.orthonormal_basis();
  const double norm = std::sqrt(dual_inner(rs.root(0), rs.root(0)));
  std::vector<DualVector> nus;
  if (l == 1) {
    for (int i = 0; i <= 400; ++i) {
      const double s = 0.1 + (20.0 - 0.1) * i / 400.0;
      nus.push_back(basis.col(0) * (s * norm));  // (nu, alpha)/(alpha, alpha) = s
    }
  } else {
    for (int i = 0; i < 12; ++i)
      for (int k = 0; k < 12; ++k) nus.push_back(basis * Eigen::Vector2d(0.37 + 1.1 * i, -6.1 + 1.07 * k));
  }
  std::vector<Complex> ratios;
  double symmetry = 0.0;
  for (const auto& nu : nus) {
    double product = 1.0;
    bool regular = true;
    for (std::size_t k = 0; k < rs.positive_roots.size(); ++k) {
      const double s = dual_inner(nu, rs.root(k)) / dual_inner(rs.root(k), rs.root(k));
      regular = regular && std::abs(s) > 1e-6;
      product *= s * std::tanh(std::numbers::pi * s) / std::numbers::pi;
    }
    if (!regular) continue;
    const double mu = mu_density(pd, nu).value;
    ratios.emplace_back(mu / product, 0.0);
    symmetry = std::max(symmetry, std::abs(mu_density(pd, -nu).value - mu) / mu);
  }
  const double spread = detail::ratio_spread(ratios);
  const double at_zero = mu_density(pd, DualVector::Zero(rs.n)).value;
  const bool pass = spread <= 1e-10 && at_zero == 0.0 && symmetry <= 1e-12;
  return {{"suite", "plancherel"}, {"passed", pass}, {"samples", ratios.size()}, {"ratio_spread", spread},
          {"ratio_tolerance", 1e-10}, {"mu_at_zero", at_zero}, {"reflection_gap", symmetry}};
}

// L_c K - E K on small interior grids, stencils from the toda module
json suite_eigenfunction(const RunConfig& config) {
  const RootSystem rs = config.rs.semisimple();
  const int l = rs.semisimple_rank();
  const Eigen::MatrixXd basis = rs.orthonormal_basis();
  const std::vector<double> c = config.couplings();
  const TodaOperator op = TodaOperator::make(rs, c);
  std::vector<Eigen::VectorXd> etas, centers;
  if (l == 1) {
    for (double e : {0.5, 1.3, 2.7, 4.0, 6.5}) etas.push_back(Eigen::VectorXd::Constant(1, e));
    for (double y : {-2.0, -1.0, 0.0, 1.0}) centers.push_back(Eigen::VectorXd::Constant(1, y));
  } else {
    etas = {Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(0.3, 3.0), Eigen::Vector2d(2.5, 4.0)};
    for (double a : {-1.0, 0.5})
      for (double b : {-1.0, 0.5}) centers.push_back(Eigen::Vector2d(a, b));
  }
  const double tol = l == 1 ? 1e-6 : 1e-4;
  const double spacing = 1e-3;
  const int points = 11;
  json rows = json::array();
  double worst = 0.0;
  for (const auto& eta : etas) {
    ClassOneOptions opts;
    opts.compute_residual = false;
    const WhittakerEvaluator k = class_one(rs, basis * eta, c, opts);
    const double expected = 0.5 * eta.squaredNorm();
    double res = 0.0;
    for (const auto& center : centers) {
      const GridFunction f = GridFunction::centered(l, points, spacing, center,
                                                    [&](const Eigen::VectorXd& y) { return k(basis * y); });
      res = std::max(res, detail::relative_gap(apply_toda(op, f), f, expected));
    }
    worst = std::max(worst, res);
    rows.push_back({{"eta", std::vector<double>(eta.data(), eta.data() + eta.size())},
                    {"eigenvalue", k.eigenvalue()},
                    {"expected", expected},
                    {"relative_residual", res}});
  }
  return {{"suite", "eigenfunction"}, {"passed", worst <= tol}, {"max_relative_residual", worst},
          {"tolerance", tol}, {"experimental", l == 2}, {"rows", rows}};
}

json suite_transform(const RunConfig& config) {
  if (config.rs.variant != Variant::SL) return skipped("transform", "transform is implemented for SL(n)");
  const RootSystem& rs = config.rs;
  const int l = rs.semisimple_rank();
  const EvaluatorFactory factory = class_one_factory(rs, config.couplings());
  const auto points = box_points(l, l == 1 ? 2.0 : 1.0, l == 1 ? 41 : 5);
  TransformQuadrature quad = default_transform_quadrature(l);
  if (l == 1) {
    const PlancherelDensity pd{rs, closed_form_calibration(rs)};
    const RoundTrip g = round_trip(gaussian(1), factory, pd, quad, points);
    const RoundTrip b = round_trip(bump(1), factory, pd, quad, points);
    const CalibrationFit fg = fit_calibration(gaussian(1), factory, rs, quad, points);
    const CalibrationFit fb = fit_calibration(bump(1), factory, rs, quad, points);
    const double transfer = std::abs(fg.constant - fb.constant) / fg.constant;
    const bool pass = g.max_rel_err <= quad.tol && b.max_rel_err <= quad.tol && transfer <= 1e-3;
    return {{"suite", "transform"},
            {"passed", pass},
            {"budget", to_json(quad)},
            {"calibration_constant", pd.calibration_constant},
            {"gaussian_max_rel_err", g.max_rel_err},
            {"bump_max_rel_err", b.max_rel_err},
            {"fitted_constant_gaussian", fg.constant},
            {"fitted_constant_bump", fb.constant},
            {"calibration_transfer_gap", transfer},
            {"transfer_tolerance", 1e-3}};
  }
  // rank 2: error must fall along a budget ladder
  const PlancherelDensity pd{rs, closed_form_calibration(rs)};
  json ladder = json::array();
  std::vector<double> errors;
  const std::array<std::array<int, 2>, 3> steps = {{{24, 16}, {36, 24}, {48, 32}}};
  for (const auto& s : steps) {
    quad.h_nodes_per_dim = s[0];
    quad.nu_nodes_per_dim = s[1];
    const RoundTrip rt = round_trip(gaussian(2), factory, pd, quad, points);
    errors.push_back(rt.max_rel_err);
    ladder.push_back({{"budget", to_json(quad)}, {"max_rel_err", rt.max_rel_err}});
  }
  const bool monotone = errors[1] < errors[0] && errors[2] < errors[1];
  return {{"suite", "transform"}, {"passed", monotone}, {"experimental", true}, {"ladder", ladder},
          {"calibration_constant", pd.calibration_constant}};
}

json suite_parseval(const RunConfig& config) {
  if (config.rs.variant != Variant::SL) return skipped("parseval", "transform is implemented for SL(n)");
  const RootSystem& rs = config.rs;
  const int l = rs.semisimple_rank();
  const EvaluatorFactory factory = class_one_factory(rs, config.couplings());
  const TransformQuadrature quad = default_transform_quadrature(l);
  const PlancherelDensity pd{rs, closed_form_calibration(rs)};
  const std::pair<TestFunction, TestFunction> pairs[] = {{gaussian(l), gaussian(l)},
                                                         {gaussian(l), shifted_gaussian(l)}};
  json rows = json::array();
  double worst = 0.0;
  for (const auto& [u, w] : pairs) {
    const ParsevalResult p = parseval_check(u, w, factory, pd, quad);
    worst = std::max(worst, p.gap);
    rows.push_back({{"u", u.name}, {"w", w.name}, {"lhs", detail::complex_json(p.lhs)},
                    {"rhs", detail::complex_json(p.rhs)}, {"lhs_err", p.lhs_err}, {"rhs_err", p.rhs_err},
                    {"gap", p.gap}, {"within_bars", p.within_bars}});
  }
  return {{"suite", "parseval"}, {"passed", worst <= quad.tol}, {"max_gap", worst}, {"tolerance", quad.tol},
          {"budget", to_json(quad)}, {"experimental", l == 2}, {"rows", rows}};
}

json suite_inequalities(const RunConfig& config) {
  const RootSystem rs = config.rs.semisimple();
  const int pairs = config.section("verify").value("pairs", 10000);
  const RhoGrowthReport r = rho_growth_check(rs, pairs, *config.seed, 1e-10);
  return {{"suite", "inequalities"}, {"passed", r.violations == 0}, {"pairs", r.pairs},
          {"violations", r.violations}, {"max_ratio", r.max_ratio}, {"slack", 1e-10}};
}

json suite_identities(const RunConfig& config) {
  const RootSystem rs = config.rs.semisimple();
  const int l = rs.semisimple_rank();
  std::mt19937_64 rng(*config.seed ^ 0x1d3a5u);
  const int functions = config.section("verify").value("functions", 10);
  const int points = l == 1 ? 101 : 31;
  const Eigen::VectorXd center = Eigen::VectorXd::Zero(l);
  double conj = 0.0, cas = 0.0;
  for (int i = 0; i < functions; ++i) {
    const GridFunction f = GridFunction::centered(l, points, 1e-2, center, detail::band_limited(rng, l));
    conj = std::max(conj, conjugation_identity_check(rs, f).relative);
    cas = std::max(cas, radial_casimir_check(rs, config.chi, f).identity.relative);
  }
  return {{"suite", "identities"},     {"passed", conj <= 1e-6 && cas <= 1e-8},
          {"functions", functions},    {"conjugation_relative", conj},
          {"conjugation_tolerance", 1e-6}, {"casimir_relative", cas},
          {"casimir_tolerance", 1e-8}};
}

// Jacquet integral against the decaying series at real parameters: the ratio
// is a constant of the chosen normalizations
json suite_connection(const RunConfig& config) {
  const RootSystem rs = config.rs.semisimple();
  const int l = rs.semisimple_rank();
  const std::vector<double> q = config.couplings();
  OracleQuadrature quad = config.quad;
  quad.nodes_per_dim = std::max(quad.nodes_per_dim, l == 1 ? 257 : 193);
  DualVector nu;
  std::vector<Eigen::VectorXd> zs;
  if (l == 1) {
    nu = from_pairings(rs, {-3.3});
    for (double z : {0.02, 0.05, 0.1, 0.2, 0.4}) zs.push_back(Eigen::VectorXd::Constant(1, z));
  } else {
    nu = from_pairings(rs, {-3.3, -2.9});
    zs = {Eigen::Vector2d(0.06, 0.06), Eigen::Vector2d(0.1, 0.1), Eigen::Vector2d(0.08, 0.135),
          Eigen::Vector2d(0.135, 0.08), Eigen::Vector2d(0.12, 0.15)};
  }
  const WhittakerEvaluator jacquet = jacquet_evaluator(rs, config.chi, nu, quad);
  const WhittakerEvaluator series = decaying_series(rs, nu, q);
  std::vector<Complex> ratios;
  json rows = json::array();
  for (const auto& z : zs) {
    const CartanVector h = detail::point_from_scaled(rs, z, q);
    const WhittakerPoint j = jacquet.evaluate(h);
    const WhittakerPoint s = series.evaluate(h);
    ratios.push_back(j.value / s.value);
    rows.push_back({{"z", std::vector<double>(z.data(), z.data() + z.size())},
                    {"jacquet", detail::complex_json(j.value)},
                    {"jacquet_error", j.error_bound},
                    {"series", detail::complex_json(s.value)},
                    {"ratio", detail::complex_json(ratios.back())}});
  }
  const double spread = detail::ratio_spread(ratios);
  return {{"suite", "connection"}, {"passed", spread <= 1e-4}, {"spread", spread}, {"tolerance", 1e-4},
          {"nu", std::vector<double>(nu.data(), nu.data() + nu.size())}, {"quadrature", to_json(quad)},
          {"rows", rows}};
}

json suite_commutation(const RunConfig& config) {
  if (config.rs.variant != Variant::GL) return skipped("commutation", "D_1 needs the GL center direction");
  const RootSystem& rs = config.rs;
  const int dim = rs.rank();
  std::mt19937_64 rng(*config.seed ^ 0x7c15u);
  const TodaOperator op = TodaOperator::make(rs, config.couplings());
  const int functions = config.section("verify").value("functions", 10);
  const int points = dim == 2 ? 41 : 21;
  double worst = 0.0;
  for (int i = 0; i < functions; ++i) {
    const GridFunction f =
        GridFunction::centered(dim, points, 1e-2, Eigen::VectorXd::Zero(dim), detail::band_limited(rng, dim));
    worst = std::max(worst, d1_commutator(op, f));
  }
  return {{"suite", "commutation"}, {"passed", worst <= 1e-8}, {"functions", functions},
          {"max_relative_commutator", worst}, {"tolerance", 1e-8}};
}

// Cauchy differences of the truncated kernel integrals must at least halve per doubling past radius 4
json suite_probe(const RunConfig& config) {
  const RootSystem rs = config.rs.semisimple();
  const json sec = config.section("verify");
  const double eps = sec.value("probe_epsilon", 0.1);
  const std::vector<double> radii = sec.value("probe_radii", std::vector<double>{1.0, 2.0, 4.0, 8.0, 16.0, 32.0});
  const auto rows = beuzart_plessis_probe(rs, config.chi, eps, radii);
  json out = json::array();
  bool pass = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    json r = {{"radius", rows[i].radius}, {"partial", rows[i].partial}, {"cauchy_diff", rows[i].cauchy_diff}};
    if (i >= 2 && rows[i - 1].radius >= 4.0) {
      const double prev = std::abs(rows[i - 1].cauchy_diff), cur = std::abs(rows[i].cauchy_diff);
      const double factor = cur > 0.0 ? prev / cur : std::numeric_limits<double>::infinity();
      r["decrease_factor"] = prev == 0.0 && cur == 0.0 ? json(nullptr) : json(factor);
      pass = pass && (cur == 0.0 || factor >= 2.0);
    }
    out.push_back(r);
  }
  return {{"suite", "probe"}, {"passed", pass}, {"epsilon", eps}, {"required_factor", 2.0}, {"rows", out}};
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"c_function",   "plancherel", "eigenfunction", "transform",
                                                 "parseval",     "inequalities", "identities",  "connection",
                                                 "commutation",  "probe"};
  return names;
}

json run_verify_suite(const RunConfig& config, const std::string& suite) {
  const bool seeded = suite == "inequalities" || suite == "identities" || suite == "commutation";
  if (seeded && !config.seed) throw ConfigError("suite " + suite + " needs a seed");
  try {
    if (suite == "c_function") return suite_c_function(config);
    if (suite == "plancherel") return suite_plancherel(config);
    if (suite == "eigenfunction") return suite_eigenfunction(config);
    if (suite == "transform") return suite_transform(config);
    if (suite == "parseval") return suite_parseval(config);
    if (suite == "inequalities") return suite_inequalities(config);
    if (suite == "identities") return suite_identities(config);
    if (suite == "connection") return suite_connection(config);
    if (suite == "commutation") return suite_commutation(config);
    if (suite == "probe") return suite_probe(config);
  } catch (const Refusal& e) {
    return {{"suite", suite}, {"passed", false}, {"refused", e.what()}};
  }
  throw ConfigError("unknown suite " + suite);
}

}  // namespace wtoda

#include "wtoda/cli.hpp"

#include "cli_support.hpp"
#include "schema_text.hpp"
#include "wtoda/plancherel.hpp"
#include "wtoda/spectral_transform.hpp"
#include "wtoda/toda.hpp"
#include "wtoda/whittaker.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <numbers>

namespace wtoda {

using detail::fmt;

// ---------------------------------------------------------------- schema

namespace {

bool has_type(const nlohmann::json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

}  // namespace

std::vector<std::string> validate_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                                         const std::string& path) {
  std::vector<std::string> errors;
  if (schema.contains("type")) {
    const auto& t = schema["type"];
    bool ok = false;
    if (t.is_string()) ok = has_type(doc, t.get<std::string>());
    for (const auto& alt : t.is_array() ? t : nlohmann::json::array()) ok = ok || has_type(doc, alt.get<std::string>());
    if (!ok) {
      errors.push_back(path + ": expected type " + t.dump());
      return errors;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == doc;
    if (!found) errors.push_back(path + ": value " + doc.dump() + " not in " + schema["enum"].dump());
  }
  if (doc.is_number()) {
    const double x = doc.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>())
      errors.push_back(path + ": below minimum " + schema["minimum"].dump());
    if (schema.contains("exclusiveMinimum") && !(x > schema["exclusiveMinimum"].get<double>()))
      errors.push_back(path + ": must exceed " + schema["exclusiveMinimum"].dump());
  }
  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!doc.contains(key.get<std::string>())) errors.push_back(path + ": missing required key " + key.dump());
    const nlohmann::json props = schema.value("properties", nlohmann::json::object());
    const bool closed = schema.contains("additionalProperties") && schema["additionalProperties"] == false;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (props.contains(it.key())) {
        auto sub = validate_schema(it.value(), props[it.key()], path + "." + it.key());
        errors.insert(errors.end(), sub.begin(), sub.end());
      } else if (closed) {
        errors.push_back(path + ": unknown key \"" + it.key() + "\"");
      }
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      auto sub = validate_schema(doc[i], schema["items"], path + "[" + std::to_string(i) + "]");
      errors.insert(errors.end(), sub.begin(), sub.end());
    }
  }
  return errors;
}

const nlohmann::json& run_config_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(detail::kSchemaText);
  return schema;
}

// ---------------------------------------------------------------- config

RunConfig RunConfig::parse(const nlohmann::json& j) {
  const auto errors = validate_schema(j, run_config_schema());
  if (!errors.empty()) {
    std::string msg = "config does not match the schema:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  RunConfig c;
  c.raw = j;
  const std::string group = j.at("group").get<std::string>();
  c.rs = build_root_system(group[2] - '0', group.substr(0, 2) == "GL" ? Variant::GL : Variant::SL);
  const std::size_t l = static_cast<std::size_t>(c.rs.semisimple_rank());
  c.chi.xi.assign(l, 1.0);
  if (j.contains("character") && j["character"].contains("xi")) {
    c.chi.xi = j["character"]["xi"].get<std::vector<double>>();
    if (c.chi.xi.size() != l)
      throw ConfigError("character.xi needs " + std::to_string(l) + " entries for " + group);
  }
  try {
    c.quad = oracle_quadrature_from_json(j.value("quadrature", nlohmann::json::object()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("output") && j["output"].contains("dir")) c.out_dir = j["output"]["dir"].get<std::string>();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse(j);
}

std::vector<double> RunConfig::couplings() const { return couplings_from_character(chi); }

nlohmann::json RunConfig::section(const std::string& name) const {
  return raw.value(name, nlohmann::json::object());
}

// ---------------------------------------------------------------- density

int cmd_density(const RunConfig& config) {
  const RootSystem& rs = config.rs;
  const RootSystem ss = rs.semisimple();
  const nlohmann::json sec = config.section("density");
  const PlancherelDensity pd{ss, closed_form_calibration(ss)};
  const Eigen::MatrixXd basis = ss.orthonormal_basis();
  const int l = ss.semisimple_rank();

  std::vector<DualVector> nus;
  if (sec.contains("nu")) {
    for (const auto& v : sec["nu"]) {
      const auto x = v.get<std::vector<double>>();
      if (static_cast<int>(x.size()) != rs.n) throw ConfigError("density.nu entries need " + std::to_string(rs.n) + " coordinates");
      nus.push_back(remove_trace(Eigen::Map<const Eigen::VectorXd>(x.data(), rs.n)));
    }
  } else {
    const double radius = sec.value("radius", 20.0);
    const int count = sec.value("count", l == 1 ? 201 : 41);
    if (l == 1) {
      for (int i = 0; i < count; ++i) nus.push_back(basis * Eigen::VectorXd::Constant(1, radius * i / (count - 1)));
    } else {
      for (int i = 0; i < count; ++i)
        for (int k = 0; k < count; ++k)
          nus.push_back(basis * Eigen::Vector2d(-radius + 2.0 * radius * i / (count - 1),
                                                -radius + 2.0 * radius * k / (count - 1)));
    }
  }

  std::ostringstream csv;
  for (int i = 0; i < ss.n; ++i) csv << "nu_" << i + 1 << ",";
  csv << "c_re,c_im,mu,ratio\n";
  for (const auto& nu : nus) {
    const ComplexValue c = c_function(ss, nu.cast<Complex>() * Complex(0.0, 1.0));
    const DensityValue mu = mu_density(pd, nu);
    // ratio to prod_alpha s tanh(pi s) / pi, s = (nu, alpha) / (alpha, alpha)
    double product = 1.0;
    for (std::size_t k = 0; k < ss.positive_roots.size(); ++k) {
      const double s = dual_inner(nu, ss.root(k)) / 2.0;
      product *= s * std::tanh(std::numbers::pi * s) / std::numbers::pi;
    }
    for (int i = 0; i < ss.n; ++i) csv << fmt(nu(i)) << ",";
    if (c.pole)
      csv << "inf,inf,";
    else
      csv << fmt(c.value.real()) << "," << fmt(c.value.imag()) << ",";
    csv << fmt(mu.value) << "," << fmt(product > 0.0 ? mu.value / product : std::numeric_limits<double>::quiet_NaN())
        << "\n";
  }
  const PolynomialBound bound = fit_polynomial_bound(pd, nus);
  const nlohmann::json summary = {{"group", config.raw["group"]},
                                  {"calibration_constant", pd.calibration_constant},
                                  {"rows", nus.size()},
                                  {"bound", {{"constant", bound.constant},
                                             {"exponent", bound.exponent},
                                             {"max_log_ratio", bound.max_log_ratio}}}};
  detail::write_text(config.out_dir / "density.csv", csv.str());
  detail::write_text(config.out_dir / "density_summary.json", detail::dump(summary));
  return kExitPass;
}

// ---------------------------------------------------------------- whittaker

namespace {

std::vector<Eigen::VectorXd> point_list(const nlohmann::json& sec, const std::string& key, int dim, double radius,
                                        int count) {
  std::vector<Eigen::VectorXd> pts;
  if (sec.contains(key)) {
    for (const auto& v : sec[key]) {
      const auto x = v.get<std::vector<double>>();
      if (static_cast<int>(x.size()) != dim)
        throw ConfigError(key + " entries need " + std::to_string(dim) + " coordinates");
      pts.push_back(Eigen::Map<const Eigen::VectorXd>(x.data(), dim));
    }
    return pts;
  }
  return box_points(dim, radius, count);
}

DualVector ambient_nu(const RunConfig& config, const std::vector<double>& v, const char* what) {
  if (static_cast<int>(v.size()) != config.rs.n)
    throw ConfigError(std::string(what) + " needs " + std::to_string(config.rs.n) + " ambient coordinates");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), config.rs.n);
}

}  // namespace

int cmd_whittaker(const RunConfig& config) {
  const RootSystem& rs = config.rs;
  const nlohmann::json sec = config.section("whittaker");
  if (!sec.contains("nu")) throw ConfigError("whittaker.nu is required");
  const DualVector nu = ambient_nu(config, sec["nu"].get<std::vector<double>>(), "whittaker.nu");
  const std::string method = sec.value("method", std::string("class_one"));
  const Eigen::MatrixXd basis = rs.orthonormal_basis();
  const int dim = static_cast<int>(basis.cols());

  std::optional<WhittakerEvaluator> ev;
  if (method == "jacquet") {
    ev = jacquet_evaluator(rs, config.chi, nu, config.quad);
  } else {
    ClassOneOptions opts;
    opts.order = sec.value("order", -1);
    opts.method = method == "series" ? WhittakerMethod::SeriesClassOne : WhittakerMethod::Rank1ClosedForm;
    opts.compute_residual = false;
    opts.verify_coefficients = rs.semisimple_rank() == 2;
    ev = class_one(rs, nu, config.couplings(), opts);
  }
  const double spacing = sec.value("spacing", 1e-3);
  const auto pts = point_list(sec, "points", dim, sec.value("h_radius", 2.0), sec.value("h_count", 41));

  std::vector<std::string> rows(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const CartanVector h = basis * pts[i];
    const WhittakerPoint p = ev->evaluate(h);
    const double res = ev->eigen_residual({h}, spacing);
    std::ostringstream row;
    for (int d = 0; d < dim; ++d) row << fmt(pts[i](d)) << ",";
    row << fmt(p.value.real()) << "," << fmt(p.value.imag()) << "," << fmt(res) << "\n";
    rows[i] = row.str();
  });
  std::ostringstream csv;
  csv << "# method=" << to_string(ev->method()) << ",experimental=" << (ev->experimental() ? 1 : 0)
      << ",eigenvalue=" << fmt(ev->eigenvalue());
  if (!std::isnan(ev->accuracy().coefficient_mismatch))
    csv << ",coefficient_mismatch=" << fmt(ev->accuracy().coefficient_mismatch);
  csv << "\n";
  for (int d = 0; d < dim; ++d) csv << "y_" << d + 1 << ",";
  csv << "K_re,K_im,eig_residual\n";
  for (const auto& r : rows) csv << r;
  detail::write_text(config.out_dir / "whittaker.csv", csv.str());
  detail::write_text(config.out_dir / "whittaker_meta.json", detail::dump(ev->to_json()));
  return kExitPass;
}

// ---------------------------------------------------------------- transform

namespace {

struct ForwardTable {
  std::vector<SpectralNode> nodes;
  std::vector<Complex> values;
};

ForwardTable read_forward_csv(const std::filesystem::path& path, const RootSystem& rs, const PlancherelDensity& pd) {
  std::ifstream in(path);
  if (!in) throw ConfigError("transform.input: cannot read " + path.string());
  const Eigen::MatrixXd basis = rs.orthonormal_basis();
  const int l = static_cast<int>(basis.cols());
  ForwardTable t;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(std::stod(cell));
    if (static_cast<int>(cols.size()) != l + 5) throw ConfigError("transform.input: unexpected column count");
    SpectralNode node;
    node.eta = Eigen::Map<const Eigen::VectorXd>(cols.data(), l);
    node.nu = basis * node.eta;
    node.weight = cols[static_cast<std::size_t>(l)];
    node.mu = mu_density(pd, node.nu).value;
    t.nodes.push_back(node);
    t.values.emplace_back(cols[static_cast<std::size_t>(l) + 2], cols[static_cast<std::size_t>(l) + 3]);
  }
  if (t.nodes.empty()) throw ConfigError("transform.input: no rows");
  return t;
}

double calibration_from(const nlohmann::json& sec, const RootSystem& rs, const TestFunction& reference,
                        const EvaluatorFactory& factory, const TransformQuadrature& quad) {
  if (!sec.contains("calibration") || sec["calibration"] == "closed_form") return closed_form_calibration(rs);
  if (sec["calibration"].is_number()) return sec["calibration"].get<double>();
  if (sec["calibration"] == "fit")
    return fit_calibration(reference, factory, rs, quad, box_points(rs.semisimple_rank(), 1.0, 5)).constant;
  throw ConfigError("transform.calibration must be \"closed_form\", \"fit\" or a number");
}

}  // namespace

int cmd_transform(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const RootSystem& rs = config.rs;
  if (rs.variant != Variant::SL)
    throw Refusal("transform: only SL(n) groups; the GL center adds a plain Fourier factor");
  const nlohmann::json sec = config.section("transform");
  const int l = rs.semisimple_rank();
  const TransformQuadrature quad = [&] {
    try {
      return transform_quadrature_from_json(sec.value("quadrature", nlohmann::json::object()),
                                            default_transform_quadrature(l));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  const std::string mode = sec.value("mode", std::string("roundtrip"));
  const TestFunction u = gallery(sec.value("function", std::string("gaussian")), l);
  const EvaluatorFactory factory = class_one_factory(rs, config.couplings());
  const PlancherelDensity pd{rs, calibration_from(sec, rs, gaussian(l), factory, quad)};
  const auto points = point_list(sec, "points", l, sec.value("points_radius", 2.0),
                                 sec.value("points_count", l == 1 ? 41 : 9));

  std::ostringstream csv;
  nlohmann::json summary = {{"mode", mode}, {"function", u.name}, {"budget", to_json(quad)},
                            {"calibration_constant", pd.calibration_constant}};
  double max_rel_err = 0.0;
  bool within = true;
  auto write_points = [&](const std::vector<Complex>& values, const std::vector<double>& errors,
                          const std::vector<Complex>* exact) {
    for (int d = 0; d < l; ++d) csv << "y_" << d + 1 << ",";
    csv << "value_re,value_im,err_est" << (exact ? ",exact_re,exact_im" : "") << "\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (int d = 0; d < l; ++d) csv << fmt(points[i](d)) << ",";
      csv << fmt(values[i].real()) << "," << fmt(values[i].imag()) << ","
          << fmt(errors.empty() ? 0.0 : errors[i]);
      if (exact) csv << "," << fmt((*exact)[i].real()) << "," << fmt((*exact)[i].imag());
      csv << "\n";
    }
  };

  if (mode == "forward") {
    const TransformResult r = forward_transform(u, factory, pd, quad);
    for (int d = 0; d < l; ++d) csv << "eta_" << d + 1 << ",";
    csv << "weight,mu,value_re,value_im,err_est\n";
    double scale = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      for (int d = 0; d < l; ++d) csv << fmt(r.nodes[k].eta(d)) << ",";
      csv << fmt(r.nodes[k].weight) << "," << fmt(r.nodes[k].mu) << "," << fmt(r.values[k].real()) << ","
          << fmt(r.values[k].imag()) << "," << fmt(r.errors[k]) << "\n";
      scale = std::max(scale, std::abs(r.values[k]));
    }
    for (double e : r.errors) max_rel_err = std::max(max_rel_err, scale > 0.0 ? e / scale : e);
    summary["metadata"] = r.metadata();
    within = max_rel_err <= quad.tol;
  } else if (mode == "inverse") {
    if (!sec.contains("input")) throw ConfigError("transform.input is required for mode inverse");
    const ForwardTable table = read_forward_csv(sec["input"].get<std::string>(), rs, pd);
    TransformResult coeffs;
    coeffs.nodes = table.nodes;
    coeffs.values = table.values;
    coeffs.quad = quad;
    const Reconstruction rec = inverse_transform(coeffs, factory, pd, points);
    write_points(rec.values, {}, nullptr);
    const double scale = detail::max_abs(rec.values);
    max_rel_err = scale > 0.0 ? rec.truncation_estimate / scale : rec.truncation_estimate;
    summary["truncation_estimate"] = rec.truncation_estimate;
    summary["flagged"] = rec.flagged;
  } else if (mode == "roundtrip") {
    const RoundTrip rt = round_trip(u, factory, pd, quad, points);
    write_points(rt.reconstruction.values, rt.reconstruction.errors, &rt.exact);
    max_rel_err = rt.max_rel_err;
    summary["max_abs_err"] = rt.max_abs_err;
    summary["truncation_estimate"] = rt.reconstruction.truncation_estimate;
    within = max_rel_err <= quad.tol;
  } else {  // parseval
    const TestFunction w = gallery(sec.value("pair", u.name), l);
    const ParsevalResult p = parseval_check(u, w, factory, pd, quad);
    csv << "lhs_re,lhs_im,rhs_re,rhs_im,lhs_err,rhs_err,gap\n"
        << fmt(p.lhs.real()) << "," << fmt(p.lhs.imag()) << "," << fmt(p.rhs.real()) << "," << fmt(p.rhs.imag())
        << "," << fmt(p.lhs_err) << "," << fmt(p.rhs_err) << "," << fmt(p.gap) << "\n";
    max_rel_err = p.gap;
    summary["pair"] = w.name;
    summary["within_bars"] = p.within_bars;
    within = p.gap <= quad.tol;
  }
  summary["max_rel_err"] = max_rel_err;
  summary["within_tolerance"] = within;
  summary["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail::write_text(config.out_dir / ("transform_" + mode + ".csv"), csv.str());
  detail::write_text(config.out_dir / "transform_summary.json", detail::dump(summary));
  return within ? kExitPass : kExitTolerance;
}

// ---------------------------------------------------------------- toda

int cmd_toda(const RunConfig& config) {
  const RootSystem& rs = config.rs;
  const nlohmann::json sec = config.section("toda");
  const std::string mode = sec.value("mode", std::string("flow"));
  const Eigen::MatrixXd basis = rs.orthonormal_basis();
  const int dim = static_cast<int>(basis.cols());
  const int points = sec.value("grid_points", 21);
  // the commutator is a difference of third-order stencils; a fine grid drowns in roundoff
  const double spacing = sec.value("spacing", mode == "commutator" ? 1e-2 : 2e-3);
  const Eigen::VectorXd center = Eigen::VectorXd::Zero(dim);

  if (mode == "flow") {
    const std::vector<double> c = config.couplings();
    auto vec = [&](const char* key, double fill) {
      std::vector<double> v(static_cast<std::size_t>(rs.n), fill);
      if (sec.contains(key)) v = sec[key].get<std::vector<double>>();
      if (static_cast<int>(v.size()) != rs.n) throw ConfigError(std::string("toda.") + key + " needs n entries");
      return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), rs.n));
    };
    ClassicalState s{vec("q0", 0.0), vec("p0", 0.0)};
    if (!sec.contains("q0"))
      for (int i = 0; i < rs.n; ++i) s.q(i) = -static_cast<double>(i);
    const FlowResult r = classical_flow(s, c, sec.value("dt", 1e-3), sec.value("steps", 10000), sec.value("record_every", 100));
    std::ostringstream csv;
    csv << "t";
    for (int i = 0; i < rs.n; ++i) csv << ",q_" << i + 1;
    for (int i = 0; i < rs.n; ++i) csv << ",p_" << i + 1;
    csv << ",H\n";
    for (const auto& row : r.rows) {
      csv << fmt(row.t);
      for (int i = 0; i < rs.n; ++i) csv << "," << fmt(row.q(i));
      for (int i = 0; i < rs.n; ++i) csv << "," << fmt(row.p(i));
      csv << "," << fmt(row.energy) << "\n";
    }
    const nlohmann::json summary = {{"mode", mode},
                                    {"energy_drift", r.energy_drift},
                                    {"momentum_drift", r.momentum_drift},
                                    {"halted", r.halted},
                                    {"diagnostic", r.diagnostic}};
    detail::write_text(config.out_dir / "trajectory.csv", csv.str());
    detail::write_text(config.out_dir / "toda_report.json", detail::dump(summary));
    if (r.halted) {
      std::cerr << "wtoda: " << r.diagnostic << "\n";
      return kExitRefusal;
    }
    return r.energy_drift <= 1e-8 && r.momentum_drift <= 1e-8 ? kExitPass : kExitTolerance;
  }

  nlohmann::json report = {{"mode", mode}};
  bool pass = true;
  if (mode == "residual") {
    if (!sec.contains("nu")) throw ConfigError("toda.nu is required for mode residual");
    const DualVector nu = ambient_nu(config, sec["nu"].get<std::vector<double>>(), "toda.nu");
    ClassOneOptions opts;
    opts.compute_residual = false;
    const WhittakerEvaluator k = class_one(rs, nu, config.couplings(), opts);
    const TodaOperator op = TodaOperator::make(rs, config.couplings());
    const GridFunction f = GridFunction::centered(dim, points, spacing, center,
                                                  [&](const Eigen::VectorXd& y) { return k(basis * y); });
    const double rel = detail::relative_gap(apply_toda(op, f), f, k.eigenvalue());
    const double tol = rs.semisimple_rank() == 1 ? 1e-6 : 1e-4;
    report["relative_residual"] = rel;
    report["eigenvalue"] = k.eigenvalue();
    report["tolerance"] = tol;
    pass = rel <= tol;
  } else if (mode == "conjugation") {
    const GridFunction f = GridFunction::centered(
        dim, points, spacing, center, [](const Eigen::VectorXd& y) { return Complex(std::exp(-y.squaredNorm()), 0.0); });
    const ResidualReport r = conjugation_identity_check(rs, f);
    report["check"] = r.to_json();
    pass = r.max_residual <= 1e-6;
  } else if (mode == "casimir") {
    if (!config.seed && !sec.contains("nu")) throw ConfigError("toda casimir with random functions needs a seed");
    std::optional<DualVector> nu;
    std::function<Complex(const Eigen::VectorXd&)> fn;
    if (sec.contains("nu")) {
      nu = ambient_nu(config, sec["nu"].get<std::vector<double>>(), "toda.nu");
      ClassOneOptions opts;
      opts.compute_residual = false;
      const WhittakerEvaluator k = class_one(rs, *nu, config.couplings(), opts);
      fn = [k, basis, rho = rs.rho](const Eigen::VectorXd& y) {
        const CartanVector h = basis * y;
        return std::exp(pairing(rho, h)) * k(h);
      };
    } else {
      std::mt19937_64 rng(*config.seed);
      fn = detail::band_limited(rng, dim);
    }
    const GridFunction f = GridFunction::centered(dim, points, spacing, center, fn);
    const CasimirReport r = radial_casimir_check(rs, config.chi, f, nu);
    report["check"] = r.to_json();
    pass = r.identity.relative <= 1e-8;
  } else if (mode == "commutator") {
    if (!config.seed) throw ConfigError("toda commutator uses random functions and needs a seed");
    std::mt19937_64 rng(*config.seed);
    const TodaOperator op = TodaOperator::make(rs, config.couplings());
    const int count = sec.value("functions", 10);
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
      const GridFunction f = GridFunction::centered(dim, points, spacing, center, detail::band_limited(rng, dim));
      worst = std::max(worst, d1_commutator(op, f));
    }
    report["functions"] = count;
    report["max_relative_commutator"] = worst;
    pass = worst <= 1e-8;
  } else {
    throw ConfigError("toda.mode " + mode + " is not known");
  }
  report["passed"] = pass;
  detail::write_text(config.out_dir / "toda_report.json", detail::dump(report));
  return pass ? kExitPass : kExitTolerance;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const RunConfig& config) {
  const nlohmann::json sec = config.section("verify");
  std::vector<std::string> suites = verify_suite_names();
  if (sec.contains("suites")) suites = sec["suites"].get<std::vector<std::string>>();
  for (const auto& s : suites)
    if ((s == "inequalities" || s == "identities" || s == "commutation") && !config.seed)
      throw ConfigError("suite " + s + " samples random inputs; a seed is required (config \"seed\" or --seed)");

  nlohmann::json report = {{"group", config.raw["group"]},
                           {"seed", config.seed ? nlohmann::json(*config.seed) : nlohmann::json(nullptr)},
                           {"suites", nlohmann::json::array()}};
  bool all = true;
  for (const auto& s : suites) {
    nlohmann::json r = run_verify_suite(config, s);
    all = all && r.value("passed", false);
    std::cerr << (r.value("passed", false) ? "PASS " : "FAIL ") << s << "\n";
    report["suites"].push_back(std::move(r));
  }
  report["passed"] = all;
  detail::write_text(config.out_dir / "verify_report.json", detail::dump(report));
  return all ? kExitPass : kExitTolerance;
}

// ---------------------------------------------------------------- plot script

std::string plot_script() {
  return R"PY(#!/usr/bin/env python3
"""Plots the CSV tables written by wtoda (density, whittaker, transform, trajectory)."""
import csv
import sys

import matplotlib.pyplot as plt


def read(path):
    with open(path) as fh:
        rows = [line for line in fh if not line.startswith("#")]
    reader = csv.DictReader(rows)
    return reader.fieldnames, list(reader)


def main(paths):
    for path in paths:
        names, rows = read(path)
        x = names[0]
        fig, ax = plt.subplots()
        for name in names[1:]:
            try:
                ys = [float(r[name]) for r in rows]
            except ValueError:
                continue
            ax.plot([float(r[x]) for r in rows], ys, label=name)
        ax.set_xlabel(x)
        ax.legend()
        fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=120)


if __name__ == "__main__":
    main(sys.argv[1:])
)PY";
}

// ---------------------------------------------------------------- entry point

int run_cli(int argc, char** argv) {
  CLI::App app{"Whittaker functions, Plancherel density and quantum Toda checks for SL(n)/GL(n)"};
  app.require_subcommand(0, 1);
  std::string plot_path;
  app.add_option("--emit-plot-script", plot_path, "write a matplotlib script for the CSV outputs and exit");

  std::string config_path, out_dir, mode;
  std::optional<std::uint64_t> seed;
  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Sub subs[] = {{"density", "c-function and Plancherel density table", cmd_density},
                      {"whittaker", "class-one Whittaker function samples", cmd_whittaker},
                      {"transform", "Whittaker transform: forward|inverse|roundtrip|parseval", cmd_transform},
                      {"toda", "Toda flow and operator identity checks", cmd_toda},
                      {"verify", "run the verification suites", cmd_verify}};
  std::vector<CLI::App*> handles;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--seed", seed, "RNG seed (overrides the config)");
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    if (std::string(s.name) == "transform")
      sub->add_option("mode", mode, "forward|inverse|roundtrip|parseval")
          ->check(CLI::IsMember({"forward", "inverse", "roundtrip", "parseval"}));
    handles.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }
  if (!plot_path.empty()) {
    detail::write_text(plot_path, plot_script());
    if (app.get_subcommands().empty()) return kExitPass;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitConfig;
  }
  try {
    RunConfig config = RunConfig::load(config_path);
    if (seed) config.seed = seed;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (!mode.empty()) config.raw["transform"]["mode"] = mode;
    for (std::size_t i = 0; i < handles.size(); ++i)
      if (handles[i]->parsed()) return subs[i].run(config);
  } catch (const ConfigError& e) {
    std::cerr << "wtoda: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Refusal& e) {
    std::cerr << "wtoda: refused: " << e.what() << "\n";
    return kExitRefusal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "wtoda: invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "wtoda: error: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}

}  // namespace wtoda

#include "wtoda/spectral_transform.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <cmath>
#include <numbers>

namespace wtoda {

TestFunction gaussian(int dim) {
  return {"gaussian", dim, [](const Eigen::VectorXd& y) { return Complex(std::exp(-y.squaredNorm()), 0.0); }};
}

TestFunction gaussian_poly(int dim) {
  return {"gaussian_poly", dim, [](const Eigen::VectorXd& y) {
            return Complex((1.0 + y(0) - 0.5 * y(0) * y(0)) * std::exp(-y.squaredNorm()), 0.0);
          }};
}

TestFunction gaussian_odd(int dim) {
  return {"gaussian_odd", dim, [](const Eigen::VectorXd& y) { return Complex(y(0) * std::exp(-y.squaredNorm()), 0.0); }};
}

TestFunction shifted_gaussian(int dim, double shift) {
  return {"shifted_gaussian", dim, [shift](const Eigen::VectorXd& y) {
            Eigen::VectorXd c = Eigen::VectorXd::Zero(y.size());
            c(0) = shift;
            return Complex(std::exp(-(y - c).squaredNorm()), 0.0);
          }};
}

TestFunction bump(int dim, double a, double radius) {
  return {"bump", dim, [a, radius](const Eigen::VectorXd& y) {
            const double r2 = y.squaredNorm() / (radius * radius);
            if (r2 >= 1.0) return Complex(0.0, 0.0);
            return Complex(std::exp(a - a / (1.0 - r2)), 0.0);
          }};
}

TestFunction zero_function(int dim) {
  return {"zero", dim, [](const Eigen::VectorXd&) { return Complex(0.0, 0.0); }};
}

TestFunction gallery(const std::string& name, int dim) {
  if (name == "gaussian") return gaussian(dim);
  if (name == "gaussian_poly") return gaussian_poly(dim);
  if (name == "gaussian_odd") return gaussian_odd(dim);
  if (name == "shifted_gaussian") return shifted_gaussian(dim);
  if (name == "bump") return bump(dim);
  if (name == "zero") return zero_function(dim);
  throw std::invalid_argument("unknown test function '" + name + "'");
}

void TransformQuadrature::validate() const {
  if (!(h_radius > 0.0) || !(nu_radius > 0.0)) throw std::invalid_argument("transform quadrature: radii must be > 0");
  if (h_nodes_per_dim < 8 || nu_nodes_per_dim < 8)
    throw std::invalid_argument("transform quadrature: need at least 8 nodes per dimension");
  if (!(tol > 0.0)) throw std::invalid_argument("transform quadrature: tol must be > 0");
  if (!(nu_offset >= 0.0 && nu_offset < nu_radius)) throw std::invalid_argument("transform quadrature: bad nu_offset");
}

TransformQuadrature TransformQuadrature::halved_h() const {
  TransformQuadrature q = *this;
  q.h_nodes_per_dim = std::max(4, h_nodes_per_dim / 2);
  return q;
}

TransformQuadrature TransformQuadrature::halved_nu() const {
  TransformQuadrature q = *this;
  q.nu_nodes_per_dim = std::max(4, nu_nodes_per_dim / 2);
  return q;
}

nlohmann::json to_json(const TransformQuadrature& q) {
  return {{"h_radius", q.h_radius},   {"h_nodes_per_dim", q.h_nodes_per_dim},
          {"nu_radius", q.nu_radius}, {"nu_nodes_per_dim", q.nu_nodes_per_dim},
          {"rule", to_string(q.rule)}, {"tol", q.tol},
          {"nu_offset", q.nu_offset}};
}

TransformQuadrature transform_quadrature_from_json(const nlohmann::json& j, const TransformQuadrature& defaults) {
  TransformQuadrature q = defaults;
  if (j.contains("h_radius")) q.h_radius = j.at("h_radius").get<double>();
  if (j.contains("h_nodes_per_dim")) q.h_nodes_per_dim = j.at("h_nodes_per_dim").get<int>();
  if (j.contains("nu_radius")) q.nu_radius = j.at("nu_radius").get<double>();
  if (j.contains("nu_nodes_per_dim")) q.nu_nodes_per_dim = j.at("nu_nodes_per_dim").get<int>();
  if (j.contains("rule")) q.rule = rule_from_string(j.at("rule").get<std::string>());
  if (j.contains("tol")) q.tol = j.at("tol").get<double>();
  if (j.contains("nu_offset")) q.nu_offset = j.at("nu_offset").get<double>();
  q.validate();
  return q;
}

TransformQuadrature default_transform_quadrature(int rank) {
  TransformQuadrature q;
  if (rank >= 2) {
    q.h_radius = 4.5;
    q.h_nodes_per_dim = 48;
    q.nu_radius = 8.0;
    q.nu_nodes_per_dim = 32;
  }
  return q;
}

EvaluatorFactory class_one_factory(const RootSystem& rs, const std::vector<double>& couplings, int order) {
  ClassOneOptions opts;
  opts.order = order;
  opts.compute_residual = false;
  return [rs, couplings, opts](const DualVector& nu) { return class_one(rs, nu, couplings, opts); };
}

namespace {

Rule interval_rule(RuleKind kind, int nodes, double a, double b) {
  if (kind == RuleKind::TanhSinh) return tanh_sinh(nodes % 2 == 0 ? nodes + 1 : nodes, a, b);
  return composite_gauss_legendre(nodes, a, b);
}

void require_sl(const RootSystem& rs, const char* who) {
  if (rs.variant != Variant::SL)
    throw Refusal(std::string(who) + ": transforms act on SL(n); the GL center contributes a Euclidean Fourier factor");
  if (rs.semisimple_rank() > 2) throw Refusal(std::string(who) + ": rank > 2 is not supported");
}

}  // namespace

std::vector<SpectralNode> spectral_grid(const PlancherelDensity& pd, const TransformQuadrature& quad) {
  quad.validate();
  const RootSystem& rs = pd.rs;
  require_sl(rs, "spectral_grid");
  const Eigen::MatrixXd basis = rs.orthonormal_basis();
  const double weyl = static_cast<double>(weyl_group(rs).size());
  std::vector<SpectralNode> nodes;
  const Rule radial = interval_rule(quad.rule, quad.nu_nodes_per_dim, quad.nu_offset, quad.nu_radius);
  if (rs.semisimple_rank() == 1) {
    for (std::size_t i = 0; i < radial.size(); ++i) {
      SpectralNode node;
      node.eta = Eigen::VectorXd::Constant(1, radial.nodes[i]);
      node.nu = basis * node.eta;
      node.weight = weyl * radial.weights[i];
      nodes.push_back(node);
    }
  } else {
    // the chamber (nu, alpha_1) > 0, (nu, alpha_2) > 0 is the wedge 30..90 degrees
    const Rule angular = interval_rule(quad.rule, std::max(8, quad.nu_nodes_per_dim / 2), std::numbers::pi / 6.0,
                                       std::numbers::pi / 2.0);
    for (std::size_t i = 0; i < radial.size(); ++i) {
      for (std::size_t j = 0; j < angular.size(); ++j) {
        SpectralNode node;
        const double r = radial.nodes[i], th = angular.nodes[j];
        node.eta = Eigen::Vector2d(r * std::cos(th), r * std::sin(th));
        node.nu = basis * node.eta;
        node.weight = weyl * radial.weights[i] * angular.weights[j] * r;
        nodes.push_back(node);
      }
    }
  }
  for (auto& node : nodes) node.mu = mu_density(pd, node.nu).value;
  return nodes;
}

HNodes h_grid(int dim, const TransformQuadrature& quad) {
  const Rule r = interval_rule(quad.rule, quad.h_nodes_per_dim, -quad.h_radius, quad.h_radius);
  HNodes out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    Eigen::VectorXd y(dim);
    double w = 1.0;
    for (int d = 0; d < dim; ++d) {
      y(d) = r.nodes[idx[static_cast<std::size_t>(d)]];
      w *= r.weights[idx[static_cast<std::size_t>(d)]];
    }
    out.points.push_back(y);
    out.weights.push_back(w);
    int d = dim - 1;
    while (d >= 0) {
      if (++idx[static_cast<std::size_t>(d)] < r.size()) break;
      idx[static_cast<std::size_t>(d)] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return out;
}

nlohmann::json TransformResult::metadata() const {
  double max_err = 0.0, max_val = 0.0;
  int flagged_count = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    max_err = std::max(max_err, errors[i]);
    max_val = std::max(max_val, std::abs(values[i]));
    flagged_count += flagged[i] ? 1 : 0;
  }
  return {{"quadrature", to_json(quad)}, {"nodes", values.size()},   {"max_error", max_err},
          {"max_value", max_val},       {"flagged", flagged_count}, {"skipped", skipped}};
}

namespace {

struct SampledU {
  std::vector<Eigen::VectorXd> ambient;
  std::vector<Complex> wu;  // weight * u, zero where u is negligible
};

SampledU sample_u(const TestFunction& u, const HNodes& nodes, const Eigen::MatrixXd& basis) {
  SampledU s;
  std::vector<Complex> vals(nodes.points.size());
  double mx = 0.0;
  for (std::size_t i = 0; i < nodes.points.size(); ++i) {
    vals[i] = u(nodes.points[i]);
    mx = std::max(mx, std::abs(vals[i]));
  }
  for (std::size_t i = 0; i < nodes.points.size(); ++i) {
    if (std::abs(vals[i]) <= 1e-18 * mx || vals[i] == Complex{0.0, 0.0}) continue;
    s.ambient.push_back(basis * nodes.points[i]);
    s.wu.push_back(nodes.weights[i] * vals[i]);
  }
  return s;
}

Complex integrate_against(const WhittakerEvaluator& k, const SampledU& s) {
  std::vector<Complex> terms(s.wu.size());
  for (std::size_t i = 0; i < s.wu.size(); ++i) terms[i] = s.wu[i] * std::conj(k(s.ambient[i]));
  return pairwise_sum(terms);
}

}  // namespace

TransformResult forward_transform(const TestFunction& u, const EvaluatorFactory& factory, const PlancherelDensity& pd,
                                  const TransformQuadrature& quad, const TransformResult* reuse) {
  quad.validate();
  require_sl(pd.rs, "forward_transform");
  const int dim = pd.rs.semisimple_rank();
  if (u.dim != dim) throw std::invalid_argument("forward_transform: test function dimension differs from dim a");
  const Eigen::MatrixXd basis = pd.rs.orthonormal_basis();
  TransformResult res;
  res.quad = quad;
  res.nodes = reuse ? reuse->nodes : spectral_grid(pd, quad);
  const std::size_t count = res.nodes.size();
  const SampledU fine = sample_u(u, h_grid(dim, quad), basis);
  const SampledU coarse = sample_u(u, h_grid(dim, quad.halved_h()), basis);
  res.values.assign(count, Complex{0.0, 0.0});
  res.errors.assign(count, 0.0);
  res.flagged.assign(count, 0);
  std::vector<std::optional<WhittakerEvaluator>> evals(count);
  std::vector<char> refused(count, 0);
  parallel_for(count, [&](std::size_t k) {
    try {
      evals[k] = reuse ? reuse->evaluators[k] : factory(res.nodes[k].nu);
    } catch (const Refusal&) {
      refused[k] = 1;
      return;
    }
    const Complex f = integrate_against(*evals[k], fine);
    const Complex c = integrate_against(*evals[k], coarse);
    res.values[k] = f;
    res.errors[k] = std::abs(f - c);
  });
  double scale = 0.0;
  for (const auto& v : res.values) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < count; ++k) {
    if (refused[k]) {
      ++res.skipped;
      res.flagged[k] = 1;
      continue;
    }
    res.flagged[k] = res.errors[k] > quad.tol * scale;
  }
  // refused nodes are dropped from the grid (measure-zero degeneracies)
  if (res.skipped > 0) {
    TransformResult kept;
    kept.quad = res.quad;
    kept.skipped = res.skipped;
    for (std::size_t k = 0; k < count; ++k) {
      if (refused[k]) continue;
      kept.nodes.push_back(res.nodes[k]);
      kept.values.push_back(res.values[k]);
      kept.errors.push_back(res.errors[k]);
      kept.flagged.push_back(res.flagged[k]);
      kept.evaluators.push_back(*evals[k]);
    }
    return kept;
  }
  for (auto& e : evals) res.evaluators.push_back(*e);
  return res;
}

Reconstruction inverse_transform(const TransformResult& coeffs, const EvaluatorFactory& factory,
                                 const PlancherelDensity& pd, const std::vector<Eigen::VectorXd>& points,
                                 const TransformResult* coarse) {
  require_sl(pd.rs, "inverse_transform");
  const Eigen::MatrixXd basis = pd.rs.orthonormal_basis();
  const std::size_t count = coeffs.nodes.size();
  std::vector<WhittakerEvaluator> evals = coeffs.evaluators;
  if (evals.size() != count) {
    evals.clear();
    for (const auto& node : coeffs.nodes) evals.push_back(factory(node.nu));
  }
  double nu_max = 0.0;
  for (const auto& node : coeffs.nodes) nu_max = std::max(nu_max, node.eta.norm());

  Reconstruction rec;
  rec.points = points;
  rec.values.assign(points.size(), Complex{0.0, 0.0});
  rec.errors.assign(points.size(), 0.0);
  std::vector<double> outer(points.size(), 0.0);
  parallel_for(points.size(), [&](std::size_t p) {
    const CartanVector h = basis * points[p];
    std::vector<Complex> terms(count);
    Complex tail{0.0, 0.0};
    for (std::size_t k = 0; k < count; ++k) {
      const SpectralNode& node = coeffs.nodes[k];
      terms[k] = node.weight * mu_density(pd, node.nu).value * coeffs.values[k] * evals[k](h);
      if (node.eta.norm() > 0.9 * nu_max) tail += terms[k];
    }
    rec.values[p] = pairwise_sum(terms);
    outer[p] = std::abs(tail);
    if (coarse) {
      std::vector<Complex> cterms(coarse->nodes.size());
      for (std::size_t k = 0; k < coarse->nodes.size(); ++k) {
        const SpectralNode& node = coarse->nodes[k];
        const WhittakerEvaluator ek = coarse->evaluators.size() == coarse->nodes.size() ? coarse->evaluators[k]
                                                                                          : factory(node.nu);
        cterms[k] = node.weight * mu_density(pd, node.nu).value * coarse->values[k] * ek(h);
      }
      rec.errors[p] = std::abs(rec.values[p] - pairwise_sum(cterms));
    }
  });
  rec.truncation_estimate = outer.empty() ? 0.0 : *std::max_element(outer.begin(), outer.end());
  double scale = 0.0;
  for (const auto& v : rec.values) scale = std::max(scale, std::abs(v));
  rec.flagged = rec.truncation_estimate > coeffs.quad.tol * std::max(scale, 1e-300);
  return rec;
}

RoundTrip round_trip(const TestFunction& u, const EvaluatorFactory& factory, const PlancherelDensity& pd,
                     const TransformQuadrature& quad, const std::vector<Eigen::VectorXd>& points) {
  const TransformResult fine = forward_transform(u, factory, pd, quad);
  const TransformResult coarse = forward_transform(u, factory, pd, quad.halved_nu());
  RoundTrip rt;
  rt.reconstruction = inverse_transform(fine, factory, pd, points, &coarse);
  double umax = 0.0;
  for (const auto& y : points) {
    rt.exact.push_back(u(y));
    umax = std::max(umax, std::abs(rt.exact.back()));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double err = std::abs(rt.reconstruction.values[i] - rt.exact[i]);
    rt.max_abs_err = std::max(rt.max_abs_err, err);
    if (std::abs(rt.exact[i]) >= 1e-3 * umax)
      rt.max_pointwise_rel = std::max(rt.max_pointwise_rel, err / std::abs(rt.exact[i]));
  }
  rt.max_rel_err = umax > 0.0 ? rt.max_abs_err / umax : rt.max_abs_err;
  return rt;
}

CalibrationFit fit_calibration(const TestFunction& u, const EvaluatorFactory& factory, const RootSystem& rs,
                               const TransformQuadrature& quad, const std::vector<Eigen::VectorXd>& points) {
  const PlancherelDensity unit{rs, 1.0};
  const TransformResult fwd = forward_transform(u, factory, unit, quad);
  const Reconstruction v = inverse_transform(fwd, factory, unit, points);
  double num = 0.0, den = 0.0, umax = 0.0;
  std::vector<Complex> exact;
  for (std::size_t i = 0; i < points.size(); ++i) {
    exact.push_back(u(points[i]));
    num += (std::conj(v.values[i]) * exact.back()).real();
    den += std::norm(v.values[i]);
    umax = std::max(umax, std::abs(exact.back()));
  }
  CalibrationFit fit;
  if (!(den > 0.0)) return fit;
  fit.constant = num / den;
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) worst = std::max(worst, std::abs(fit.constant * v.values[i] - exact[i]));
  fit.residual = umax > 0.0 ? worst / umax : worst;
  return fit;
}

ParsevalResult parseval_check(const TestFunction& u, const TestFunction& w, const EvaluatorFactory& factory,
                              const PlancherelDensity& pd, const TransformQuadrature& quad) {
  const int dim = pd.rs.semisimple_rank();
  auto h_side = [&](const TransformQuadrature& q, const TestFunction& a, const TestFunction& b) {
    const HNodes nodes = h_grid(dim, q);
    std::vector<Complex> terms(nodes.points.size());
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = nodes.weights[i] * a(nodes.points[i]) * std::conj(b(nodes.points[i]));
    return pairwise_sum(terms);
  };
  ParsevalResult r;
  r.lhs = h_side(quad, u, w);
  r.lhs_err = std::abs(r.lhs - h_side(quad.halved_h(), u, w));
  const double norm_u = std::sqrt(std::abs(h_side(quad, u, u)));
  const double norm_w = std::sqrt(std::abs(h_side(quad, w, w)));

  auto nu_side = [&](const TransformQuadrature& q, double* bar) {
    const TransformResult fu = forward_transform(u, factory, pd, q);
    const TransformResult fw = forward_transform(w, factory, pd, q, &fu);
    std::vector<Complex> terms(fu.nodes.size());
    double err = 0.0, nu_max = 0.0;
    for (const auto& node : fu.nodes) nu_max = std::max(nu_max, node.eta.norm());
    Complex tail{0.0, 0.0};
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const double m = fu.nodes[k].weight * fu.nodes[k].mu;
      terms[k] = m * fu.values[k] * std::conj(fw.values[k]);
      err += m * (std::abs(fu.values[k]) * fw.errors[k] + std::abs(fw.values[k]) * fu.errors[k]);
      if (fu.nodes[k].eta.norm() > 0.9 * nu_max) tail += terms[k];
    }
    if (bar) *bar = err + std::abs(tail);
    return pairwise_sum(terms);
  };
  double coef_err = 0.0;
  r.rhs = nu_side(quad, &coef_err);
  r.rhs_err = coef_err + std::abs(r.rhs - nu_side(quad.halved_nu(), nullptr));
  const double scale = norm_u * norm_w;
  r.gap = scale > 0.0 ? std::abs(r.lhs - r.rhs) / scale : std::abs(r.lhs - r.rhs);
  r.within_bars = std::abs(r.lhs - r.rhs) <= r.lhs_err + r.rhs_err + 1e-15 * std::max(scale, 1.0);
  return r;
}

nlohmann::json MembershipReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : entries)
    rows.push_back({{"m", std::vector<double>(e.m.data(), e.m.data() + e.m.size())},
                    {"d", e.d},
                    {"derivative_order", e.derivative_order},
                    {"sup_r", e.sup_r},
                    {"sup_2r", e.sup_2r},
                    {"stable", e.stable}});
  return {{"passed", passed}, {"entries", rows}};
}

std::vector<Eigen::VectorXd> box_points(int dim, double radius, int per_dim) {
  std::vector<Eigen::VectorXd> pts;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    Eigen::VectorXd y(dim);
    for (int d = 0; d < dim; ++d)
      y(d) = per_dim == 1 ? 0.0 : -radius + 2.0 * radius * idx[static_cast<std::size_t>(d)] / (per_dim - 1);
    pts.push_back(y);
    int d = dim - 1;
    while (d >= 0) {
      if (++idx[static_cast<std::size_t>(d)] < per_dim) break;
      idx[static_cast<std::size_t>(d)] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return pts;
}

MembershipReport membership_check(const TestFunction& u, const RootSystem& rs, const std::vector<Eigen::VectorXd>& m_list,
                                  const std::vector<double>& d_list, double probe_radius) {
  const int dim = u.dim;
  const Eigen::MatrixXd basis = rs.orthonormal_basis();
  if (basis.cols() != dim) throw std::invalid_argument("membership_check: dimension mismatch");
  const int per_dim = dim == 1 ? 401 : 61;
  const double fd = 1e-3;
  struct Sample {
    Eigen::VectorXd y;
    CartanVector h;
    std::array<double, 3> deriv;  // |u|, max |d_i u|, max |d_i d_j u|
  };
  auto probe = [&](double radius, int count) {
    const auto pts = box_points(dim, radius, count);
    std::vector<Sample> out(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      const Eigen::VectorXd& y = pts[i];
      Sample s{y, basis * y, {std::abs(u(y)), 0.0, 0.0}};
      for (int a = 0; a < dim; ++a) {
        Eigen::VectorXd ea = Eigen::VectorXd::Zero(dim);
        ea(a) = fd;
        s.deriv[1] = std::max(s.deriv[1], std::abs((u(y + ea) - u(y - ea)) / (2.0 * fd)));
        for (int b = 0; b < dim; ++b) {
          Eigen::VectorXd eb = Eigen::VectorXd::Zero(dim);
          eb(b) = fd;
          const Complex d2 = (u(y + ea + eb) - u(y + ea - eb) - u(y - ea + eb) + u(y - ea - eb)) / (4.0 * fd * fd);
          s.deriv[2] = std::max(s.deriv[2], std::abs(d2));
        }
      }
      out[i] = s;
    });
    return out;
  };
  const auto inner = probe(probe_radius, per_dim);
  const auto outer = probe(2.0 * probe_radius, 2 * per_dim - 1);

  MembershipReport rep;
  rep.passed = true;
  for (const auto& m : m_list) {
    if (m.size() != rs.semisimple_rank()) throw std::invalid_argument("membership_check: m needs one entry per simple root");
    for (double d : d_list) {
      for (int order = 0; order <= 2; ++order) {
        auto sup = [&](const std::vector<Sample>& samples) {
          double best = 0.0;
          for (const auto& s : samples) {
            double expo = 0.0;
            for (Eigen::Index i = 0; i < m.size(); ++i)
              expo += m(i) * pairing(rs.simple_root(static_cast<std::size_t>(i)), s.h);
            const double v = std::exp(expo) * std::pow(1.0 + s.h.norm(), d) * s.deriv[static_cast<std::size_t>(order)];
            best = std::max(best, std::isfinite(v) ? v : std::numeric_limits<double>::infinity());
          }
          return best;
        };
        SeminormEntry e{m, d, order, sup(inner), sup(outer), false};
        e.stable = std::isfinite(e.sup_2r) && e.sup_2r <= e.sup_r * (1.0 + 1e-6) + 1e-300;
        rep.passed = rep.passed && e.stable;
        rep.entries.push_back(e);
      }
    }
  }
  return rep;
}

}  // namespace wtoda

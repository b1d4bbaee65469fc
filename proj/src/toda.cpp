#include "wtoda/toda.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace wtoda {

std::size_t GridFunction::flat(const std::vector<int>& idx) const {
  std::size_t k = 0;
  for (std::size_t d = 0; d < shape.size(); ++d) k = k * static_cast<std::size_t>(shape[d]) + static_cast<std::size_t>(idx[d]);
  return k;
}

std::vector<int> GridFunction::unflat(std::size_t k) const {
  std::vector<int> idx(shape.size());
  for (std::size_t d = shape.size(); d-- > 0;) {
    idx[d] = static_cast<int>(k % static_cast<std::size_t>(shape[d]));
    k /= static_cast<std::size_t>(shape[d]);
  }
  return idx;
}

Eigen::VectorXd GridFunction::coords(std::size_t k) const {
  const std::vector<int> idx = unflat(k);
  Eigen::VectorXd y(dim());
  for (int d = 0; d < dim(); ++d)
    y(d) = origin[static_cast<std::size_t>(d)] + idx[static_cast<std::size_t>(d)] * spacing[static_cast<std::size_t>(d)];
  return y;
}

GridFunction GridFunction::sample(const std::vector<double>& origin, const std::vector<double>& spacing,
                                  const std::vector<int>& shape, const std::function<Complex(const Eigen::VectorXd&)>& f) {
  if (origin.size() != shape.size() || spacing.size() != shape.size())
    throw std::invalid_argument("GridFunction: origin, spacing and shape must agree in length");
  GridFunction g{origin, spacing, shape, {}, {}};
  std::size_t total = 1;
  for (int s : shape) {
    if (s < 1) throw std::invalid_argument("GridFunction: empty axis");
    total *= static_cast<std::size_t>(s);
  }
  g.values.resize(total);
  g.valid.assign(total, 1);
  parallel_for(total, [&](std::size_t k) { g.values[k] = f(g.coords(k)); });
  return g;
}

GridFunction GridFunction::centered(int dim, int points, double spacing, const Eigen::VectorXd& center,
                                    const std::function<Complex(const Eigen::VectorXd&)>& f) {
  std::vector<double> origin(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) origin[static_cast<std::size_t>(d)] = center(d) - 0.5 * (points - 1) * spacing;
  return sample(origin, std::vector<double>(static_cast<std::size_t>(dim), spacing),
                std::vector<int>(static_cast<std::size_t>(dim), points), f);
}

TodaOperator TodaOperator::make(const RootSystem& rs, const std::vector<double>& couplings) {
  if (static_cast<int>(couplings.size()) != rs.semisimple_rank())
    throw std::invalid_argument("TodaOperator: need one coupling per simple root");
  return TodaOperator{rs, couplings, rs.orthonormal_basis()};
}

double TodaOperator::potential(const Eigen::VectorXd& y) const {
  const Eigen::VectorXd h = basis * y;
  double v = 0.0;
  for (std::size_t i = 0; i < couplings.size(); ++i) v += couplings[i] * std::exp(2.0 * pairing(rs.simple_root(i), h));
  return v;
}

namespace {

void require_grid(const GridFunction& f, double max_spacing, const char* who) {
  for (std::size_t d = 0; d < f.shape.size(); ++d) {
    if (f.shape[d] < 11) throw Refusal(std::string(who) + ": need at least 11 points per axis");
    if (!(f.spacing[d] > 0.0 && f.spacing[d] <= max_spacing))
      throw Refusal(std::string(who) + ": grid spacing " + std::to_string(f.spacing[d]) + " outside (0, " +
                    std::to_string(max_spacing) + "]");
  }
}

// Fourth-order first or second derivative along axis d; returns false near the boundary.
bool axis_derivative(const GridFunction& f, const std::vector<int>& idx, std::size_t d, int order, Complex& out) {
  if (idx[d] < 2 || idx[d] > f.shape[d] - 3) return false;
  std::vector<int> j = idx;
  auto at = [&](int off) {
    j[d] = idx[d] + off;
    return f.values[f.flat(j)];
  };
  const double h = f.spacing[d];
  if (order == 1) {
    out = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
  } else {
    out = (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * h * h);
  }
  return true;
}

GridFunction like(const GridFunction& f) {
  GridFunction g = f;
  std::fill(g.values.begin(), g.values.end(), Complex{0.0, 0.0});
  return g;
}

GridFunction pointwise(const GridFunction& f, const std::function<Complex(const Eigen::VectorXd&, Complex)>& op) {
  GridFunction g = f;
  for (std::size_t k = 0; k < f.size(); ++k) g.values[k] = op(f.coords(k), f.values[k]);
  return g;
}

double max_abs(const GridFunction& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f.valid[k]) m = std::max(m, std::abs(f.values[k]));
  return m;
}

ResidualReport compare(const GridFunction& a, const GridFunction& b, const GridFunction& ref) {
  ResidualReport r;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a.valid[k] && b.valid[k])) continue;
    r.max_residual = std::max(r.max_residual, std::abs(a.values[k] - b.values[k]));
  }
  double scale = 0.0;
  for (const auto& v : ref.values) scale = std::max(scale, std::abs(v));
  r.relative = scale > 0.0 ? r.max_residual / scale : r.max_residual;
  r.grid = ref.shape;
  r.spacing = ref.spacing;
  return r;
}

}  // namespace

GridFunction laplacian(const GridFunction& f) {
  GridFunction g = like(f);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const std::vector<int> idx = f.unflat(k);
    Complex total{0.0, 0.0};
    bool ok = f.valid[k] != 0;
    for (std::size_t d = 0; d < f.shape.size() && ok; ++d) {
      Complex v;
      ok = axis_derivative(f, idx, d, 2, v);
      total += v;
    }
    g.values[k] = ok ? total : Complex{0.0, 0.0};
    g.valid[k] = ok;
  }
  return g;
}

GridFunction directional_derivative(const GridFunction& f, const Eigen::VectorXd& v) {
  GridFunction g = like(f);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const std::vector<int> idx = f.unflat(k);
    Complex total{0.0, 0.0};
    bool ok = f.valid[k] != 0;
    for (std::size_t d = 0; d < f.shape.size() && ok; ++d) {
      if (v(static_cast<Eigen::Index>(d)) == 0.0) continue;
      Complex dv;
      ok = axis_derivative(f, idx, d, 1, dv);
      total += v(static_cast<Eigen::Index>(d)) * dv;
    }
    g.values[k] = ok ? total : Complex{0.0, 0.0};
    g.valid[k] = ok;
  }
  return g;
}

GridFunction apply_toda(const TodaOperator& op, const GridFunction& f) {
  require_grid(f, op.max_spacing, "apply_toda");
  if (f.dim() != op.basis.cols()) throw std::invalid_argument("apply_toda: grid dimension differs from dim a");
  GridFunction lap = laplacian(f);
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!lap.valid[k]) continue;
    lap.values[k] = -0.5 * lap.values[k] + op.potential(f.coords(k)) * f.values[k];
  }
  return lap;
}

nlohmann::json ResidualReport::to_json() const {
  return {{"max_residual", max_residual}, {"relative", relative}, {"grid", grid}, {"spacing", spacing}, {"stencil", stencil}};
}

nlohmann::json CasimirReport::to_json() const {
  return {{"identity", identity.to_json()}, {"stencil", stencil.to_json()}, {"eigen_residual", eigen_residual}};
}

ResidualReport conjugation_identity_check(const RootSystem& rs, const GridFunction& f) {
  const Eigen::MatrixXd basis = rs.orthonormal_basis();
  if (f.dim() != basis.cols()) throw std::invalid_argument("conjugation_identity_check: grid dimension differs from dim a");
  require_grid(f, 1e-2, "conjugation_identity_check");
  const Eigen::VectorXd rho_y = basis.transpose() * rs.rho;
  const double rho_rho = dual_inner(rs.rho, rs.rho);
  auto rho_of = [&](const Eigen::VectorXd& y) { return rho_y.dot(y); };

  const GridFunction g = pointwise(f, [&](const Eigen::VectorXd& y, Complex v) { return std::exp(-rho_of(y)) * v; });
  GridFunction lhs = laplacian(g);
  for (std::size_t k = 0; k < lhs.size(); ++k) lhs.values[k] *= std::exp(rho_of(lhs.coords(k)));

  const GridFunction lap = laplacian(f);
  const GridFunction drho = directional_derivative(f, rho_y);
  GridFunction rhs = like(f);
  for (std::size_t k = 0; k < f.size(); ++k) {
    rhs.valid[k] = lap.valid[k] && drho.valid[k];
    rhs.values[k] = rho_rho * f.values[k] - 2.0 * drho.values[k] + lap.values[k];
  }
  return compare(lhs, rhs, f);
}

CasimirReport radial_casimir_check(const RootSystem& rs, const CharacterData& chi, const GridFunction& f,
                                   const std::optional<DualVector>& nu) {
  const std::size_t l = static_cast<std::size_t>(rs.semisimple_rank());
  if (chi.xi.size() != l) throw std::invalid_argument("radial_casimir_check: need one xi per simple root");
  // coupling bookkeeping: q_alpha = -(dchi(X_alpha))^2 = xi_alpha^2
  std::vector<double> q(l);
  for (std::size_t i = 0; i < l; ++i) {
    const Complex dchi(0.0, chi.xi[i]);
    q[i] = -(dchi * dchi).real();
  }
  TodaOperator op = TodaOperator::make(rs, q);
  const Eigen::VectorXd rho_y = op.basis.transpose() * rs.rho;
  const double rho_rho = dual_inner(rs.rho, rs.rho);
  auto rho_of = [&](const Eigen::VectorXd& y) { return rho_y.dot(y); };
  auto bracket_potential = [&](const Eigen::VectorXd& y) {
    const Eigen::VectorXd h = op.basis * y;
    double v = 0.0;
    for (std::size_t i = 0; i < l; ++i) v += 2.0 * chi.xi[i] * chi.xi[i] * std::exp(2.0 * pairing(rs.simple_root(i), h));
    return v;
  };

  const GridFunction g = pointwise(f, [&](const Eigen::VectorXd& y, Complex v) { return std::exp(-rho_of(y)) * v; });
  GridFunction lhs = apply_toda(op, g);
  for (std::size_t k = 0; k < lhs.size(); ++k) lhs.values[k] *= -2.0 * std::exp(rho_of(lhs.coords(k)));

  GridFunction rhs = laplacian(g);
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    const Eigen::VectorXd y = rhs.coords(k);
    rhs.values[k] = std::exp(rho_of(y)) * (rhs.values[k] - bracket_potential(y) * g.values[k]);
  }

  const GridFunction lap = laplacian(f);
  const GridFunction drho = directional_derivative(f, rho_y);
  GridFunction direct = like(f);
  for (std::size_t k = 0; k < f.size(); ++k) {
    direct.valid[k] = lap.valid[k] && drho.valid[k];
    direct.values[k] = lap.values[k] - 2.0 * drho.values[k] + rho_rho * f.values[k] -
                       bracket_potential(f.coords(k)) * f.values[k];
  }

  CasimirReport rep;
  rep.identity = compare(lhs, rhs, f);
  rep.stencil = compare(lhs, direct, f);
  if (nu) {
    const double nn = dual_inner(*nu, *nu);
    double worst = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
      if (lhs.valid[k]) worst = std::max(worst, std::abs(lhs.values[k] + nn * f.values[k]));
    const double scale = max_abs(f);
    rep.eigen_residual = scale > 0.0 ? worst / scale : worst;
  }
  return rep;
}

GridFunction d1_apply(const RootSystem& rs, const GridFunction& f) {
  if (rs.variant != Variant::GL)
    throw Refusal("d1_apply: SL(n) has no center direction; D1 acts only through the GL(n) center");
  if (f.dim() != rs.n) throw std::invalid_argument("d1_apply: grid dimension differs from n");
  const double h = f.spacing[0];
  for (double s : f.spacing)
    if (s != h) throw std::invalid_argument("d1_apply: the diagonal stencil needs equal spacing on all axes");
  GridFunction g = like(f);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const std::vector<int> idx = f.unflat(k);
    bool ok = f.valid[k] != 0;
    for (std::size_t d = 0; d < idx.size(); ++d) ok = ok && idx[d] >= 2 && idx[d] <= f.shape[d] - 3;
    if (!ok) {
      g.valid[k] = 0;
      continue;
    }
    auto at = [&](int off) {
      std::vector<int> j = idx;
      for (int& v : j) v += off;
      const std::size_t fl = f.flat(j);
      ok = ok && f.valid[fl];
      return f.values[fl];
    };
    // derivative along (1,...,1) with unit step h per coordinate
    const Complex v = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
    g.values[k] = ok ? v : Complex{0.0, 0.0};
    g.valid[k] = ok;
  }
  return g;
}

Complex d1_symbol(const DualVector& nu) { return Complex(0.0, nu.sum()); }

double d1_commutator(const TodaOperator& op, const GridFunction& f) {
  const GridFunction a = d1_apply(op.rs, apply_toda(op, f));
  const GridFunction b = apply_toda(op, d1_apply(op.rs, f));
  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!(a.valid[k] && b.valid[k])) continue;
    worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
    scale = std::max(scale, std::abs(a.values[k]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double toda_hamiltonian(const ClassicalState& s, const std::vector<double>& couplings) {
  double h = 0.5 * s.p.squaredNorm();
  for (Eigen::Index i = 0; i + 1 < s.q.size(); ++i)
    h += couplings[static_cast<std::size_t>(i)] * std::exp(2.0 * (s.q(i) - s.q(i + 1)));
  return h;
}

FlowResult classical_flow(const ClassicalState& state, const std::vector<double>& couplings, double dt, int steps,
                          int record_every) {
  const Eigen::Index n = state.q.size();
  if (state.p.size() != n) throw std::invalid_argument("classical_flow: q and p differ in length");
  if (static_cast<Eigen::Index>(couplings.size()) + 1 != n && n > 0)
    throw std::invalid_argument("classical_flow: need n - 1 couplings");
  for (double c : couplings)
    if (!(c > 0.0)) throw std::invalid_argument("classical_flow: couplings must be positive");
  if (!(std::isfinite(dt) && dt > 0.0) || steps < 0 || record_every < 1)
    throw std::invalid_argument("classical_flow: need finite dt > 0, steps >= 0, record_every >= 1");

  constexpr double kMaxExponent = 700.0;
  ClassicalState s = state;
  FlowResult out;
  const double h0 = toda_hamiltonian(s, couplings);
  const double p0 = s.p.sum();

  auto force = [&](Eigen::VectorXd& f) {
    f.setZero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const double e = 2.0 * (s.q(i) - s.q(i + 1));
      if (e > kMaxExponent) return false;
      const double g = 2.0 * couplings[static_cast<std::size_t>(i)] * std::exp(e);
      f(i) -= g;
      f(i + 1) += g;
    }
    return true;
  };
  auto record = [&](double t) {
    const double energy = toda_hamiltonian(s, couplings);
    out.rows.push_back({t, s.q, s.p, energy, s.p.sum()});
    out.energy_drift = std::max(out.energy_drift, std::abs(energy - h0) / std::max(std::abs(h0), 1e-300));
    out.momentum_drift = std::max(out.momentum_drift, std::abs(s.p.sum() - p0) / std::max(1.0, std::abs(p0)));
  };

  const double cbrt2 = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cbrt2), w0 = -cbrt2 / (2.0 - cbrt2);
  const std::array<double, 3> sub = {w1, w0, w1};
  Eigen::VectorXd f(n);
  record(0.0);
  if (!force(f)) {
    out.halted = true;
    out.diagnostic = "exponent 2(q_i - q_{i+1}) exceeds 700 at t = 0";
    return out;
  }
  for (int step = 1; step <= steps; ++step) {
    for (double w : sub) {
      const double tau = w * dt;
      s.p += 0.5 * tau * f;
      s.q += tau * s.p;
      if (!force(f)) {
        out.halted = true;
        out.diagnostic = "exponent 2(q_i - q_{i+1}) exceeds 700 at step " + std::to_string(step);
        record(step * dt);
        return out;
      }
      s.p += 0.5 * tau * f;
    }
    if (step % record_every == 0 || step == steps) record(step * dt);
  }
  return out;
}

}  // namespace wtoda

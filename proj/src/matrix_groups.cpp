#include "wtoda/matrix_groups.hpp"

#include <algorithm>
#include <bit>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace wtoda {

namespace {

constexpr int kMaxN = 6;

Eigen::MatrixXd reversal(int n) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, n - 1 - i) = 1.0;
  return p;
}

void require_square(const Eigen::MatrixXd& g, const char* who) {
  if (g.rows() != g.cols() || g.rows() < 1)
    throw std::invalid_argument(std::string(who) + ": expected a square matrix");
}

}  // namespace

GroupElement GroupElement::make(const Eigen::MatrixXd& m, GroupTag tag, double tol) {
  require_square(m, "GroupElement");
  const double det = m.determinant();
  if (tag == GroupTag::GLPlus && !(det > 0.0))
    throw std::invalid_argument("GroupElement: GL+ element needs det > 0, got " + std::to_string(det));
  if (tag == GroupTag::SL && std::abs(det - 1.0) > tol)
    throw std::invalid_argument("GroupElement: SL element needs det = 1, got " + std::to_string(det));
  return GroupElement{m, tag};
}

IwasawaNbarAK iwasawa_nbar_ak(const Eigen::MatrixXd& g) {
  require_square(g, "iwasawa_nbar_ak");
  const Eigen::Index n = g.rows();
  // g^T = Q R  =>  g = R^T Q^T with R^T lower triangular
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g.transpose());
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::VectorXd diag = r.diagonal().cwiseAbs();
  const double cond = diag.minCoeff() > 0.0 ? diag.maxCoeff() / diag.minCoeff()
                                            : std::numeric_limits<double>::infinity();
  if (!(cond < 1e14)) throw SingularMatrix("iwasawa_nbar_ak: numerically singular matrix", cond);

  Eigen::VectorXd sign(n);
  for (Eigen::Index i = 0; i < n; ++i) sign(i) = r(i, i) < 0.0 ? -1.0 : 1.0;
  const Eigen::MatrixXd lower = r.transpose() * sign.asDiagonal();
  IwasawaNbarAK out;
  out.a = lower.diagonal();
  out.nbar = lower * out.a.cwiseInverse().asDiagonal();
  out.k = sign.asDiagonal() * q.transpose();
  return out;
}

IwasawaNbarAK iwasawa_nbar_ak(const GroupElement& g) { return iwasawa_nbar_ak(g.entries); }

IwasawaNAK iwasawa_nak(const Eigen::MatrixXd& g) {
  require_square(g, "iwasawa_nak");
  const int n = static_cast<int>(g.rows());
  // conjugating by the order-reversing permutation swaps upper and lower
  const Eigen::MatrixXd p = reversal(n);
  const IwasawaNbarAK lower = iwasawa_nbar_ak(p * g * p);
  IwasawaNAK out;
  out.n = p * lower.nbar * p;
  out.a = lower.a.reverse();
  out.k = p * lower.k * p;
  return out;
}

IwasawaNAK iwasawa_nak(const GroupElement& g) { return iwasawa_nak(g.entries); }

Eigen::MatrixXd theta(const Eigen::MatrixXd& g) { return g.transpose().inverse(); }

double a_power(const Eigen::VectorXd& a, const DualVector& lambda) {
  return std::exp(pairing(lambda, a.array().log().matrix()));
}

Eigen::MatrixXd adjoint_matrix(const Eigen::MatrixXd& g) {
  require_square(g, "adjoint_matrix");
  const Eigen::Index n = g.rows();
  const Eigen::MatrixXd ginv = g.inverse();
  Eigen::MatrixXd ad(n * n, n * n);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index a = 0; a < n; ++a) {
      // g E_ab g^{-1} = g.col(a) * ginv.row(b)
      const Eigen::MatrixXd img = g.col(a) * ginv.row(b);
      ad.col(a + n * b) = Eigen::Map<const Eigen::VectorXd>(img.data(), n * n);
    }
  }
  return ad;
}

double norm_bars(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  const Eigen::Index m = n * (n - 1) / 2;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(adjoint_matrix(g));
  const Eigen::VectorXd s = svd.singularValues();  // descending
  double log_prod = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) log_prod += std::log(s(i));
  return std::exp(log_prod);
}

double norm_doublebar(const Eigen::MatrixXd& g) {
  require_square(g, "norm_doublebar");
  const double det = g.determinant();
  if (!(det > 0.0)) throw std::invalid_argument("norm_doublebar: needs det > 0");
  const double n = static_cast<double>(g.rows());
  return std::exp(std::abs(std::log(det)) / std::sqrt(n)) * std::sqrt(norm_bars(g));
}

double wedge_top_norm(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  const Eigen::MatrixXd ad_inv = adjoint_matrix(g.inverse());
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) cols.push_back(i + n * j);  // E_ij, i > j
  Eigen::MatrixXd v(n * n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = ad_inv.col(cols[c]);
  // norm of v_1 ^ ... ^ v_m is sqrt(det Gram)
  return std::sqrt((v.transpose() * v).determinant());
}

DualVector rho_from_adjoint(const RootSystem& rs) {
  const int n = rs.n;
  DualVector rho(n);
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h(k, k) = 1.0;
    double trace = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
        e(i, j) = 1.0;
        const Eigen::MatrixXd br = h * e - e * h;
        trace += br(i, j);  // diagonal entry of ad(h) in the basis E_ij
      }
    }
    rho(k) = 0.5 * trace;
  }
  if (rs.variant == Variant::SL) return remove_trace(rho);
  return rho;
}

bool CharacterData::generic() const {
  if (xi.empty()) return false;
  return std::all_of(xi.begin(), xi.end(), [](double x) { return x != 0.0; });
}

Complex CharacterData::inverse_at(const Eigen::MatrixXd& n) const {
  double phase = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i)
    phase += xi[i] * n(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1));
  return std::polar(1.0, -phase);
}

nlohmann::json to_json(const OracleQuadrature& q) {
  return {{"rule", to_string(q.rule)}, {"radius", q.radius}, {"nodes_per_dim", q.nodes_per_dim}, {"tol", q.tol}};
}

OracleQuadrature oracle_quadrature_from_json(const nlohmann::json& j) {
  OracleQuadrature q;
  if (j.contains("rule")) q.rule = rule_from_string(j.at("rule").get<std::string>());
  if (j.contains("radius")) q.radius = j.at("radius").get<double>();
  if (j.contains("nodes_per_dim")) q.nodes_per_dim = j.at("nodes_per_dim").get<int>();
  if (j.contains("tol")) q.tol = j.at("tol").get<double>();
  if (!(q.radius > 0.0) || q.nodes_per_dim < 3 || !(q.tol > 0.0))
    throw std::invalid_argument("oracle quadrature: need radius > 0, nodes_per_dim >= 3, tol > 0");
  return q;
}

namespace {

// determinant of a k x k block by partial-pivot elimination
double small_det(std::array<double, kMaxN * kMaxN> a, int k) {
  auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r * kMaxN + c)]; };
  double det = 1.0;
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r)
      if (std::abs(at(r, c)) > std::abs(at(piv, c))) piv = r;
    if (at(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < k; ++j) std::swap(at(c, j), at(piv, j));
      det = -det;
    }
    det *= at(c, c);
    for (int r = c + 1; r < k; ++r) {
      const double f = at(r, c) / at(c, c);
      for (int j = c + 1; j < k; ++j) at(r, j) -= f * at(c, j);
    }
  }
  return det;
}

}  // namespace

void log_a_of_unipotent(int n, const double* coords, double* log_a) {
  if (n < 1 || n > kMaxN) throw std::invalid_argument("log_a_of_unipotent: unsupported n");
  // a_1 ... a_k = sqrt(det Gram of the first k rows), the Gram determinant
  // expanded as a sum of squared k x k minors; the leading minor is 1
  std::array<double, kMaxN * kMaxN> m{};
  auto at = [&](int r, int c) -> double& { return m[static_cast<std::size_t>(r * kMaxN + c)]; };
  for (int i = 0; i < n; ++i) at(i, i) = 1.0;
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) at(i, j) = coords[idx++];
  double prev = 0.0;  // log det G_{k-1}
  for (int k = 1; k < n; ++k) {
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != k) continue;
      std::array<double, kMaxN * kMaxN> block{};
      int col = 0;
      for (int c = 0; c < n; ++c) {
        if (!(mask & (1u << c))) continue;
        for (int r = 0; r < k; ++r) block[static_cast<std::size_t>(r * kMaxN + col)] = at(r, c);
        ++col;
      }
      const double d = small_det(block, k);
      total += d * d;
    }
    const double cur = std::log(total);
    log_a[k - 1] = 0.5 * (cur - prev);
    prev = cur;
  }
  log_a[n - 1] = -0.5 * prev;
}

namespace {

void require_convergence(const RootSystem& rs, const SpectralParam& nu, const char* who) {
  if (nu.size() != rs.n)
    throw std::invalid_argument(std::string(who) + ": nu must have " + std::to_string(rs.n) + " coordinates");
  for (std::size_t k = 0; k < rs.positive_roots.size(); ++k) {
    const double re = dual_inner(nu, rs.root(k).cast<Complex>()).real();
    if (!(re < 0.0))
      throw Refusal(std::string(who) + ": Re(nu, alpha) = " + std::to_string(re) +
                    " >= 0 for a positive root; the integral over N does not converge");
  }
}

// Sum over the tensor grid of rule^d of weight * f(point). Returns the fine
// sum and, for nested rules, the step-2h sum from the same evaluations.
template <typename F>
std::pair<Complex, Complex> tensor_sum(const Rule& rule, int dim, bool nested, F&& f) {
  const std::size_t m = rule.size();
  const std::size_t half = (m - 1) / 2;
  auto in_coarse = [&](std::size_t i) { return nested && (i % 2 == half % 2); };
  std::vector<Complex> fine(m), coarse(m);
  parallel_for(m, [&](std::size_t outer) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
    std::vector<double> x(static_cast<std::size_t>(dim));
    idx[0] = outer;
    Complex fsum{0.0, 0.0}, csum{0.0, 0.0};
    while (true) {
      double w = 1.0;
      bool coarse_member = true;
      for (int d = 0; d < dim; ++d) {
        const std::size_t i = idx[static_cast<std::size_t>(d)];
        x[static_cast<std::size_t>(d)] = rule.nodes[i];
        w *= rule.weights[i];
        coarse_member = coarse_member && in_coarse(i);
      }
      const Complex v = f(x.data());
      fsum += w * v;
      if (coarse_member) csum += std::pow(2.0, dim) * w * v;
      int d = dim - 1;
      while (d >= 1) {
        if (++idx[static_cast<std::size_t>(d)] < m) break;
        idx[static_cast<std::size_t>(d)] = 0;
        --d;
      }
      if (d < 1) break;
    }
    fine[outer] = fsum;
    coarse[outer] = csum;
  });
  return {pairwise_sum(fine), pairwise_sum(coarse)};
}

QuadratureValue n_integral(const RootSystem& rs, const CharacterData* chi, const SpectralParam& nu,
                           const OracleQuadrature& quad) {
  const int n = rs.n;
  const int dim = rs.nilradical_dim();
  const Eigen::VectorXcd shift = nu - rs.rho.cast<Complex>();
  std::vector<int> super_index;  // coordinate slot of each n_{i,i+1}
  for (int i = 0; i + 1 < n; ++i) super_index.push_back(static_cast<int>(rs.root_index(i, i + 1)));

  // n = 3: chart y -> (n12, n13, n23) with n23 = b = y2, u = sqrt(1 + b^2) y1,
  // n12 = sqrt(G) / (1 + b^2) y0 + b u / (1 + b^2), n13 = n12 b - u, G = 1 + b^2 + u^2.
  // It follows the ridge n13 = n12 n23 and its width; Jacobian sqrt(1 + y1^2).
  auto integrand = [&](const double* y) {
    std::array<double, kMaxN * (kMaxN - 1) / 2> xs{};
    const double* x = y;
    double log_jac = 0.0;
    if (n == 3) {
      const double b = y[2];
      const double s = 1.0 + b * b;
      const double u = std::sqrt(s) * y[1];
      const double g = s + u * u;
      xs[0] = std::sqrt(g) / s * y[0] + b * u / s;
      xs[2] = b;
      xs[1] = xs[0] * b - u;
      x = xs.data();
      log_jac = 0.5 * std::log1p(y[1] * y[1]);
    }
    std::array<double, kMaxN> log_a{};
    log_a_of_unipotent(n, x, log_a.data());
    Complex expo{log_jac, 0.0};
    for (int i = 0; i < n; ++i) expo += shift(i) * log_a[static_cast<std::size_t>(i)];
    if (chi) {
      double phase = 0.0;
      for (std::size_t i = 0; i < chi->xi.size(); ++i) phase += chi->xi[i] * x[super_index[i]];
      expo -= Complex(0.0, phase);
    }
    return std::exp(expo);
  };

  int nodes = quad.nodes_per_dim;
  if (nodes % 2 == 0) ++nodes;
  QuadratureValue out;
  const Rule rule = real_line_rule(quad.rule, nodes, quad.radius);
  if (quad.rule == RuleKind::TanhSinh) {
    const auto [fine, coarse] = tensor_sum(rule, dim, true, integrand);
    out.value = fine;
    out.error = std::abs(fine - coarse);
    out.evaluations = static_cast<std::size_t>(std::pow(rule.size(), dim));
  } else {
    const Rule half_rule = real_line_rule(quad.rule, std::max(3, nodes / 2), quad.radius);
    const Complex fine = tensor_sum(rule, dim, false, integrand).first;
    const Complex coarse = tensor_sum(half_rule, dim, false, integrand).first;
    out.value = fine;
    out.error = std::abs(fine - coarse);
    out.evaluations = static_cast<std::size_t>(std::pow(rule.size(), dim) + std::pow(half_rule.size(), dim));
  }
  out.flagged = !(out.error <= quad.tol * std::abs(out.value));
  return out;
}

}  // namespace

QuadratureValue c_function_quadrature(const RootSystem& rs, const SpectralParam& nu, const OracleQuadrature& quad) {
  require_convergence(rs, nu, "c_function_quadrature");
  if (rs.n > kMaxN) throw Refusal("c_function_quadrature: n too large for a tensor rule");
  return n_integral(rs, nullptr, nu, quad);
}

QuadratureValue jacquet_quadrature(const RootSystem& rs, const CharacterData& chi, const SpectralParam& nu,
                                   const OracleQuadrature& quad) {
  require_convergence(rs, nu, "jacquet_quadrature");
  if (rs.n > kMaxN) throw Refusal("jacquet_quadrature: n too large for a tensor rule");
  if (static_cast<int>(chi.xi.size()) != rs.n - 1)
    throw std::invalid_argument("jacquet_quadrature: character needs one value per simple root");
  return n_integral(rs, &chi, nu, quad);
}

std::vector<ProbeRow> beuzart_plessis_probe(const RootSystem& rs, const CharacterData& chi, double epsilon,
                                            const std::vector<double>& radii) {
  if (!chi.generic()) throw Refusal("beuzart_plessis_probe: character is not generic");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("beuzart_plessis_probe: need 0 < epsilon <= 1");
  if (radii.empty() || !std::is_sorted(radii.begin(), radii.end()) || !(radii.front() > 0.0))
    throw std::invalid_argument("beuzart_plessis_probe: radii must be positive and increasing");
  std::vector<ProbeRow> rows;
  if (rs.n == 2) {
    // ker chi is trivial: point mass at the identity
    for (std::size_t i = 0; i < radii.size(); ++i)
      rows.push_back({radii[i], 1.0, i == 0 ? std::numeric_limits<double>::quiet_NaN() : 0.0});
    return rows;
  }
  if (rs.n != 3) throw Refusal("beuzart_plessis_probe: only n = 2, 3 are supported");

  const double norm = std::hypot(chi.xi[0], chi.xi[1]);
  const double va = chi.xi[1] / norm, vb = -chi.xi[0] / norm;
  const double power = -(1.0 - epsilon);
  auto integrand = [&](double s, double t) {
    const double a = s * va, b = s * vb;
    const std::array<double, 3> coords = {a, t + 0.5 * a * b, b};  // (n12, n13, n23)
    std::array<double, 3> log_a{};
    log_a_of_unipotent(3, coords.data(), log_a.data());
    double rho_log = 0.0;
    for (int i = 0; i < 3; ++i) rho_log += rs.rho(i) * log_a[static_cast<std::size_t>(i)];
    return std::exp(power * rho_log);
  };

  // breakpoints: dyadic scales from 1/8 plus the radii, mirrored
  const double r_max = radii.back();
  std::vector<double> pos = radii;
  for (double s = 0.125; s < r_max; s *= 2.0) pos.push_back(s);
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  std::vector<double> edges;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) edges.push_back(-*it);
  edges.push_back(0.0);
  edges.insert(edges.end(), pos.begin(), pos.end());

  struct Panel {
    Rule rule;
    double extent;  // max |x| over the panel
  };
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    const int sub = 4;
    for (int k = 0; k < sub; ++k) {
      const double a = lo + (hi - lo) * k / sub, b = lo + (hi - lo) * (k + 1) / sub;
      panels.push_back({gauss_legendre(12, a, b), std::max(std::abs(lo), std::abs(hi))});
    }
  }
  auto bin_of = [&](double extent) {
    for (std::size_t r = 0; r < radii.size(); ++r)
      if (extent <= radii[r] * (1.0 + 1e-12)) return static_cast<int>(r);
    return -1;
  };
  const std::size_t np = panels.size();
  std::vector<std::vector<double>> per_row(np, std::vector<double>(radii.size(), 0.0));
  parallel_for(np, [&](std::size_t i) {
    const Panel& ps = panels[i];
    for (std::size_t j = 0; j < np; ++j) {
      const Panel& pt = panels[j];
      const int bin = bin_of(std::max(ps.extent, pt.extent));
      if (bin < 0) continue;
      double cell = 0.0;
      for (std::size_t a = 0; a < ps.rule.size(); ++a)
        for (std::size_t b = 0; b < pt.rule.size(); ++b)
          cell += ps.rule.weights[a] * pt.rule.weights[b] * integrand(ps.rule.nodes[a], pt.rule.nodes[b]);
      per_row[i][static_cast<std::size_t>(bin)] += cell;
    }
  });
  double running = 0.0;
  for (std::size_t r = 0; r < radii.size(); ++r) {
    std::vector<double> col(np);
    for (std::size_t i = 0; i < np; ++i) col[i] = per_row[i][r];
    const double inc = pairwise_sum(col);
    running += inc;
    rows.push_back({radii[r], running, r == 0 ? std::numeric_limits<double>::quiet_NaN() : inc});
  }
  return rows;
}

Eigen::MatrixXd random_sl(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  double det = g.determinant();
  if (det < 0.0) {
    g.row(0) *= -1.0;
    det = -det;
  }
  return g / std::pow(det, 1.0 / n);
}

RhoGrowthReport rho_growth_check(const RootSystem& rs, int pairs, std::uint64_t seed, double slack) {
  std::mt19937_64 rng(seed);
  RhoGrowthReport rep;
  rep.pairs = pairs;
  const DualVector& rho = rs.rho;
  for (int p = 0; p < pairs; ++p) {
    const Eigen::MatrixXd x = random_sl(rs.n, rng);
    const Eigen::MatrixXd g = random_sl(rs.n, rng);
    const double log_lhs = -pairing(rho, iwasawa_nbar_ak(x * g).a.array().log().matrix());
    const double log_rhs = 0.5 * std::log(norm_bars(g)) - pairing(rho, iwasawa_nbar_ak(x).a.array().log().matrix());
    const double ratio = std::exp(log_lhs - log_rhs);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > 1.0 + slack) ++rep.violations;
  }
  return rep;
}

}  // namespace wtoda

#include "wtoda/whittaker.hpp"

#include "wtoda/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wtoda {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Compositions of k into `parts` non-negative integers, lexicographically descending.
void compositions(int k, int parts, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    current.push_back(k);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int first = k; first >= 0; --first) {
    current.push_back(first);
    compositions(k - first, parts - 1, current, out);
    current.pop_back();
  }
}

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// h in the trace-zero subspace with alpha_i(h) = t_i for the simple roots.
CartanVector from_simple_coordinates(const RootSystem& rs, const Eigen::VectorXd& t) {
  const int n = rs.n;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i + 1 < n; ++i) {
    a.row(i) = rs.simple_root(static_cast<std::size_t>(i)).transpose();
    b(i) = t(i);
  }
  a.row(n - 1).setOnes();
  b(n - 1) = 0.0;
  return a.partialPivLu().solve(b);
}

}  // namespace

std::vector<double> couplings_from_character(const CharacterData& chi) {
  if (!chi.generic()) throw Refusal("couplings_from_character: character is not generic (some xi_alpha = 0)");
  std::vector<double> q;
  for (double x : chi.xi) q.push_back(x * x);
  return q;
}

std::size_t SeriesSolution::position(const std::vector<int>& m) const {
  for (std::size_t i = 0; i < indices.size(); ++i)
    if (indices[i] == m) return i;
  throw std::out_of_range("SeriesSolution::position: multi-index beyond truncation order");
}

SeriesSolution build_series(const RootSystem& rs, const SpectralParam& lambda, const std::vector<double>& couplings,
                            int order) {
  const int l = rs.semisimple_rank();
  if (static_cast<int>(couplings.size()) != l)
    throw std::invalid_argument("build_series: need one coupling per simple root");
  if (lambda.size() != rs.n) throw std::invalid_argument("build_series: lambda has the wrong dimension");
  if (order < 2) throw std::invalid_argument("build_series: order must be >= 2");
  SeriesSolution s;
  s.rs = rs;
  s.lambda = lambda;
  s.couplings = couplings;
  s.truncation_order = order;

  // dense lookup over the box [0, order]^l
  const std::size_t side = static_cast<std::size_t>(order) + 1;
  std::size_t box = 1;
  for (int i = 0; i < l; ++i) box *= side;
  std::vector<long> lookup(box, -1);
  auto key = [&](const std::vector<int>& m) {
    std::size_t k = 0;
    for (int i = l - 1; i >= 0; --i) k = k * side + static_cast<std::size_t>(m[static_cast<std::size_t>(i)]);
    return k;
  };

  std::vector<Eigen::VectorXd> simple;
  for (int i = 0; i < l; ++i) simple.push_back(rs.simple_root(static_cast<std::size_t>(i)));

  for (int k = 0; k <= order; ++k) {
    s.shell_start.push_back(s.indices.size());
    std::vector<std::vector<int>> shell;
    std::vector<int> cur;
    compositions(k, l, cur, shell);
    for (const auto& m : shell) {
      Complex a{0.0, 0.0};
      if (k == 0) {
        a = 1.0;
      } else {
        Eigen::VectorXd mhat = Eigen::VectorXd::Zero(rs.n);
        for (int i = 0; i < l; ++i) mhat += m[static_cast<std::size_t>(i)] * simple[static_cast<std::size_t>(i)];
        const Complex denom = 4.0 * mhat.squaredNorm() + 4.0 * dual_inner(lambda, mhat.cast<Complex>());
        if (std::abs(denom) < 1e-10) {
          std::string idx;
          for (int v : m) idx += (idx.empty() ? "" : ",") + std::to_string(v);
          throw Refusal("build_series: vanishing denominator at m = (" + idx + "); lambda is resonant");
        }
        Complex rhs{0.0, 0.0};
        for (int i = 0; i < l; ++i) {
          if (m[static_cast<std::size_t>(i)] == 0) continue;
          std::vector<int> prev = m;
          --prev[static_cast<std::size_t>(i)];
          rhs += s.scaled_coefficients[static_cast<std::size_t>(lookup[key(prev)])];
        }
        a = 2.0 * rhs / denom;
      }
      double qpow = 1.0;
      for (int i = 0; i < l; ++i) qpow *= std::pow(couplings[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(i)]);
      lookup[key(m)] = static_cast<long>(s.indices.size());
      s.indices.push_back(m);
      s.scaled_coefficients.push_back(a);
      s.coefficients.push_back(a * qpow);
    }
  }
  s.shell_start.push_back(s.indices.size());

  auto shell_norm = [&](int k) {
    double total = 0.0;
    for (std::size_t i = s.shell_start[static_cast<std::size_t>(k)]; i < s.shell_start[static_cast<std::size_t>(k) + 1]; ++i)
      total += std::abs(s.coefficients[i]);
    return total;
  };
  const double c2 = shell_norm(order - 2), c1 = shell_norm(order - 1), c0 = shell_norm(order);
  if (c0 == 0.0) {
    s.coefficient_tail = 0.0;
  } else {
    const double r = std::max(c1 > 0.0 ? c0 / c1 : 1.0, c2 > 0.0 ? c1 / c2 : 1.0);
    s.coefficient_tail = r < 1.0 ? c0 * r / (1.0 - r) : std::numeric_limits<double>::infinity();
  }
  return s;
}

SeriesValue eval_series(const SeriesSolution& s, const CartanVector& h, double tol) {
  const int l = s.rs.semisimple_rank();
  const int order = s.truncation_order;
  if (h.size() != s.rs.n) throw std::invalid_argument("eval_series: h has the wrong dimension");
  std::vector<std::vector<double>> pw(static_cast<std::size_t>(l), std::vector<double>(static_cast<std::size_t>(order) + 1));
  for (int i = 0; i < l; ++i) {
    const double x = s.couplings[static_cast<std::size_t>(i)] *
                     std::exp(2.0 * pairing(s.rs.simple_root(static_cast<std::size_t>(i)), h));
    double p = 1.0;
    for (int j = 0; j <= order; ++j, p *= x) pw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = p;
  }
  const Complex lead = std::exp(dual_inner(s.lambda, h.cast<Complex>()));
  std::vector<Complex> shell;
  shell.reserve(static_cast<std::size_t>(order) + 1);
  double magnitude = 0.0;
  for (int k = 0; k <= order; ++k) {
    Complex sum{0.0, 0.0};
    double shell_mag = 0.0;
    for (std::size_t i = s.shell_start[static_cast<std::size_t>(k)]; i < s.shell_start[static_cast<std::size_t>(k) + 1]; ++i) {
      double u = 1.0;
      for (int a = 0; a < l; ++a)
        u *= pw[static_cast<std::size_t>(a)][static_cast<std::size_t>(s.indices[i][static_cast<std::size_t>(a)])];
      const Complex term = s.scaled_coefficients[i] * u;
      sum += term;
      shell_mag += std::abs(term);
    }
    shell.push_back(sum);
    magnitude += shell_mag;
    // three negligible shells in a row: the rest is below roundoff
    if (k >= 4 && shell_mag <= 1e-20 * magnitude) {
      const std::size_t n = shell.size();
      if (std::abs(shell[n - 2]) <= 1e-20 * magnitude && std::abs(shell[n - 3]) <= 1e-20 * magnitude) break;
    }
  }
  SeriesValue out;
  Complex total{0.0, 0.0};
  for (auto it = shell.rbegin(); it != shell.rend(); ++it) total += *it;
  const double scale = std::abs(lead);
  out.value = lead * total;
  out.magnitude = scale * magnitude;
  const std::size_t last = shell.size() - 1;
  const double s0 = std::abs(shell[last]);
  const double s1 = std::abs(shell[last - 1]);
  const double s2 = std::abs(shell[last - 2]);
  if (s0 == 0.0) {
    out.tail_bound = 0.0;
  } else {
    const double r = std::max(s1 > 0.0 ? s0 / s1 : 1.0, s2 > 0.0 ? s1 / s2 : 1.0);
    out.tail_bound = r < 1.0 ? scale * s0 * r / (1.0 - r) : std::numeric_limits<double>::infinity();
  }
  out.flagged = !(out.tail_bound <= tol * std::abs(out.value)) || !std::isfinite(std::abs(out.value));
  return out;
}

double whittaker_rank1(double nu_scalar, double q, double x) {
  if (!(q > 0.0)) throw std::invalid_argument("whittaker_rank1: coupling q must be > 0");
  const double sigma = nu_scalar / std::numbers::sqrt2;
  const double z = std::sqrt(q) * std::exp(std::numbers::sqrt2 * x);
  return bessel_k_imaginary_order(sigma, z);
}

std::string to_string(WhittakerMethod m) {
  switch (m) {
    case WhittakerMethod::Rank1ClosedForm: return "rank1_closed_form";
    case WhittakerMethod::SeriesClassOne: return "series_class_one";
    case WhittakerMethod::QuadratureOracle: return "quadrature_oracle";
  }
  return "unknown";
}

struct WhittakerEvaluator::Impl {
  RootSystem rs;
  DualVector nu;
  WhittakerMethod method = WhittakerMethod::SeriesClassOne;
  std::vector<double> couplings;
  WhittakerAccuracy accuracy;
  int order = 0;
  double eigenvalue = 0.0;

  // rank-1 closed form
  double sigma = 0.0;
  double prefactor = 0.0;
  double center = 0.0;  // sum(nu) / n

  // series
  std::vector<SeriesSolution> series;
  std::vector<Complex> weights;

  // oracle
  CharacterData chi;
  OracleQuadrature quad;

  WhittakerPoint evaluate(const CartanVector& h) const;
};

WhittakerPoint WhittakerEvaluator::Impl::evaluate(const CartanVector& h) const {
  if (h.size() != rs.n) throw std::invalid_argument("WhittakerEvaluator: h has the wrong dimension");
  WhittakerPoint out;
  const std::size_t l = static_cast<std::size_t>(rs.semisimple_rank());
  switch (method) {
    case WhittakerMethod::Rank1ClosedForm: {
      const double z = std::sqrt(couplings[0]) * std::exp(pairing(rs.simple_root(0), h));
      const double k = bessel_k_imaginary_order(sigma, z);
      out.value = std::polar(prefactor * k, center * h.sum());
      out.error_bound = 1e-13 * std::abs(out.value);
      return out;
    }
    case WhittakerMethod::SeriesClassOne: {
      double decay = 0.0;
      for (std::size_t i = 0; i < l; ++i) decay += std::sqrt(couplings[i]) * std::exp(pairing(rs.simple_root(i), h));
      if (decay > 40.0) {
        out.clamped = true;
        return out;
      }
      Complex total{0.0, 0.0};
      double magnitude = 0.0, tail = 0.0;
      for (std::size_t w = 0; w < series.size(); ++w) {
        const SeriesValue v = eval_series(series[w], h);
        total += weights[w] * v.value;
        magnitude += std::abs(weights[w]) * v.magnitude;
        tail += std::abs(weights[w]) * v.tail_bound;
      }
      const double roundoff = 8.0 * kEps * magnitude;
      if (std::abs(total) <= 100.0 * roundoff) {
        out.clamped = true;
        out.error_bound = std::max(std::abs(total), roundoff);
        return out;
      }
      out.error_bound = roundoff + tail;
      if (!(tail < std::abs(total))) {
        // unresolved truncation; only reached deep in the decaying region
        out.clamped = true;
        out.flagged = true;
        out.error_bound += std::abs(total);
        return out;
      }
      out.value = total;
      out.flagged = !(tail <= 1e-8 * std::abs(total) + 1e-14);
      return out;
    }
    case WhittakerMethod::QuadratureOracle: {
      CharacterData scaled = chi;
      for (std::size_t i = 0; i < l; ++i) scaled.xi[i] *= std::exp(pairing(rs.simple_root(i), h));
      const QuadratureValue j = jacquet_quadrature(rs, scaled, nu.cast<Complex>(), quad);
      const double lead = std::exp(pairing(nu, h));
      out.value = lead * j.value;
      out.error_bound = lead * j.error;
      out.flagged = j.flagged;
      return out;
    }
  }
  return out;
}

const RootSystem& WhittakerEvaluator::root_system() const { return impl_->rs; }
const DualVector& WhittakerEvaluator::nu() const { return impl_->nu; }
WhittakerMethod WhittakerEvaluator::method() const { return impl_->method; }
const std::vector<double>& WhittakerEvaluator::couplings() const { return impl_->couplings; }
const WhittakerAccuracy& WhittakerEvaluator::accuracy() const { return impl_->accuracy; }
int WhittakerEvaluator::order() const { return impl_->order; }
double WhittakerEvaluator::eigenvalue() const { return impl_->eigenvalue; }
bool WhittakerEvaluator::experimental() const {
  return impl_->method == WhittakerMethod::SeriesClassOne && impl_->rs.semisimple_rank() >= 2;
}

WhittakerPoint WhittakerEvaluator::evaluate(const CartanVector& h) const { return impl_->evaluate(h); }

namespace {

double residual_at_points(const WhittakerEvaluator::Impl& impl, const std::vector<CartanVector>& points, double spacing) {
  const Eigen::MatrixXd basis = impl.rs.orthonormal_basis();
  const std::size_t l = static_cast<std::size_t>(impl.rs.semisimple_rank());
  double max_res = 0.0, max_val = 0.0;
  for (const auto& p : points) {
    const WhittakerPoint f0 = impl.evaluate(p);
    if (f0.clamped) continue;
    Complex lap{0.0, 0.0};
    bool ok = true;
    for (Eigen::Index d = 0; d < basis.cols() && ok; ++d) {
      const Eigen::VectorXd e = basis.col(d) * spacing;
      const WhittakerPoint fp1 = impl.evaluate(p + e), fm1 = impl.evaluate(p - e);
      const WhittakerPoint fp2 = impl.evaluate(p + 2.0 * e), fm2 = impl.evaluate(p - 2.0 * e);
      ok = !(fp1.clamped || fm1.clamped || fp2.clamped || fm2.clamped);
      lap += (-fp2.value + 16.0 * fp1.value - 30.0 * f0.value + 16.0 * fm1.value - fm2.value) / (12.0 * spacing * spacing);
    }
    if (!ok) continue;
    double potential = 0.0;
    for (std::size_t i = 0; i < l; ++i) potential += impl.couplings[i] * std::exp(2.0 * pairing(impl.rs.simple_root(i), p));
    const Complex lc = -0.5 * lap + potential * f0.value;
    max_res = std::max(max_res, std::abs(lc - impl.eigenvalue * f0.value));
    max_val = std::max(max_val, std::abs(f0.value));
  }
  return max_val > 0.0 ? max_res / max_val : std::numeric_limits<double>::quiet_NaN();
}

std::vector<CartanVector> residual_probe_points(const RootSystem& rs) {
  const Eigen::MatrixXd basis = rs.orthonormal_basis();
  const Eigen::Index dim = basis.cols();
  std::vector<CartanVector> pts;
  std::vector<int> idx(static_cast<std::size_t>(dim), -1);
  while (true) {
    Eigen::VectorXd y(dim);
    for (Eigen::Index d = 0; d < dim; ++d) y(d) = idx[static_cast<std::size_t>(d)];
    pts.push_back(basis * y);
    Eigen::Index d = 0;
    while (d < dim) {
      if (++idx[static_cast<std::size_t>(d)] <= 1) break;
      idx[static_cast<std::size_t>(d)] = -1;
      ++d;
    }
    if (d == dim) break;
  }
  return pts;
}

}  // namespace

double WhittakerEvaluator::eigen_residual(const std::vector<CartanVector>& points, double spacing) const {
  return residual_at_points(*impl_, points, spacing);
}

nlohmann::json WhittakerEvaluator::to_json(std::size_t max_coefficients) const {
  nlohmann::json j;
  j["nu"] = std::vector<double>(impl_->nu.data(), impl_->nu.data() + impl_->nu.size());
  j["method"] = to_string(impl_->method);
  j["order"] = impl_->order;
  j["couplings"] = impl_->couplings;
  j["experimental"] = experimental();
  nlohmann::json coeffs = nlohmann::json::array();
  if (!impl_->series.empty()) {
    const SeriesSolution& s = impl_->series.front();
    for (std::size_t i = 0; i < std::min(max_coefficients, s.coefficients.size()); ++i)
      coeffs.push_back({{"m", s.indices[i]}, {"re", s.coefficients[i].real()}, {"im", s.coefficients[i].imag()}});
    nlohmann::json weights = nlohmann::json::array();
    for (const auto& w : impl_->weights) weights.push_back({w.real(), w.imag()});
    j["weyl_weights"] = weights;
  }
  j["coefficients"] = coeffs;
  j["accuracy"] = {{"eig_residual", impl_->accuracy.eig_residual},
                   {"tail_bound", impl_->accuracy.tail_bound},
                   {"coefficient_mismatch", impl_->accuracy.coefficient_mismatch}};
  return j;
}

double coefficient_gap(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("coefficient_gap: size mismatch");
  double gap = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    gap = std::max(gap, std::abs(a[i] / a[0] - b[i] / b[0]));
    scale = std::max(scale, std::abs(b[i] / b[0]));
  }
  return gap / scale;
}

std::vector<Complex> decaying_combination(const RootSystem& rs, const DualVector& nu,
                                          const std::vector<double>& couplings, int order) {
  const auto weyl = weyl_group(rs);
  std::vector<SeriesSolution> series;
  for (const auto& w : weyl)
    series.push_back(build_series(rs, w.apply(nu).cast<Complex>() * Complex(0.0, 1.0), couplings, order));
  const int l = rs.semisimple_rank();
  const int per_dim = l == 1 ? 200 : 23;
  std::vector<Eigen::VectorXcd> rows;
  std::vector<int> idx(static_cast<std::size_t>(l), 0);
  while (true) {
    Eigen::VectorXd t(l);
    for (int d = 0; d < l; ++d) t(d) = -2.0 + 5.5 * idx[static_cast<std::size_t>(d)] / (per_dim - 1) - 0.5 * std::log(couplings[static_cast<std::size_t>(d)]);
    const CartanVector h = from_simple_coordinates(rs, t);
    Eigen::VectorXcd row(static_cast<Eigen::Index>(series.size()));
    for (std::size_t w = 0; w < series.size(); ++w) row(static_cast<Eigen::Index>(w)) = eval_series(series[w], h).value;
    const double mx = row.cwiseAbs().maxCoeff();
    if (mx > 1e6 && mx < 1e11) rows.push_back(row / mx);
    int d = 0;
    while (d < l) {
      if (++idx[static_cast<std::size_t>(d)] < per_dim) break;
      idx[static_cast<std::size_t>(d)] = 0;
      ++d;
    }
    if (d == l) break;
  }
  if (rows.size() < series.size())
    throw Refusal("decaying_combination: too few sample points in the growth region");
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(series.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) a.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinV);
  const Eigen::VectorXcd v = svd.matrixV().col(a.cols() - 1);
  std::vector<Complex> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i) / v(0);
  return out;
}

WhittakerEvaluator class_one(const RootSystem& rs, const DualVector& nu_in, const std::vector<double>& couplings,
                             const ClassOneOptions& options) {
  const int l = rs.semisimple_rank();
  if (l > 2) throw Refusal("class_one: rank > 2 is not supported");
  if (nu_in.size() != rs.n) throw std::invalid_argument("class_one: nu has the wrong dimension");
  if (static_cast<int>(couplings.size()) != l) throw std::invalid_argument("class_one: need one coupling per simple root");
  for (double q : couplings)
    if (!(q > 0.0)) throw Refusal("class_one: couplings must be positive (generic character)");
  const DualVector nu = rs.variant == Variant::SL ? DualVector(remove_trace(nu_in)) : nu_in;
  for (std::size_t k = 0; k < rs.positive_roots.size(); ++k) {
    if (std::abs(dual_inner(nu, rs.root(k))) < 1e-9)
      throw Refusal("class_one: nu lies on a Weyl wall (non-regular), refused");
  }

  auto impl = std::make_shared<WhittakerEvaluator::Impl>();
  impl->rs = rs;
  impl->nu = nu;
  impl->couplings = couplings;
  impl->eigenvalue = 0.5 * dual_inner(nu, nu);
  impl->center = nu.sum() / rs.n;

  if (l == 1 && options.method == WhittakerMethod::Rank1ClosedForm) {
    impl->method = WhittakerMethod::Rank1ClosedForm;
    impl->sigma = dual_inner(nu, rs.simple_root(0)) / 2.0;
    impl->prefactor = 2.0 * std::exp(0.5 * log_cosh(std::numbers::pi * impl->sigma));
    impl->order = 0;
  } else {
    impl->method = WhittakerMethod::SeriesClassOne;
    impl->order = options.order > 0 ? options.order : (l == 1 ? 24 : 40);
    Eigen::VectorXd t0(l);
    for (int i = 0; i < l; ++i) t0(i) = std::log(std::sqrt(couplings[static_cast<std::size_t>(i)]) / 2.0);
    const CartanVector h0 = from_simple_coordinates(rs, t0);
    double log_n = 0.0;
    for (std::size_t k = 0; k < rs.positive_roots.size(); ++k)
      log_n += 0.5 * log_cosh(std::numbers::pi * dual_inner(nu, rs.root(k)) / 2.0);
    for (const auto& w : weyl_group(rs)) {
      const SpectralParam lambda = w.apply(nu).cast<Complex>() * Complex(0.0, 1.0);
      Complex log_g = dual_inner(lambda, h0.cast<Complex>());
      for (std::size_t k = 0; k < rs.positive_roots.size(); ++k) {
        const ComplexValue lg = log_gamma(-dual_inner(lambda, rs.root(k).cast<Complex>()) / 2.0);
        if (lg.pole) throw Refusal("class_one: Gamma pole in the Weyl coefficients");
        log_g += lg.value;
      }
      impl->weights.push_back(std::exp(log_n + log_g));
      impl->series.push_back(build_series(rs, lambda, couplings, impl->order));
      impl->accuracy.tail_bound = std::max(impl->accuracy.tail_bound, impl->series.back().coefficient_tail);
    }
    if (options.verify_coefficients) {
      const std::vector<Complex> numeric = decaying_combination(rs, nu, couplings);
      impl->accuracy.coefficient_mismatch = coefficient_gap(impl->weights, numeric);
    }
  }
  if (options.compute_residual) impl->accuracy.eig_residual = residual_at_points(*impl, residual_probe_points(rs), 1e-3);
  return WhittakerEvaluator(impl);
}

WhittakerEvaluator decaying_series(const RootSystem& rs, const DualVector& lambda, const std::vector<double>& couplings,
                                   int order) {
  const int l = rs.semisimple_rank();
  if (l > 2) throw Refusal("decaying_series: rank > 2 is not supported");
  if (lambda.size() != rs.n) throw std::invalid_argument("decaying_series: lambda has the wrong dimension");
  if (static_cast<int>(couplings.size()) != l)
    throw std::invalid_argument("decaying_series: need one coupling per simple root");
  for (double q : couplings)
    if (!(q > 0.0)) throw Refusal("decaying_series: couplings must be positive (generic character)");
  auto impl = std::make_shared<WhittakerEvaluator::Impl>();
  impl->rs = rs;
  impl->nu = lambda;
  impl->couplings = couplings;
  impl->eigenvalue = -0.5 * dual_inner(lambda, lambda);
  impl->method = WhittakerMethod::SeriesClassOne;
  impl->order = order > 0 ? order : (l == 1 ? 24 : 40);
  Eigen::VectorXd t0(l);
  for (int i = 0; i < l; ++i) t0(i) = std::log(std::sqrt(couplings[static_cast<std::size_t>(i)]) / 2.0);
  const CartanVector h0 = from_simple_coordinates(rs, t0);
  for (const auto& w : weyl_group(rs)) {
    const SpectralParam wl = w.apply(lambda).cast<Complex>();
    Complex log_g = dual_inner(wl, h0.cast<Complex>());
    for (std::size_t k = 0; k < rs.positive_roots.size(); ++k) {
      const ComplexValue lg = log_gamma(-dual_inner(wl, rs.root(k).cast<Complex>()) / 2.0);
      if (lg.pole) throw Refusal("decaying_series: Gamma pole in the Weyl coefficients (integral lambda)");
      log_g += lg.value;
    }
    impl->weights.push_back(std::exp(log_g));
    impl->series.push_back(build_series(rs, wl, couplings, impl->order));
    impl->accuracy.tail_bound = std::max(impl->accuracy.tail_bound, impl->series.back().coefficient_tail);
  }
  return WhittakerEvaluator(impl);
}

WhittakerEvaluator jacquet_evaluator(const RootSystem& rs, const CharacterData& chi, const DualVector& nu,
                                     const OracleQuadrature& quad) {
  if (!chi.generic()) throw Refusal("jacquet_evaluator: character is not generic");
  for (std::size_t k = 0; k < rs.positive_roots.size(); ++k)
    if (!(dual_inner(nu, rs.root(k)) < 0.0)) throw Refusal("jacquet_evaluator: need (nu, alpha) < 0 for all alpha > 0");
  auto impl = std::make_shared<WhittakerEvaluator::Impl>();
  impl->rs = rs;
  impl->nu = nu;
  impl->method = WhittakerMethod::QuadratureOracle;
  impl->couplings = couplings_from_character(chi);
  impl->chi = chi;
  impl->quad = quad;
  impl->eigenvalue = -0.5 * dual_inner(nu, nu);
  return WhittakerEvaluator(impl);
}

}  // namespace wtoda

#include "wtoda/plancherel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace wtoda {

ComplexValue log_c_alpha(const RootSystem& rs, std::size_t root, const SpectralParam& nu, int multiplicity_2alpha) {
  if (root >= rs.positive_roots.size()) throw std::out_of_range("c_alpha: root index out of range");
  const Vector<Complex> alpha = rs.root(root).cast<Complex>();
  const Complex s = dual_inner(nu, alpha) / dual_inner(alpha, alpha);
  const double m = rs.multiplicities[root];
  ComplexValue first = log_beta(Complex(0.5 * m), -s);
  if (multiplicity_2alpha <= 0 || first.pole) return first;
  const double m2 = multiplicity_2alpha;
  ComplexValue second = log_beta(Complex(0.5 * m2), -0.5 * s + 0.5 * (m + m2));
  if (second.pole) return second;
  return {first.value + second.value, false};
}

ComplexValue c_alpha(const RootSystem& rs, std::size_t root, const SpectralParam& nu, int multiplicity_2alpha) {
  const ComplexValue lc = log_c_alpha(rs, root, nu, multiplicity_2alpha);
  if (lc.pole) return lc;
  return {std::exp(lc.value), false};
}

ComplexValue log_c_function(const RootSystem& rs, const SpectralParam& nu) {
  if (nu.size() != rs.n) throw std::invalid_argument("c_function: nu has the wrong dimension");
  Complex total{0.0, 0.0};
  for (std::size_t k = 0; k < rs.positive_roots.size(); ++k) {
    const ComplexValue f = log_c_alpha(rs, k, nu);
    if (f.pole) return f;
    total += f.value;
  }
  return {total, false};
}

ComplexValue c_function(const RootSystem& rs, const SpectralParam& nu) {
  const ComplexValue lc = log_c_function(rs, nu);
  if (lc.pole) return lc;
  return {std::exp(lc.value), false};
}

DensityValue mu_density(const PlancherelDensity& pd, const DualVector& nu) {
  if (nu.size() != pd.rs.n) throw std::invalid_argument("mu_density: nu has the wrong dimension");
  const SpectralParam inu = nu.cast<Complex>() * Complex(0.0, 1.0);
  const ComplexValue lc = log_c_function(pd.rs, inu);
  DensityValue out;
  if (lc.pole) {
    out.at_pole = true;
    return out;
  }
  // c(-i nu) = conj c(i nu) for real nu
  const double log_mu = std::log(pd.calibration_constant) - 2.0 * lc.value.real();
  if (log_mu > std::log(kDensityCeiling)) {
    out.value = kDensityCeiling;
    out.clamped = true;
    return out;
  }
  out.value = std::exp(log_mu);
  return out;
}

double rank_one_calibration() { return 1.0 / (4.0 * std::numbers::pi); }

double closed_form_calibration(const RootSystem& rs) {
  const double l = rs.semisimple_rank();
  return 1.0 / (static_cast<double>(weyl_group(rs).size()) * std::pow(2.0 * std::numbers::pi, l));
}

PolynomialBound fit_polynomial_bound(const PlancherelDensity& pd, const std::vector<DualVector>& samples) {
  std::vector<double> xs, ys;
  for (const auto& nu : samples) {
    const double norm = nu.norm();
    const DensityValue mu = mu_density(pd, nu);
    if (norm < 1.0 || mu.at_pole || !(mu.value > 0.0)) continue;
    xs.push_back(std::log1p(norm));
    ys.push_back(std::log(mu.value));
  }
  PolynomialBound out;
  if (xs.size() < 2) return out;
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  out.exponent = sxx > 0.0 ? sxy / sxx : 0.0;
  double log_c = -std::numeric_limits<double>::infinity();
  out.max_log_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    log_c = std::max(log_c, ys[i] - out.exponent * xs[i]);
    out.max_log_ratio = std::max(out.max_log_ratio, ys[i] / xs[i]);
  }
  out.constant = std::exp(log_c);
  return out;
}

}  // namespace wtoda

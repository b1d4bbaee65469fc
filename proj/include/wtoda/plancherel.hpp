#pragma once

#include "wtoda/core_algebra.hpp"
#include "wtoda/special_functions.hpp"

namespace wtoda {

/// Gindikin-Karpelevic factor for the positive root with index `root`.
///
/// With s = (nu, alpha)/(alpha, alpha), c_alpha(nu) = B(m_alpha/2, -s) when
/// 2 alpha is not a root. The sign makes the product equal to the N-integral
/// int_N a(n)^{nu - rho} dn on its convergence region Re(nu, alpha) < 0.
/// `multiplicity_2alpha` > 0 selects the second branch,
/// B(m_alpha/2, -s) B(m_2alpha/2, -s/2 + (m_alpha + m_2alpha)/2).
ComplexValue c_alpha(const RootSystem& rs, std::size_t root, const SpectralParam& nu, int multiplicity_2alpha = 0);

/// log c_alpha, pole-tagged.
ComplexValue log_c_alpha(const RootSystem& rs, std::size_t root, const SpectralParam& nu,
                         int multiplicity_2alpha = 0);

/// c(nu) = product of c_alpha over the positive roots.
ComplexValue c_function(const RootSystem& rs, const SpectralParam& nu);
ComplexValue log_c_function(const RootSystem& rs, const SpectralParam& nu);

struct PlancherelDensity {
  RootSystem rs;
  double calibration_constant = 1.0;
};

struct DensityValue {
  double value = 0.0;
  bool at_pole = false;  // c(i nu) has a pole, mu = 0
  bool clamped = false;  // mu exceeded the ceiling
};

inline constexpr double kDensityCeiling = 1e15;

/// mu(nu) = C / (c(i nu) c(-i nu)) = C / |c(i nu)|^2 for real nu, computed from log Gamma.
DensityValue mu_density(const PlancherelDensity& pd, const DualVector& nu);

/// Closed-form A1 normalization constant: with flat measures in orthonormal
/// coordinates and K_nu = 2 sqrt(cosh(pi s)) K_{is}, inversion needs C = 1/(4 pi).
double rank_one_calibration();
/// 1 / (|W| (2 pi)^l): the constant matching flat measures on a and a* with the
/// class-one normalization of whittaker.hpp (1/(4 pi) for rank 1).
double closed_form_calibration(const RootSystem& rs);

struct PolynomialBound {
  double constant = 0.0;  // C
  double exponent = 0.0;  // r
  double max_log_ratio = 0.0;  // max of log mu / log(1 + |nu|) over samples with |nu| >= 1
};

/// Fits mu(nu) <= C (1 + |nu|)^r: r from a least-squares slope of log mu
/// against log(1 + |nu|), C the smallest constant covering all samples.
PolynomialBound fit_polynomial_bound(const PlancherelDensity& pd, const std::vector<DualVector>& samples);

}  // namespace wtoda

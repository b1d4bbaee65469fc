#pragma once

// Reference values computed outside the library: Boost.Math quadrature and
// constants frozen from 30-digit mpmath runs.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace oracle {

/// K_{i mu}(x) = int_0^inf exp(-x cosh t) cos(mu t) dt on the real axis.
/// Fine while exp(-pi mu / 2) stays well above the target accuracy.
inline double bessel_k_imag(double mu, double x) {
  const double t_max = std::acosh(1.0 + 750.0 / x);
  auto f = [&](double t) { return std::exp(-x * std::cosh(t)) * std::cos(mu * t); };
  double sum = 0.0;
  const int panels = 64;
  for (int k = 0; k < panels; ++k)
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, t_max * k / panels,
                                                                         t_max * (k + 1) / panels, 8, 1e-14);
  return sum;
}

/// int_a^b f by tanh-sinh.
template <typename F>
double integrate(F f, double a, double b, double tol = 1e-13) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b, tol);
}

/// int_R f by Gauss-Kronrod on [-r, r] in panels; depth 0 is one rule per panel.
template <typename F>
double integrate_line(F f, double r, int panels = 64, unsigned depth = 8) {
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = -r + 2.0 * r * k / panels, b = -r + 2.0 * r * (k + 1) / panels;
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, depth, 1e-14);
  }
  return sum;
}

// mpmath: besselk(1j*mu, x).real
struct BesselRow {
  double mu, x, value;
};
inline constexpr BesselRow kBessel[] = {
    {0.5, 1.0, 0.38404301690509269863},     {2.0, 1.5, 0.069331857212619631928},
    {5.0, 3.0, 0.00037941674688920078869},  {10.0, 2.0, 1.1735704221220611526e-7},
    {1e-8, 2.0, 0.11389387274953343329},    {3.0, 0.1, -0.0075188388700269032253},
};

// mpmath: gamma(z), loggamma(z)
struct GammaRow {
  double re, im, g_re, g_im, lg_re, lg_im;
};
inline constexpr GammaRow kGamma[] = {
    {0.3, 2.0, 0.05746533756958803346, -0.074984912582646138176, -2.3594493559375710212, -0.91690761351866975555},
    {-1.7, 0.4, 1.1356438824316395205, -0.26890799072916941431, 0.15447656611829278262, -6.5156919733443129234},
    {10.0, 50.0, -2.3595766167786097997e-18, 1.5930675354875626891e-18, -40.400262350482971022,
     159.62737280472833495},
    {0.5, 0.0, 1.7724538509055160273, 0.0, 0.57236494292470008707, 0.0},
};

}  // namespace oracle

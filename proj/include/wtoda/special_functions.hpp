#pragma once

#include "wtoda/core_algebra.hpp"

namespace wtoda {

/// A complex number that may instead carry a pole tag.
struct ComplexValue {
  Complex value{0.0, 0.0};
  bool pole = false;

  static ComplexValue at_pole() { return ComplexValue{Complex{std::numeric_limits<double>::infinity(), 0.0}, true}; }
};

/// Principal branch of log Gamma(z): the imaginary part lies in (-pi, pi].
/// Lanczos (g = 607/128) for Re z >= 1/2, reflection otherwise.
/// Non-positive integers give a pole-tagged result.
ComplexValue log_gamma(Complex z);

ComplexValue gamma(Complex z);

/// log B(a, b) = log Gamma(a) + log Gamma(b) - log Gamma(a+b), any branch.
/// Pole-tagged if any of the three Gamma factors sits on a pole.
ComplexValue log_beta(Complex a, Complex b);

ComplexValue beta(Complex a, Complex b);

/// K_{i mu}(z) = int_0^inf exp(-z cosh t) cos(mu t) dt for real mu and z > 0.
///
/// The integral is taken over the horizontal line Im t = c, with c placed
/// near the saddle of exp(-z cosh t + i mu t); on that line the integrand is
/// doubly-exponentially decaying and the trapezoidal rule converges
/// geometrically. The shift removes the exp(-pi |mu| / 2) cancellation that
/// ruins the real-axis integral for |mu| >> z.
double bessel_k_imaginary_order(double mu, double z);

/// exp(z) * K_{i mu}(z); finite for large z where K itself underflows.
double bessel_k_imaginary_order_scaled(double mu, double z);

}  // namespace wtoda

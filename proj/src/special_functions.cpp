#include "wtoda/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace wtoda {

namespace {

constexpr double kPi = std::numbers::pi;

// Godfrey's coefficients for g = 607/128.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoeff = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

bool is_gamma_pole(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::nearbyint(z.real());
}

// Continuous branch of log Gamma on Re z >= 1/2.
Complex log_gamma_right(Complex z) {
  Complex series = kLanczosCoeff[0];
  for (std::size_t k = 1; k < kLanczosCoeff.size(); ++k)
    series += kLanczosCoeff[k] / (z + static_cast<double>(k) - 1.0);
  const Complex t = z + kLanczosG - 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z - 0.5) * std::log(t) - t + std::log(series);
}

Complex principal(Complex w) {
  double im = std::remainder(w.imag(), 2.0 * kPi);
  if (im <= -kPi) im += 2.0 * kPi;
  return {w.real(), im};
}

}  // namespace

ComplexValue log_gamma(Complex z) {
  if (is_gamma_pole(z)) return ComplexValue::at_pole();
  if (z.real() >= 0.5) return {principal(log_gamma_right(z)), false};
  // Gamma(z) Gamma(1-z) = pi / sin(pi z)
  const Complex s = std::sin(kPi * z);
  const Complex w = std::log(kPi) - std::log(s) - log_gamma_right(1.0 - z);
  return {principal(w), false};
}

ComplexValue gamma(Complex z) {
  auto lg = log_gamma(z);
  if (lg.pole) return lg;
  return {std::exp(lg.value), false};
}

ComplexValue log_beta(Complex a, Complex b) {
  auto la = log_gamma(a);
  auto lb = log_gamma(b);
  auto lab = log_gamma(a + b);
  if (la.pole || lb.pole || lab.pole) return ComplexValue::at_pole();
  return {la.value + lb.value - lab.value, false};
}

ComplexValue beta(Complex a, Complex b) {
  auto lb = log_beta(a, b);
  if (lb.pole) return lb;
  return {std::exp(lb.value), false};
}

double bessel_k_imaginary_order_scaled(double mu, double z) {
  if (!(z > 0.0)) throw std::invalid_argument("bessel_k_imaginary_order: z must be > 0");
  mu = std::abs(mu);
  // Height of the integration line: the saddle sits at i*asin(mu/z) for
  // mu < z and on Im t = pi/2 otherwise; stay a little below pi/2 so the
  // integrand keeps its exp(-z cos(c) cosh x) decay.
  const double min_gap = 1.0 / (1.0 + mu);
  double c = mu > 0.0 ? std::asin(std::min(mu / z, 1.0)) : 0.0;
  c = std::min(c, kPi / 2.0 - min_gap);
  const double gap = kPi / 2.0 - c;
  const double zc = z * std::cos(c);
  const double zs = z * std::sin(c);
  // Step from the strip of analyticity (gap) and from the peak width
  // 1/sqrt(z cos c); cutoff where the integrand drops below e^-45 of its peak.
  const double step = std::min(std::min(gap, 1.0) / 6.0, 0.6 / std::sqrt(zc));
  const double cutoff = std::acosh(1.0 + 45.0 / zc);
  const int half = static_cast<int>(std::ceil(cutoff / step));

  // Integrand is f(x) + conj-symmetric partner; Re part is even in x.
  auto integrand = [&](double x) {
    const double magnitude = std::exp(-zc * std::cosh(x) + z - mu * c);
    const double phase = mu * x - zs * std::sinh(x);
    return magnitude * std::cos(phase);
  };
  // K = (1/2) int_R Re f = int_0^inf Re f by evenness of Re f.
  double sum = 0.5 * integrand(0.0);
  for (int k = 1; k <= half; ++k) sum += integrand(k * step);
  return sum * step;
}

double bessel_k_imaginary_order(double mu, double z) {
  if (!(z > 0.0)) throw std::invalid_argument("bessel_k_imaginary_order: z must be > 0");
  if (z > 745.0) return 0.0;
  return std::exp(-z) * bessel_k_imaginary_order_scaled(mu, z);
}

}  // namespace wtoda

#pragma once

#include "wtoda/core_algebra.hpp"
#include "wtoda/matrix_groups.hpp"

#include <memory>

namespace wtoda {

/// q_alpha = xi_alpha^2 for each simple root; refuses a non-generic character.
std::vector<double> couplings_from_character(const CharacterData& chi);

/// Formal eigenfunction M_lambda(h) = sum_m a_m e^{(lambda + 2 m^)(h)} of
/// Delta - 2 sum q_alpha e^{2 alpha(h)} with eigenvalue (lambda, lambda),
/// m^ = sum m_alpha alpha over the simple roots. Coefficients obey
///   a_m [(lambda + 2m^, lambda + 2m^) - (lambda, lambda)] = 2 sum_alpha q_alpha a_{m - e_alpha},  a_0 = 1.
struct SeriesSolution {
  RootSystem rs;
  SpectralParam lambda;
  std::vector<double> couplings;
  int truncation_order = 0;
  /// multi-indices in shell order (|m| = 0, 1, ...), with their coefficients
  std::vector<std::vector<int>> indices;
  std::vector<Complex> coefficients;
  /// a_m / prod_i q_i^{m_i}; paired with powers of q_i e^{2 alpha_i(h)} to avoid overflow
  std::vector<Complex> scaled_coefficients;
  /// shell_start[k] is the first entry with |m| = k; shell_start.back() = size
  std::vector<std::size_t> shell_start;
  /// geometric extrapolation of the last three coefficient-shell norms
  double coefficient_tail = 0.0;

  std::size_t position(const std::vector<int>& m) const;
};

/// Refuses when a denominator falls below 1e-10 in modulus.
SeriesSolution build_series(const RootSystem& rs, const SpectralParam& lambda, const std::vector<double>& couplings,
                            int order);

struct SeriesValue {
  Complex value{0.0, 0.0};
  double tail_bound = 0.0;  // from the last three shell sums at h
  double magnitude = 0.0;   // sum of |terms|, for roundoff estimates
  bool flagged = false;     // tail above tol * |value|
};

SeriesValue eval_series(const SeriesSolution& s, const CartanVector& h, double tol = 1e-10);

/// K_{i sigma}(sqrt(q) e^{sqrt(2) x}) with sigma = nu_scalar / sqrt(2): the
/// decaying solution of -1/2 w'' + q e^{2 sqrt(2) x} w = (nu_scalar^2 / 2) w.
/// Here x and nu_scalar are orthonormal coordinates on a and a* for SL(2):
/// alpha(h) = sqrt(2) x and (nu, alpha)/(alpha, alpha) = nu_scalar / sqrt(2).
double whittaker_rank1(double nu_scalar, double q, double x);

enum class WhittakerMethod { Rank1ClosedForm, SeriesClassOne, QuadratureOracle };

std::string to_string(WhittakerMethod m);

struct WhittakerAccuracy {
  double eig_residual = std::numeric_limits<double>::quiet_NaN();
  double tail_bound = 0.0;  // series coefficient tail (series method)
  /// max relative gap between the Weyl coefficients and the numerically
  /// computed decaying combination; NaN when not checked
  double coefficient_mismatch = std::numeric_limits<double>::quiet_NaN();
};

struct WhittakerPoint {
  Complex value{0.0, 0.0};
  double error_bound = 0.0;
  bool clamped = false;  // deep in the decay region, returned as 0
  bool flagged = false;  // series tail above tolerance
};

struct ClassOneOptions {
  int order = -1;  // -1: 24 shells for rank 1, 40 for rank 2
  WhittakerMethod method = WhittakerMethod::Rank1ClosedForm;  // rank 1 only; rank 2 always uses series
  bool compute_residual = true;
  bool verify_coefficients = false;
};

/// Prepared evaluator h -> K_nu(h), h in ambient coordinates of a.
class WhittakerEvaluator {
 public:
  struct Impl;

  const RootSystem& root_system() const;
  const DualVector& nu() const;
  WhittakerMethod method() const;
  const std::vector<double>& couplings() const;
  const WhittakerAccuracy& accuracy() const;
  int order() const;
  /// eigenvalue of L_c on this evaluator, -(lambda, lambda)/2
  double eigenvalue() const;
  bool experimental() const;

  WhittakerPoint evaluate(const CartanVector& h) const;
  Complex operator()(const CartanVector& h) const { return evaluate(h).value; }

  /// Relative eigen-residual max|L_c K - E K| / max|K| over the given points.
  double eigen_residual(const std::vector<CartanVector>& points, double spacing = 1e-3) const;

  nlohmann::json to_json(std::size_t max_coefficients = 8) const;

  explicit WhittakerEvaluator(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

/// The class-one Whittaker function for real regular nu:
///   K_nu = N(nu) sum_w G(i w nu) M_{i w nu},
///   G(lambda) = prod_{alpha > 0} Gamma(-(lambda, alpha)/(alpha, alpha)) e^{lambda(h0)},
///   alpha_i(h0) = log(sqrt(q_i)/2),  N(nu) = prod_{alpha > 0} sqrt(cosh(pi (nu, alpha)/(alpha, alpha))).
/// The combination is the one that decays as alpha(h) -> +infinity; it is
/// Weyl invariant in nu and for rank 1 equals 2 sqrt(cosh(pi s)) K_{is}(sqrt(q) e^{alpha(h)}).
/// Refuses non-regular nu and rank > 2.
WhittakerEvaluator class_one(const RootSystem& rs, const DualVector& nu, const std::vector<double>& couplings,
                             const ClassOneOptions& options = {});

/// sum_w G(w lambda) M_{w lambda} for real non-integral lambda: the decaying
/// eigenfunction of L_c with eigenvalue -(lambda, lambda)/2, without the
/// cosh normalization of class_one.
WhittakerEvaluator decaying_series(const RootSystem& rs, const DualVector& lambda, const std::vector<double>& couplings,
                                   int order = -1);

/// h -> e^{-rho(h)} J_{chi,nu}(pi_nu(exp h) 1) = e^{nu(h)} J_{chi_h,nu}(1) by
/// brute-force quadrature, for real nu with (nu, alpha) < 0; chi_h scales
/// xi_alpha by e^{alpha(h)}.
WhittakerEvaluator jacquet_evaluator(const RootSystem& rs, const CharacterData& chi, const DualVector& nu,
                                     const OracleQuadrature& quad);

/// Maximum relative gap between normalized coefficient vectors a and b,
/// both scaled so their first entry is 1.
double coefficient_gap(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Null vector of the decay-matching system: coefficient ratios c_w / c_id of
/// the combination of the series M_{i w nu} that stays bounded where the
/// individual series grow. Independent of any closed form.
std::vector<Complex> decaying_combination(const RootSystem& rs, const DualVector& nu,
                                          const std::vector<double>& couplings, int order = 90);

}  // namespace wtoda

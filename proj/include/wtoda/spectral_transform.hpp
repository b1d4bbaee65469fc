#pragma once

#include "wtoda/plancherel.hpp"
#include "wtoda/quadrature.hpp"
#include "wtoda/whittaker.hpp"

#include <functional>

namespace wtoda {

/// A function on a, given in orthonormal coordinates y (h = B y).
struct TestFunction {
  std::string name;
  int dim = 1;
  std::function<Complex(const Eigen::VectorXd&)> u;
  Complex operator()(const Eigen::VectorXd& y) const { return u(y); }
};

TestFunction gaussian(int dim);
/// (1 + y_1 - y_1^2 / 2) e^{-|y|^2}
TestFunction gaussian_poly(int dim);
/// y_1 e^{-|y|^2}
TestFunction gaussian_odd(int dim);
/// e^{-|y - c|^2}, c = (shift, 0, ...)
TestFunction shifted_gaussian(int dim, double shift = 0.5);
/// exp(a - a / (1 - |y|^2 / R^2)) inside |y| < R, zero outside.
TestFunction bump(int dim, double a = 4.0, double radius = 3.0);
TestFunction zero_function(int dim);

/// gaussian | gaussian_poly | gaussian_odd | shifted_gaussian | bump | zero
TestFunction gallery(const std::string& name, int dim);

/// Truncation radii and node counts for the h- and nu-integrals.
struct TransformQuadrature {
  double h_radius = 6.0;
  int h_nodes_per_dim = 256;
  double nu_radius = 12.0;
  int nu_nodes_per_dim = 192;
  RuleKind rule = RuleKind::GaussLegendre;
  double tol = 1e-4;
  double nu_offset = 0.01;  // smallest |nu|; keeps the grid off the Weyl-fixed origin

  void validate() const;
  /// Budget with every node count halved (step-halving companion).
  TransformQuadrature halved_h() const;
  TransformQuadrature halved_nu() const;
};

nlohmann::json to_json(const TransformQuadrature& q);
TransformQuadrature transform_quadrature_from_json(const nlohmann::json& j, const TransformQuadrature& defaults);

/// Defaults for rank 1 and the reduced rank-2 budget.
TransformQuadrature default_transform_quadrature(int rank);

using EvaluatorFactory = std::function<WhittakerEvaluator(const DualVector& nu)>;

/// class_one with the given couplings; residual checks off for speed.
EvaluatorFactory class_one_factory(const RootSystem& rs, const std::vector<double>& couplings, int order = -1);

struct SpectralNode {
  Eigen::VectorXd eta;  // orthonormal coordinates on a*
  DualVector nu;        // ambient coordinates
  double weight = 0.0;  // quadrature weight including Jacobian and Weyl multiplicity, without mu
  double mu = 0.0;
};

/// Nodes over one Weyl chamber: a half-line for rank 1, a polar wedge
/// (30 to 90 degrees) for rank 2. Weights carry the factor |W|.
std::vector<SpectralNode> spectral_grid(const PlancherelDensity& pd, const TransformQuadrature& quad);

/// Tensor Gauss-Legendre / tanh-sinh nodes on [-h_radius, h_radius]^dim.
struct HNodes {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> weights;
};
HNodes h_grid(int dim, const TransformQuadrature& quad);

struct TransformResult {
  std::vector<SpectralNode> nodes;
  std::vector<Complex> values;
  std::vector<double> errors;  // |fine - halved h rule|
  std::vector<char> flagged;   // error above tol * max |value|
  std::vector<WhittakerEvaluator> evaluators;
  TransformQuadrature quad;
  int skipped = 0;  // nodes where the evaluator refused

  nlohmann::json metadata() const;
};

/// K(u)(nu) = int_a u(h) conj(K_nu(h)) dh on the chamber grid.
/// With `reuse`, its nodes and evaluators are used instead of calling the factory.
TransformResult forward_transform(const TestFunction& u, const EvaluatorFactory& factory, const PlancherelDensity& pd,
                                  const TransformQuadrature& quad, const TransformResult* reuse = nullptr);

struct Reconstruction {
  std::vector<Eigen::VectorXd> points;  // orthonormal coordinates
  std::vector<Complex> values;
  std::vector<double> errors;        // |fine - halved nu rule| when a coarse result is supplied
  double truncation_estimate = 0.0;  // max contribution of the outer tenth of the nu range
  bool flagged = false;
};

/// u(h) = int_{a*} K_nu(h) K(u)(nu) mu(nu) d nu, using the evaluators stored in coeffs.
Reconstruction inverse_transform(const TransformResult& coeffs, const EvaluatorFactory& factory,
                                 const PlancherelDensity& pd, const std::vector<Eigen::VectorXd>& points,
                                 const TransformResult* coarse = nullptr);

struct RoundTrip {
  Reconstruction reconstruction;
  std::vector<Complex> exact;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;        // max |v - u| / max |u|
  double max_pointwise_rel = 0.0;  // max |v - u| / |u| over |u| >= 1e-3 max|u|
};

/// Forward then inverse on `points`, with the halved-nu companion for error bars.
RoundTrip round_trip(const TestFunction& u, const EvaluatorFactory& factory, const PlancherelDensity& pd,
                     const TransformQuadrature& quad, const std::vector<Eigen::VectorXd>& points);

/// Least-squares constant C with C * v = u, v the round trip computed with calibration 1.
struct CalibrationFit {
  double constant = 0.0;
  double residual = 0.0;  // max |C v - u| / max |u|
};
CalibrationFit fit_calibration(const TestFunction& u, const EvaluatorFactory& factory, const RootSystem& rs,
                               const TransformQuadrature& quad, const std::vector<Eigen::VectorXd>& points);

struct ParsevalResult {
  Complex lhs{0.0, 0.0};
  Complex rhs{0.0, 0.0};
  double lhs_err = 0.0;
  double rhs_err = 0.0;
  double gap = 0.0;  // |lhs - rhs| / (|u|_2 |w|_2)
  bool within_bars = false;
};

ParsevalResult parseval_check(const TestFunction& u, const TestFunction& w, const EvaluatorFactory& factory,
                              const PlancherelDensity& pd, const TransformQuadrature& quad);

struct SeminormEntry {
  Eigen::VectorXd m;
  double d = 0.0;
  int derivative_order = 0;
  double sup_r = 0.0;
  double sup_2r = 0.0;
  bool stable = false;
};

struct MembershipReport {
  std::vector<SeminormEntry> entries;
  bool passed = false;
  nlohmann::json to_json() const;
};

/// sup over |y_i| <= R (and 2R) of e^{sum m_alpha alpha(h)} (1 + |h|)^d |D u(h)|,
/// D the identity, first and second partial derivatives (finite differences).
MembershipReport membership_check(const TestFunction& u, const RootSystem& rs, const std::vector<Eigen::VectorXd>& m_list,
                                  const std::vector<double>& d_list, double probe_radius);

/// Points of a centered tensor grid on [-radius, radius]^dim.
std::vector<Eigen::VectorXd> box_points(int dim, double radius, int per_dim);

}  // namespace wtoda

#pragma once

#include "wtoda/core_algebra.hpp"
#include "wtoda/quadrature.hpp"

#include <cstdint>
#include <random>

namespace wtoda {

enum class GroupTag { GLPlus, SL };

/// An element of GL(n,R)^+ or SL(n,R).
struct GroupElement {
  Eigen::MatrixXd entries;
  GroupTag tag = GroupTag::SL;

  /// Validates det > 0 (GL+) or |det - 1| <= tol (SL).
  static GroupElement make(const Eigen::MatrixXd& m, GroupTag tag, double tol = 1e-10);
  int n() const { return static_cast<int>(entries.rows()); }
};

/// g = nbar * a * k with nbar lower unitriangular, a positive diagonal, k orthogonal.
struct IwasawaNbarAK {
  Eigen::MatrixXd nbar;
  Eigen::VectorXd a;
  Eigen::MatrixXd k;
};

/// g = n * a * k with n upper unitriangular.
struct IwasawaNAK {
  Eigen::MatrixXd n;
  Eigen::VectorXd a;
  Eigen::MatrixXd k;
};

/// Thrown for numerically singular input; carries the condition estimate.
class SingularMatrix : public std::invalid_argument {
 public:
  SingularMatrix(const std::string& what, double condition)
      : std::invalid_argument(what), condition(condition) {}
  double condition;
};

IwasawaNbarAK iwasawa_nbar_ak(const Eigen::MatrixXd& g);
IwasawaNbarAK iwasawa_nbar_ak(const GroupElement& g);
IwasawaNAK iwasawa_nak(const Eigen::MatrixXd& g);
IwasawaNAK iwasawa_nak(const GroupElement& g);

/// Cartan involution theta(g) = (g^T)^{-1}.
Eigen::MatrixXd theta(const Eigen::MatrixXd& g);

/// a^lambda = exp(lambda(log a)) for a given by its diagonal.
double a_power(const Eigen::VectorXd& a, const DualVector& lambda);

/// Matrix of Ad(g) = X -> g X g^{-1} on gl(n) in the basis E_ij (column-major vec).
Eigen::MatrixXd adjoint_matrix(const Eigen::MatrixXd& g);

/// |g|: product of the m = n(n-1)/2 largest singular values of Ad(g).
double norm_bars(const Eigen::MatrixXd& g);

/// ||g|| = exp(|log det g| / sqrt(n)) |g|^{1/2}; for SL this is |g|^{1/2}.
double norm_doublebar(const Eigen::MatrixXd& g);

/// || wedge^m Ad(g)^{-1} u0 || for u0 the unit top vector of wedge^m nbar.
double wedge_top_norm(const Eigen::MatrixXd& g);

/// rho computed from 1/2 tr(ad h restricted to n) on the coordinate basis of a.
DualVector rho_from_adjoint(const RootSystem& rs);

/// dchi(X_alpha) = i xi_alpha on the simple root vectors E_{i,i+1}.
struct CharacterData {
  std::vector<double> xi;
  bool generic() const;
  /// chi(n)^{-1} for n with superdiagonal entries n_{i,i+1}.
  Complex inverse_at(const Eigen::MatrixXd& n) const;
};

/// Settings for the brute-force N-integrals.
struct OracleQuadrature {
  RuleKind rule = RuleKind::TanhSinh;
  double radius = 1.0;  // scale of the sinh-sinh map
  int nodes_per_dim = 129;
  double tol = 1e-8;
};

nlohmann::json to_json(const OracleQuadrature& q);
OracleQuadrature oracle_quadrature_from_json(const nlohmann::json& j);

struct QuadratureValue {
  Complex value{0.0, 0.0};
  double error = 0.0;  // |I(fine) - I(coarse)|
  bool flagged = false;  // error above tol * |value|
  std::size_t evaluations = 0;
};

/// log a(n) for n upper unitriangular with strict upper entries `coords`
/// in the lexicographic (i, j) order of RootSystem::positive_roots.
void log_a_of_unipotent(int n, const double* coords, double* log_a);

/// c(nu) = int_N a(n)^{nu - rho} dn with flat measure on the strict upper entries.
/// Refuses unless Re(nu, alpha) < 0 for every positive root.
QuadratureValue c_function_quadrature(const RootSystem& rs, const SpectralParam& nu, const OracleQuadrature& quad);

/// J_{chi,nu}(1) = int_N chi(n)^{-1} a(n)^{nu - rho} dn.
QuadratureValue jacquet_quadrature(const RootSystem& rs, const CharacterData& chi, const SpectralParam& nu,
                                   const OracleQuadrature& quad);

struct ProbeRow {
  double radius = 0.0;
  double partial = 0.0;
  double cauchy_diff = 0.0;  // partial(radius) - partial(previous radius); NaN on the first row
};

/// Partial integrals of a(n)^{-(1-eps) rho} over ker(chi) in N, on the squares
/// |s|, |t| <= R of the chart n = exp(s v + t E_13), v the unit dchi-null
/// direction in span(E_12, E_23). n = 2 gives the point-mass value 1.
std::vector<ProbeRow> beuzart_plessis_probe(const RootSystem& rs, const CharacterData& chi, double epsilon,
                                            const std::vector<double>& radii);

/// Standard-normal entries, sign-fixed and rescaled to determinant one.
Eigen::MatrixXd random_sl(int n, std::mt19937_64& rng);

struct RhoGrowthReport {
  int pairs = 0;
  int violations = 0;
  double max_ratio = 0.0;  // max of a(xg)^{-rho} / (|g|^{1/2} a(x)^{-rho})
};

/// Samples pairs (x, g) of random SL(n) elements and checks
/// a(xg)^{-rho} <= |g|^{1/2} a(x)^{-rho} (1 + slack).
RhoGrowthReport rho_growth_check(const RootSystem& rs, int pairs, std::uint64_t seed, double slack);

}  // namespace wtoda

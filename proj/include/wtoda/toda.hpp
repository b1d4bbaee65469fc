#pragma once

#include "wtoda/core_algebra.hpp"
#include "wtoda/matrix_groups.hpp"

#include <functional>
#include <optional>

namespace wtoda {

/// Samples on a uniform tensor grid in orthonormal coordinates y of a
/// (h = B y with B = RootSystem::orthonormal_basis()).
struct GridFunction {
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<int> shape;
  std::vector<Complex> values;  // row-major, last axis fastest
  std::vector<char> valid;      // cleared where a stencil ran off the grid

  int dim() const { return static_cast<int>(shape.size()); }
  std::size_t size() const { return values.size(); }
  std::size_t flat(const std::vector<int>& idx) const;
  std::vector<int> unflat(std::size_t flat) const;
  Eigen::VectorXd coords(std::size_t flat) const;

  static GridFunction sample(const std::vector<double>& origin, const std::vector<double>& spacing,
                             const std::vector<int>& shape, const std::function<Complex(const Eigen::VectorXd&)>& f);
  /// Centered grid with `points` nodes per axis and the given spacing.
  static GridFunction centered(int dim, int points, double spacing, const Eigen::VectorXd& center,
                               const std::function<Complex(const Eigen::VectorXd&)>& f);
};

/// L_c f = -1/2 sum_i d^2 f / dy_i^2 + sum_alpha q_alpha e^{2 alpha(h)} f.
struct TodaOperator {
  RootSystem rs;
  std::vector<double> couplings;  // q_alpha per simple root
  Eigen::MatrixXd basis;          // columns h_1..h_l
  double max_spacing = 1e-2;

  static TodaOperator make(const RootSystem& rs, const std::vector<double>& couplings);
  double potential(const Eigen::VectorXd& y) const;
};

/// 5-point fourth-order stencils; boundary cells are marked invalid.
GridFunction apply_toda(const TodaOperator& op, const GridFunction& f);

/// Fourth-order Laplacian and directional derivative d/dv (v in y coordinates).
GridFunction laplacian(const GridFunction& f);
GridFunction directional_derivative(const GridFunction& f, const Eigen::VectorXd& v);

struct ResidualReport {
  double max_residual = 0.0;  // max abs difference over valid cells
  double relative = 0.0;      // max_residual / max |f|
  std::vector<int> grid;
  std::vector<double> spacing;
  std::string stencil = "5-point";
  nlohmann::json to_json() const;
};

/// e^{rho} Delta (e^{-rho} f) against (rho, rho) f - 2 d_rho f + Delta f.
ResidualReport conjugation_identity_check(const RootSystem& rs, const GridFunction& f);

struct CasimirReport {
  ResidualReport identity;   // -2 L_c vs the bracket operator, same stencils
  ResidualReport stencil;    // against Delta f - 2 d_rho f + (rho,rho) f - 2 sum q e^{2 alpha} f
  double eigen_residual = std::numeric_limits<double>::quiet_NaN();  // |(C + (rho,rho)) f + |nu|^2 f| / max|f|
  nlohmann::json to_json() const;
};

/// (C + (rho,rho)) f = e^{rho} (Delta - 2 sum |xi_alpha|^2 e^{2 alpha}) e^{-rho} f, the left side
/// computed as e^{rho} (-2 L_c)(e^{-rho} f) with L_c built from the couplings of chi.
/// With nu given, f is taken as e^{rho} K_nu and its Casimir eigen-residual is reported.
CasimirReport radial_casimir_check(const RootSystem& rs, const CharacterData& chi, const GridFunction& f,
                                   const std::optional<DualVector>& nu = std::nullopt);

/// D_1 = sum_j d/dh_j for GL(n), as a shift along the diagonal (1,...,1).
/// Needs equal spacing on every axis; SL has no center direction and is refused.
GridFunction d1_apply(const RootSystem& rs, const GridFunction& f);
Complex d1_symbol(const DualVector& nu);

/// max |D_1 L_c f - L_c D_1 f| / max |D_1 L_c f| over cells valid for both.
double d1_commutator(const TodaOperator& op, const GridFunction& f);

struct ClassicalState {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
};

/// H = 1/2 sum p_i^2 + sum c_i^2 e^{2 (q_i - q_{i+1})}.
double toda_hamiltonian(const ClassicalState& s, const std::vector<double>& couplings);

struct TrajectoryRow {
  double t = 0.0;
  Eigen::VectorXd q, p;
  double energy = 0.0;
  double momentum = 0.0;
};

struct FlowResult {
  std::vector<TrajectoryRow> rows;
  bool halted = false;
  std::string diagnostic;
  double energy_drift = 0.0;    // max |H - H0| / |H0|
  double momentum_drift = 0.0;  // max |P - P0| / max(1, |P0|)
};

/// Fourth-order symplectic flow (Yoshida composition of velocity Verlet).
/// Halts when an exponent 2 (q_i - q_{i+1}) would overflow.
FlowResult classical_flow(const ClassicalState& state, const std::vector<double>& couplings, double dt, int steps,
                          int record_every = 1);

}  // namespace wtoda

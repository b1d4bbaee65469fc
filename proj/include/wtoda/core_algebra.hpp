#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace wtoda {

using Complex = std::complex<double>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A point h of the Cartan subspace, in ambient R^n coordinates.
using CartanVector = Vector<double>;
/// A real dual vector lambda in a*, ambient coordinates.
using DualVector = Vector<double>;
/// nu = re + i im in the complexified dual.
using SpectralParam = Vector<Complex>;

/// Raised when an operation refuses its input because a documented
/// precondition is not met (degenerate parameter, divergent integral, ...).
class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Variant { GL, SL };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// Restricted root data of split type A for GL(n,R) / SL(n,R).
///
/// Roots, rho and every vector of a* are stored in the ambient basis
/// e_1..e_n of R^n; for SL the Cartan subspace is the trace-zero hyperplane.
struct RootSystem {
  int n = 0;
  Variant variant = Variant::SL;
  /// alpha_ij = e_i - e_j, i < j, ordered lexicographically in (i, j)
  std::vector<Eigen::VectorXi> positive_roots;
  /// alpha_i = e_i - e_{i+1}
  std::vector<Eigen::VectorXi> simple_roots;
  /// m_alpha for each positive root (all 1 for split type A)
  std::vector<int> multiplicities;
  /// coordinates of each positive root in the simple-root basis
  std::vector<Eigen::VectorXi> simple_coordinates;
  DualVector rho;

  /// dim a
  int rank() const { return variant == Variant::GL ? n : n - 1; }
  /// dim of the semisimple part of a (number of simple roots)
  int semisimple_rank() const { return n - 1; }
  /// dim n = |Phi+| for split groups
  int nilradical_dim() const { return n * (n - 1) / 2; }

  DualVector root(std::size_t i) const { return positive_roots[i].cast<double>(); }
  DualVector simple_root(std::size_t i) const { return simple_roots[i].cast<double>(); }

  /// Index of the root e_i - e_j (i < j) in positive_roots.
  std::size_t root_index(int i, int j) const;

  /// Columns form an orthonormal basis h_1..h_l of a for <x,y> = tr(x y^T).
  /// SL: Gram-Schmidt of the simple roots; GL: the standard basis.
  Eigen::MatrixXd orthonormal_basis() const;

  /// The root system with the same n and variant SL.
  RootSystem semisimple() const;
};

RootSystem build_root_system(int n, Variant variant);

/// lambda(h) = sum lambda_i h_i.
template <typename DerivedA, typename DerivedB>
auto pairing(const Eigen::MatrixBase<DerivedA>& lambda, const Eigen::MatrixBase<DerivedB>& h) {
  if (lambda.size() != h.size())
    throw std::invalid_argument("pairing: dimension mismatch " + std::to_string(lambda.size()) +
                                " vs " + std::to_string(h.size()));
  return (lambda.array() * h.array()).sum();
}

/// The complex-bilinear dual form (lambda, mu) induced by tr(xy) on a.
template <typename DerivedA, typename DerivedB>
auto dual_inner(const Eigen::MatrixBase<DerivedA>& lambda, const Eigen::MatrixBase<DerivedB>& mu) {
  if (lambda.size() != mu.size())
    throw std::invalid_argument("dual_inner: dimension mismatch " + std::to_string(lambda.size()) +
                                " vs " + std::to_string(mu.size()));
  return (lambda.array() * mu.array()).sum();
}

/// A Weyl group element of type A: a permutation w of {0..n-1} acting on
/// coordinates by (w lambda)_{w(i)} = lambda_i.
struct WeylElement {
  std::vector<int> perm;

  template <typename Derived>
  Vector<typename Derived::Scalar> apply(const Eigen::MatrixBase<Derived>& v) const {
    Vector<typename Derived::Scalar> out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(perm[static_cast<std::size_t>(i)]) = v(i);
    return out;
  }
  WeylElement compose(const WeylElement& other) const;  // (this o other)
  bool is_identity() const;
};

/// All n! elements, identity first, in lexicographic order of perm.
std::vector<WeylElement> weyl_group(const RootSystem& rs);

/// Projection of an ambient vector onto the trace-zero hyperplane.
template <typename Derived>
Vector<typename Derived::Scalar> remove_trace(const Eigen::MatrixBase<Derived>& v) {
  using S = typename Derived::Scalar;
  return (v.array() - v.sum() / static_cast<S>(static_cast<double>(v.size()))).matrix();
}

nlohmann::json to_json(const RootSystem& rs);

}  // namespace wtoda

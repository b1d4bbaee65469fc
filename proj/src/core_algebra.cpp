#include "wtoda/core_algebra.hpp"

#include <algorithm>
#include <numeric>

namespace wtoda {

std::string to_string(Variant v) { return v == Variant::GL ? "GL" : "SL"; }

Variant variant_from_string(const std::string& s) {
  if (s == "GL") return Variant::GL;
  if (s == "SL") return Variant::SL;
  throw std::invalid_argument("unknown group variant '" + s + "'");
}

RootSystem build_root_system(int n, Variant variant) {
  if (n < 2) throw std::invalid_argument("build_root_system: n must be >= 2, got " + std::to_string(n));
  RootSystem rs;
  rs.n = n;
  rs.variant = variant;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Eigen::VectorXi a = Eigen::VectorXi::Zero(n);
      a(i) = 1;
      a(j) = -1;
      rs.positive_roots.push_back(a);
      rs.multiplicities.push_back(1);
      // e_i - e_j = alpha_i + ... + alpha_{j-1}
      Eigen::VectorXi c = Eigen::VectorXi::Zero(n - 1);
      c.segment(i, j - i).setOnes();
      rs.simple_coordinates.push_back(c);
    }
  }
  for (int i = 0; i + 1 < n; ++i) {
    Eigen::VectorXi a = Eigen::VectorXi::Zero(n);
    a(i) = 1;
    a(i + 1) = -1;
    rs.simple_roots.push_back(a);
  }
  // twice rho as an exact integer sum, then halve
  Eigen::VectorXi two_rho = Eigen::VectorXi::Zero(n);
  for (std::size_t k = 0; k < rs.positive_roots.size(); ++k)
    two_rho += rs.multiplicities[k] * rs.positive_roots[k];
  rs.rho = two_rho.cast<double>() / 2.0;
  return rs;
}

std::size_t RootSystem::root_index(int i, int j) const {
  if (i < 0 || j >= n || i >= j) throw std::invalid_argument("root_index: need 0 <= i < j < n");
  // roots are enumerated row by row
  std::size_t idx = 0;
  for (int r = 0; r < i; ++r) idx += static_cast<std::size_t>(n - r - 1);
  return idx + static_cast<std::size_t>(j - i - 1);
}

Eigen::MatrixXd RootSystem::orthonormal_basis() const {
  if (variant == Variant::GL) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd basis(n, n - 1);
  for (int k = 0; k < n - 1; ++k) {
    Eigen::VectorXd v = simple_root(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    basis.col(k) = v.normalized();
  }
  return basis;
}

RootSystem RootSystem::semisimple() const { return build_root_system(n, Variant::SL); }

WeylElement WeylElement::compose(const WeylElement& other) const {
  WeylElement out;
  out.perm.resize(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i)
    out.perm[i] = perm[static_cast<std::size_t>(other.perm[i])];
  return out;
}

bool WeylElement::is_identity() const {
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != static_cast<int>(i)) return false;
  return true;
}

std::vector<WeylElement> weyl_group(const RootSystem& rs) {
  std::vector<int> p(static_cast<std::size_t>(rs.n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<WeylElement> out;
  do {
    out.push_back(WeylElement{p});
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

nlohmann::json to_json(const RootSystem& rs) {
  auto vec = [](const auto& v) {
    std::vector<double> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(v(i));
    return out;
  };
  nlohmann::json j;
  j["n"] = rs.n;
  j["variant"] = to_string(rs.variant);
  j["rho"] = vec(rs.rho);
  j["simple_roots"] = nlohmann::json::array();
  for (const auto& a : rs.simple_roots) j["simple_roots"].push_back(vec(a));
  j["positive_roots"] = nlohmann::json::array();
  for (const auto& a : rs.positive_roots) j["positive_roots"].push_back(vec(a));
  return j;
}

}  // namespace wtoda

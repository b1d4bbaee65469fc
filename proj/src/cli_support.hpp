#pragma once

#include "wtoda/cli.hpp"
#include "wtoda/toda.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace wtoda::detail {

inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Ambient dual vector with (nu, alpha_i) = p_i for the simple roots and,
/// for GL, sum(nu) = center.
inline DualVector dual_from_simple_pairings(const RootSystem& rs, const Eigen::VectorXd& p, double center = 0.0) {
  const int n = rs.n;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i + 1 < n; ++i) {
    a.row(i) = rs.simple_root(static_cast<std::size_t>(i)).transpose();
    b(i) = p(i);
  }
  a.row(n - 1).setOnes();
  b(n - 1) = rs.variant == Variant::GL ? center : 0.0;
  return a.partialPivLu().solve(b);
}

/// Ambient Cartan point with alpha_i(h) = log(z_i / sqrt(q_i)), trace zero.
inline CartanVector point_from_scaled(const RootSystem& rs, const Eigen::VectorXd& z, const std::vector<double>& q) {
  Eigen::VectorXd t(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) t(i) = std::log(z(i) / std::sqrt(q[static_cast<std::size_t>(i)]));
  return dual_from_simple_pairings(rs, t, 0.0);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Sum of `terms` random plane-wave cosines with |omega_i| <= max_freq.
inline std::function<Complex(const Eigen::VectorXd&)> band_limited(std::mt19937_64& rng, int dim, int terms = 6,
                                                                   double max_freq = 2.0) {
  std::uniform_real_distribution<double> freq(-max_freq, max_freq), phase(0.0, 6.283185307179586),
      amp(-1.0, 1.0);
  std::vector<Eigen::VectorXd> om;
  std::vector<double> ph, am;
  for (int k = 0; k < terms; ++k) {
    Eigen::VectorXd w(dim);
    for (int d = 0; d < dim; ++d) w(d) = freq(rng);
    om.push_back(w);
    ph.push_back(phase(rng));
    am.push_back(amp(rng));
  }
  return [om, ph, am](const Eigen::VectorXd& y) {
    double s = 0.0;
    for (std::size_t k = 0; k < om.size(); ++k) s += am[k] * std::cos(om[k].dot(y) + ph[k]);
    return Complex(s, 0.0);
  };
}

inline double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

/// max |a - lambda b| / max |b| over cells valid in a.
inline double relative_gap(const GridFunction& a, const GridFunction& b, Complex lambda) {
  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    scale = std::max(scale, std::abs(b.values[k]));
    if (!a.valid[k]) continue;
    worst = std::max(worst, std::abs(a.values[k] - lambda * b.values[k]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

/// Spread max |r_i - mean| / |mean| of a list of ratios.
inline double ratio_spread(const std::vector<Complex>& r) {
  Complex mean{0.0, 0.0};
  for (const auto& x : r) mean += x;
  mean /= static_cast<double>(r.size());
  double worst = 0.0;
  for (const auto& x : r) worst = std::max(worst, std::abs(x - mean));
  return worst / std::abs(mean);
}

inline nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace wtoda::detail

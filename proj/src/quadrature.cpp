#include "wtoda/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wtoda {

std::string to_string(RuleKind k) { return k == RuleKind::GaussLegendre ? "gauss-legendre" : "tanh-sinh"; }

RuleKind rule_from_string(const std::string& s) {
  if (s == "gauss-legendre" || s == "gauss_legendre") return RuleKind::GaussLegendre;
  if (s == "tanh-sinh" || s == "tanh_sinh") return RuleKind::TanhSinh;
  throw std::invalid_argument("unknown quadrature rule '" + s + "'");
}

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      // recompute derivative at the converged root
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
    r.nodes[lo] = mid - half * x;
    r.nodes[hi] = mid + half * x;
    r.weights[lo] = r.weights[hi] = half * w;
  }
  return r;
}

Rule composite_gauss_legendre(int nodes, double a, double b, int panel) {
  if (nodes <= panel) return gauss_legendre(nodes, a, b);
  const int panels = (nodes + panel - 1) / panel;
  const int per = nodes / panels;
  Rule r;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
    const int count = p < nodes % panels ? per + 1 : per;
    Rule sub = gauss_legendre(count, lo, hi);
    r.nodes.insert(r.nodes.end(), sub.nodes.begin(), sub.nodes.end());
    r.weights.insert(r.weights.end(), sub.weights.begin(), sub.weights.end());
  }
  return r;
}

Rule tanh_sinh(int nodes, double a, double b, double t_max) {
  if (nodes < 3) throw std::invalid_argument("tanh_sinh: need at least 3 nodes");
  const int half = (nodes - 1) / 2;
  const double h = t_max / half;
  const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
  Rule r;
  for (int k = -half; k <= half; ++k) {
    const double t = k * h;
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    const double ch = std::cosh(u);
    // distance to the nearer endpoint, rad (1 - tanh|u|), without cancellation
    const double d = 2.0 * rad / (1.0 + std::exp(2.0 * std::abs(u)));
    double x = k < 0 ? a + d : (k > 0 ? b - d : mid);
    if (x <= a) x = std::nextafter(a, b);
    if (x >= b) x = std::nextafter(b, a);
    r.nodes.push_back(x);
    r.weights.push_back(rad * h * 0.5 * std::numbers::pi * std::cosh(t) / (ch * ch));
  }
  return r;
}

Rule sinh_sinh(int nodes, double scale, double t_max) {
  if (nodes < 3) throw std::invalid_argument("sinh_sinh: need at least 3 nodes");
  const int half = (nodes - 1) / 2;
  const double h = t_max / half;
  Rule r;
  for (int k = -half; k <= half; ++k) {
    const double t = k * h;
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    r.nodes.push_back(scale * std::sinh(u));
    r.weights.push_back(scale * h * 0.5 * std::numbers::pi * std::cosh(t) * std::cosh(u));
  }
  return r;
}

Rule finite_rule(RuleKind kind, int nodes, double a, double b) {
  return kind == RuleKind::GaussLegendre ? composite_gauss_legendre(nodes, a, b) : tanh_sinh(nodes, a, b);
}

Rule real_line_rule(RuleKind kind, int nodes, double scale, double t_max) {
  if (kind == RuleKind::TanhSinh) return sinh_sinh(nodes, scale, t_max);
  // Gauss-Legendre in t on the same doubly exponential map
  Rule base = composite_gauss_legendre(nodes, -t_max, t_max);
  Rule r;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double t = base.nodes[i];
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    r.nodes.push_back(scale * std::sinh(u));
    r.weights.push_back(base.weights[i] * scale * 0.5 * std::numbers::pi * std::cosh(t) * std::cosh(u));
  }
  return r;
}

Rule coarsen(const Rule& r) {
  if (r.size() % 2 == 0) throw std::invalid_argument("coarsen: rule must have an odd number of nodes");
  Rule out;
  const std::size_t half = (r.size() - 1) / 2;
  // keep nodes with even offset from the centre
  for (std::size_t i = half % 2; i < r.size(); i += 2) {
    out.nodes.push_back(r.nodes[i]);
    out.weights.push_back(2.0 * r.weights[i]);
  }
  return out;
}

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("WTODA_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return std::min(cap, std::max(hw, cap));
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(worker_count());
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t chunks = std::min(workers, n);
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = n * c / chunks, hi = n * (c + 1) / chunks;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace wtoda

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace wtoda {

/// A one-dimensional quadrature rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

enum class RuleKind { GaussLegendre, TanhSinh };

std::string to_string(RuleKind k);
RuleKind rule_from_string(const std::string& s);

/// n-point Gauss-Legendre on [a, b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre with `nodes` points split into panels of at most
/// `panel` points each.
Rule composite_gauss_legendre(int nodes, double a, double b, int panel = 16);

/// Tanh-sinh (doubly exponential) rule on [a, b] with 2N+1 points, t in [-t_max, t_max].
Rule tanh_sinh(int nodes, double a, double b, double t_max = 3.2);

/// Sinh-sinh rule for the whole real line: x = scale * sinh(pi/2 sinh t).
/// Suited to integrands with algebraic decay.
Rule sinh_sinh(int nodes, double scale = 1.0, double t_max = 4.0);

/// Rule on [a, b] of the requested kind.
Rule finite_rule(RuleKind kind, int nodes, double a, double b);
/// Rule on R: both kinds use x = scale * sinh(pi/2 sinh t), t in [-t_max, t_max],
/// with the trapezoid (tanh-sinh) or composite Gauss-Legendre in t.
Rule real_line_rule(RuleKind kind, int nodes, double scale, double t_max = 4.0);

/// Every other node of an odd-sized nested rule (tanh-sinh / sinh-sinh),
/// with doubled weights: the step-2h rule of a trapezoid family.
Rule coarsen(const Rule& r);

/// Deterministic pairwise (cascade) summation.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  const std::size_t n = values.size();
  if (n == 0) return T{};
  if (n <= 8) {
    T s = values[0];
    for (std::size_t i = 1; i < n; ++i) s += values[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
  return pairwise_sum(std::span<const T>(values.data(), values.size()));
}

/// Worker count: WTODA_THREADS if set (>= 1), else hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, n) on a fixed partition of contiguous chunks.
/// Writes must go to per-index slots; the caller reduces in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

}  // namespace wtoda

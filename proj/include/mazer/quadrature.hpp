#pragma once

/// @file quadrature.hpp
/// @brief Gauss-Legendre rules of arbitrary order.

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mazer {

struct GaussLegendreRule {
  std::vector<double> nodes;   ///< ascending, on [-1, 1]
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

namespace detail {

inline GaussLegendreRule build_gauss_legendre(std::size_t n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess for the (i+1)-th largest root.
    const double theta = std::numbers::pi * (4.0 * static_cast<double>(i) + 3.0) / (4.0 * nd + 2.0);
    double x = (1.0 - 1.0 / (8.0 * nd * nd) + 1.0 / (8.0 * nd * nd * nd)) * std::cos(theta);
    double dp = 0.0;
    for (int iter = 0; iter < 12; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double jd = static_cast<double>(j);
        const double p2 = ((2.0 * jd - 1.0) * x * p1 - (jd - 1.0) * p0) / jd;
        p0 = p1;
        p1 = p2;
      }
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

} // namespace detail

/// Returns a cached n-point rule; safe to call from several threads.
inline const GaussLegendreRule &gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto &slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(detail::build_gauss_legendre(n));
  return *slot;
}

} // namespace mazer

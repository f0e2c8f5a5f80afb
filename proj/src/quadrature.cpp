#include "obslab/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "obslab/common.hpp"

namespace obslab {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussRule gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: need at least one node");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

GaussRule gauss_legendre(int n, double a, double b) {
  GaussRule rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

namespace {

double ball_level(int level, int m, double radius, const GaussRule& angles,
                  std::vector<double>& z,
                  const std::function<double(std::span<const double>)>& f) {
  double sum = 0.0;
  for (std::size_t q = 0; q < angles.nodes.size(); ++q) {
    const double phi = angles.nodes[q];
    const double c = std::cos(phi);
    z[static_cast<std::size_t>(level)] = radius * std::sin(phi);
    const double jacobian = radius * c * angles.weights[q];
    if (level + 1 == m) {
      sum += jacobian * f(std::span<const double>(z));
    } else {
      sum += jacobian * ball_level(level + 1, m, radius * c, angles, z, f);
    }
  }
  return sum;
}

}  // namespace

double integrate_ball(int m, double radius, int n,
                      const std::function<double(std::span<const double>)>& f) {
  require(m >= 1, "integrate_ball: dimension must be positive");
  require(radius >= 0.0, "integrate_ball: negative radius");
  if (radius == 0.0) return 0.0;
  const GaussRule angles = gauss_legendre(n, -0.5 * kPi, 0.5 * kPi);
  std::vector<double> z(static_cast<std::size_t>(m), 0.0);
  return ball_level(0, m, radius, angles, z, f);
}

}  // namespace obslab

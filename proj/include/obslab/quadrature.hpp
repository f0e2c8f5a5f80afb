#pragma once

#include <functional>
#include <span>
#include <vector>

namespace obslab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

/// Integrates `f` over the ball B_R(0) in R^m by nested sine substitution
/// z_i = r_i sin(phi_i), r_{i+1} = r_i cos(phi_i), which removes the square
/// root singularities of the slice limits. `n` nodes per level, n^m total.
double integrate_ball(int m, double radius, int n,
                      const std::function<double(std::span<const double>)>& f);

}  // namespace obslab

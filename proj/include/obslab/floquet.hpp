#pragma once

#include <random>
#include <vector>

#include "obslab/common.hpp"
#include "obslab/quasimomentum.hpp"

namespace obslab {

/// A function on finitely many period cells of R^d. Cell n (integer vector,
/// translation 2 pi n) carries samples at y_j = -pi + 2 pi j / M on each axis.
/// Values are stored cell-major, each cell row-major with the last axis
/// fastest.
struct SampledFunction {
  int dimension = 1;
  int cells_per_axis = 1;
  IntVec cell_origin;  ///< integer index of the first cell on each axis
  int grid_per_axis = 1;
  std::vector<Complex> values;

  static SampledFunction zeros(int dimension, int cells_per_axis, int grid_per_axis,
                               IntVec cell_origin = {});

  std::size_t cell_count() const;
  std::size_t points_per_cell() const;
  double spacing() const { return kTwoPi / grid_per_axis; }
  Complex& at(std::size_t cell, std::size_t point) { return values[cell * points_per_cell() + point]; }
  Complex at(std::size_t cell, std::size_t point) const { return values[cell * points_per_cell() + point]; }

  /// Integer index of a flat cell number.
  IntVec cell_index(std::size_t cell) const;
  /// Torus coordinate y of a flat point number.
  Eigen::VectorXd torus_point(std::size_t point) const;
  /// Discrete L^2 norm squared, sum |u|^2 h^d.
  double norm_squared() const;
};

/// (F u)(y, theta) on the K^d discrete quasimomenta theta_m = 2 pi m / K
/// (wrapped into (-pi, pi]); values are theta-major.
struct FloquetField {
  int dimension = 1;
  int cells_per_axis = 1;
  IntVec cell_origin;
  int grid_per_axis = 1;
  std::vector<Quasimomentum> thetas;
  std::vector<Complex> values;

  std::size_t points_per_cell() const;
  Complex& at(std::size_t theta, std::size_t point) { return values[theta * points_per_cell() + point]; }
  Complex at(std::size_t theta, std::size_t point) const { return values[theta * points_per_cell() + point]; }
  /// sum |F|^2 h^d (2 pi / K)^d, the discrete L^2(T^d x T^d) norm squared.
  double norm_squared() const;
};

/// (F u)(y, theta) = (2 pi)^(-d/2) sum_n exp(i theta.n) u(y + 2 pi n).
FloquetField floquet_forward(const SampledFunction& u);

/// Exact inverse of floquet_forward on the same cell box.
SampledFunction floquet_inverse(const FloquetField& field);

/// One element exp(i gamma y) of the theta-pseudoperiodic eigenbasis.
struct Mode {
  IntVec index;           ///< integer part n of gamma = theta/(2 pi) + n
  Eigen::VectorXd gamma;
  double eigenvalue = 0;  ///< |gamma|^2
};

/// All modes with integer part in [-cutoff, cutoff]^d, last axis fastest.
std::vector<Mode> eigenbasis(const Quasimomentum& theta, int cutoff);

/// Number of modes (2 cutoff + 1)^d.
std::size_t mode_count(int dimension, int cutoff);

/// Coefficients alpha_gamma of sum_gamma alpha_gamma exp(i gamma y), ordered
/// as `eigenbasis(theta, cutoff)`.
struct ModalState {
  Quasimomentum theta;
  int cutoff = 0;
  Eigen::VectorXcd coefficients;

  static ModalState zero(const Quasimomentum& theta, int cutoff);
  /// Independent standard complex normal coefficients.
  static ModalState random(const Quasimomentum& theta, int cutoff, std::mt19937_64& rng);

  int dimension() const { return theta.dimension(); }
  std::vector<Mode> modes() const { return eigenbasis(theta, cutoff); }
  /// l^2 norm of the coefficients.
  double coefficient_norm() const { return coefficients.norm(); }
  /// L^2(T^d) norm, (2 pi)^(d/2) times the coefficient norm.
  double l2_norm() const;
  /// Pointwise value at y in R^d.
  Complex evaluate(const Eigen::Ref<const Eigen::VectorXd>& y) const;
};

/// Free evolution exp(i t Delta_theta): alpha_gamma -> exp(-i t |gamma|^2) alpha_gamma.
ModalState propagate(const ModalState& state, double t);

/// Integral over the ball B_R(0) of |sum alpha_gamma exp(i gamma y)|^2 via the
/// closed-form ball integrals. Requires R <= pi.
double restrict_mass(const ModalState& state, double ball_radius);

/// The same integral by nested Gauss-Legendre quadrature with `nodes` per axis.
double restrict_mass_quadrature(const ModalState& state, double ball_radius, int nodes);

/// Fourier coefficients of the fibre y -> field(y, theta_m) in the
/// eigenbasis at theta_m, by the discrete inner product on the torus grid.
ModalState fiber_coefficients(const FloquetField& field, std::size_t theta_index, int cutoff);

}  // namespace obslab

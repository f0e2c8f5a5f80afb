#pragma once

#include <string>
#include <vector>

#include "obslab/geometry.hpp"

namespace obslab {

/// u(x) = (2 pi nu)^(-d/4) exp(-|x - x0|^2 / (4 nu)), unit L^2 norm, with
/// Fourier transform (2 nu / pi)^(d/4) exp(-nu |xi|^2) up to a phase.
struct GaussianState {
  double nu = 1.0;
  Eigen::VectorXd center;

  int dimension() const { return static_cast<int>(center.size()); }
  double value(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// |u^(xi)| as a function of |xi|.
  double fourier_modulus(double xi_norm) const;
  /// |exp(t Delta) u|^2 at x.
  double heat_density(const Eigen::Ref<const Eigen::VectorXd>& x, double t) const;
  /// ||exp(t Delta) u||^2 = (nu / (nu + t))^(d/2).
  double heat_mass(double t) const;
};

GaussianState gaussian(double nu, Eigen::VectorXd center);

/// sup over |xi| <= E, t in [0, T] of |exp(-i xi^2 t) - exp(-xi^2 t)|, i.e.
/// the sup of |exp(-i s) - exp(-s)| over s in [0, T E^2].
double schrodinger_heat_gap(double E, double T);

/// sup over s in (0, T E^2] of |exp(-i s) - exp(-s)| / s, the constant C in
/// gap <= C T E^2.
double schrodinger_heat_gap_constant(double E, double T);

/// ||u^ restricted to |xi| >= E||^2 by radial quadrature.
double tail_mass(double nu, double E, int dimension);

/// integral_0^T ||1_S exp(t Delta) u||^2 dt. The heat-evolved profile is
/// closed form; space is integrated exactly over S in d = 1 and on a midpoint
/// grid with `space_points` per axis otherwise, time by Gauss-Legendre with
/// `time_nodes`. Throws NumericalError when doubling both resolutions moves
/// the value by more than 1e-4.
double heat_observation(const GaussianState& u, const ControlSet& set, double T,
                        int time_nodes = 24, int space_points = 128);

struct FourierGrid {
  int points_per_axis = 0;  ///< 0 picks a power of two from the box length and nu
  double box_length = 0.0;  ///< 0 picks 2 * clearing + 12 sqrt(nu + 2T)
  int time_nodes = 32;
  double leakage_tolerance = 1e-7;
};

struct QuotientReport {
  double value = 0.0;  ///< Q = integral_0^T ||1_S exp(i t Delta) u||^2 dt / ||u||^2
  double a1 = 0.0;     ///< 2 int_0^T ||(exp(-i xi^2 t) - exp(-xi^2 t)) u1^||^2 dt
  double a2 = 0.0;     ///< 4 T ||u2||^2
  double b = 0.0;      ///< int_0^T ||1_S exp(t Delta) u||^2 dt
  double a1_majorant = 0.0;  ///< 2 T gap(E, T)^2
  double splitting_rhs = 0.0;  ///< 2 (a1 + a2) + 2 b
  double E = 0.0;
  double nu = 0.0;
  double T = 0.0;
  Eigen::VectorXd center;
  double box_length = 0.0;
  int box_points = 0;
  double leakage = 0.0;  ///< |Q(box) - Q(doubled box)|
  bool splitting_holds = false;  ///< value <= splitting_rhs + 1e-6
};

QuotientReport observability_quotient(const GaussianState& u, const ControlSet& set, double T,
                                      double E, const FourierGrid& grid = {});

/// Q by the spectral box alone, without the splitting terms.
double quotient_on_box(const GaussianState& u, const ControlSet& set, double T, int points_per_axis,
                       double box_length, int time_nodes);

struct ScheduleChoice {
  double epsilon = 0.0;
  double T = 0.0;
  double base_radius = 0.0;
  double E = 0.0;          ///< largest E with 2 T gap(E, T)^2 <= epsilon / 6
  double nu = 0.0;         ///< smallest nu with 4 T tail_mass <= epsilon / 6
  double rho_final = 0.0;  ///< smallest clearing with heat_observation <= epsilon / 6
  Eigen::VectorXd center;
};

struct ScheduleStep {
  double rho = 0.0;
  QuotientReport report;
};

struct ThicknessSchedule {
  ScheduleChoice choice;
  std::vector<ScheduleStep> steps;
  bool strictly_decreasing = false;
  bool splitting_holds = false;
};

/// Periodic balls of radius `base_radius` with a clearing B_rho(x0), x0 = 0.
ControlSet cleared_periodic_balls(int dimension, double base_radius, double rho);

struct ScheduleOptions {
  FourierGrid grid;
  double E = 0.0;   ///< fixed E instead of the choice from T when positive
  double nu = 0.0;  ///< fixed nu instead of the choice from E when positive
};

/// Chooses E from T, then nu from E, then the clearing radius from nu, so
/// that the splitting bound is at most epsilon; then evaluates Q at the
/// clearing radii rho_final / 2^(steps - 1), ..., rho_final / 2, rho_final.
ThicknessSchedule thickness_schedule(int dimension, double T, double epsilon, double base_radius,
                                     int steps, const ScheduleOptions& options = {});

/// rho, Q, A1, A2, B, splitting bound per row.
std::string decay_curve_csv(const ThicknessSchedule& schedule);

}  // namespace obslab

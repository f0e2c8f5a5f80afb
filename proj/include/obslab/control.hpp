#pragma once

#include <functional>
#include <vector>

#include "obslab/floquet.hpp"
#include "obslab/gramian.hpp"

namespace obslab {

/// M[g][g'] = (integral over B_Rs of exp(i y (g - g'))) *
///            (integral over [t0, t0 + T] of exp(i t (|g|^2 - |g'|^2))),
/// so that alpha^* M alpha is the observed energy of the free evolution of
/// sum alpha_g exp(i g y) on B_Rs x [t0, t0 + T].
struct ObservabilityGramian {
  Quasimomentum theta;
  double horizon = 0.0;
  double radius = 0.0;
  int cutoff = 0;
  double window_start = 0.0;
  std::vector<Mode> modes;
  Eigen::MatrixXcd matrix;
};

ObservabilityGramian obs_gramian(const Quasimomentum& theta, double horizon, double radius,
                                 int cutoff, double window_start = 0.0);

/// Integral of exp(i t lambda) over [a, b].
Complex time_factor(double lambda, double a, double b);

/// Gram matrix of the lifted modes (g, |g|^2) over the (d+1)-ball of radius
/// min(Rs, T/2), which sits inside the centred cylinder B_Rs x [-T/2, T/2].
GramMatrix ball_observation_gramian(const Quasimomentum& theta, double horizon, double radius,
                                    int cutoff);

struct ThetaSweepReport {
  double horizon = 0.0;
  double radius = 0.0;
  int cutoff = 0;
  std::vector<Quasimomentum> thetas;
  std::vector<double> lambda_min;
  double global_min = 0.0;
  std::size_t worst_index = 0;
  double worst_lambda_refined = 0.0;  ///< lambda_min at the worst theta with cutoff doubled
  double stability_ratio = 0.0;       ///< lambda(cutoff) / lambda(2 cutoff) at the worst theta
};

/// Uniform grid theta_i = -pi + 2 pi (i + 1) / n per axis, in (-pi, pi]^d.
std::vector<Quasimomentum> theta_grid(int dimension, int per_axis);

ThetaSweepReport theta_sweep(int dimension, double horizon, double radius, int cutoff,
                             int theta_grid_n, unsigned threads = 1);

/// A control on B_Rs x (0, T) in the interaction frame:
/// f(s) = 1_B exp(i s Delta_theta) g(s), with the envelope g piecewise linear
/// between the uniform nodes s_j = j T / steps.
struct ControlTrajectory {
  Quasimomentum theta;
  int cutoff = 0;
  double radius = 0.0;
  double horizon = 0.0;
  std::vector<Eigen::VectorXcd> envelope;

  int time_steps() const { return static_cast<int>(envelope.size()) - 1; }
  double node_time(std::size_t j) const { return horizon * static_cast<double>(j) / time_steps(); }
  /// Coefficients of exp(i s Delta) g(s_j) at node j (before restriction to B).
  Eigen::VectorXcd physical(std::size_t j) const;

  static ControlTrajectory zero(const Quasimomentum& theta, int cutoff, double radius,
                                double horizon, int time_steps);
  /// Samples a control given by its modal coefficients in the lab frame.
  static ControlTrajectory from_physical(const Quasimomentum& theta, int cutoff, double radius,
                                         double horizon, int time_steps,
                                         const std::function<Eigen::VectorXcd(double)>& f);
};

/// u(T) = exp(i T Delta) u0 + integral_0^T exp(i (T - s) Delta) 1_B f(s) ds on
/// the mode truncation. Phases are integrated exactly against the piecewise
/// linear envelope; the rule is exact for constant envelopes and second order
/// otherwise.
ModalState simulate_duhamel(const ModalState& u0, const ControlTrajectory& control);

/// Integral over (0, T) x B of |f|^2, exact for a piecewise linear envelope.
double control_cost(const ControlTrajectory& control);

struct ControlSolution {
  ControlTrajectory control;
  Eigen::VectorXcd adjoint_state;  ///< eta, the HUM multiplier
  double cost = 0.0;               ///< ||f||^2 on B x (0, T)
  double expected_cost = 0.0;      ///< eta^* M eta
  double residual = 0.0;           ///< ||u(T)|| / ||u0||
  double lambda_min = 0.0;         ///< smallest eigenvalue of M
  double observability_constant = 0.0;  ///< lambda_min / (2 pi)^d, for L^2 norms
  ModalState final_state;
};

/// Minimal-norm null control: f(s) = 1_B exp(i s Delta) eta with
/// M eta = -(2 pi)^d a, a the coefficients of u0. Throws NumericalError when
/// the Gramian is numerically singular.
ControlSolution hum_control(const ModalState& u0, double horizon, double radius, int time_steps);

/// Steers u0 to target by null-controlling u0 - exp(-i T Delta) target.
ControlSolution steer(const ModalState& u0, const ModalState& target, double horizon,
                      double radius, int time_steps);

}  // namespace obslab

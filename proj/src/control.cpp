#include "obslab/control.hpp"

#include <array>

#include <Eigen/Cholesky>

#include "obslab/lattice.hpp"

namespace obslab {

Complex time_factor(double lambda, double a, double b) {
  const double length = b - a;
  const double x = lambda * length;
  if (std::abs(x) < 1e-6) {
    // (exp(i x) - 1) / (i x) = 1 + i x / 2 - x^2 / 6 + ...
    const Complex series = Complex(1.0 - x * x / 6.0, 0.5 * x);
    return std::polar(1.0, lambda * a) * length * series;
  }
  return (std::polar(1.0, lambda * b) - std::polar(1.0, lambda * a)) / Complex(0.0, lambda);
}

ObservabilityGramian obs_gramian(const Quasimomentum& theta, double horizon, double radius,
                                 int cutoff, double window_start) {
  require(horizon > 0.0, "obs_gramian: horizon must be positive");
  require(radius > 0.0, "obs_gramian: radius must be positive");
  require(radius <= kPi, "obs_gramian: radius exceeds the torus half-width");
  require(cutoff >= 0, "obs_gramian: cutoff must be non-negative");
  ObservabilityGramian out;
  out.theta = theta;
  out.horizon = horizon;
  out.radius = radius;
  out.cutoff = cutoff;
  out.window_start = window_start;
  out.modes = eigenbasis(theta, cutoff);
  const auto n = static_cast<Eigen::Index>(out.modes.size());
  out.matrix.resize(n, n);
  const double a = window_start;
  const double b = window_start + horizon;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Mode& mj = out.modes[static_cast<std::size_t>(j)];
    out.matrix(j, j) = ball_volume(theta.dimension(), radius) * horizon;
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const Mode& mk = out.modes[static_cast<std::size_t>(k)];
      const double space = ball_exp_integral(mj.gamma - mk.gamma, radius);
      const Complex v = space * time_factor(mj.eigenvalue - mk.eigenvalue, a, b);
      out.matrix(j, k) = v;
      out.matrix(k, j) = std::conj(v);
    }
  }
  return out;
}

GramMatrix ball_observation_gramian(const Quasimomentum& theta, double horizon, double radius,
                                    int cutoff) {
  return gram_matrix(build_lifted(theta, cutoff).points, std::min(radius, 0.5 * horizon));
}

std::vector<Quasimomentum> theta_grid(int dimension, int per_axis) {
  require(dimension >= 1, "theta_grid: dimension must be positive");
  require(per_axis >= 1, "theta_grid: grid size must be positive");
  std::vector<Quasimomentum> out;
  for_each_box_index(dimension, 0, per_axis - 1, [&](const IntVec& idx) {
    Eigen::VectorXd v(dimension);
    for (int i = 0; i < dimension; ++i)
      v[i] = -kPi + kTwoPi * (idx[static_cast<std::size_t>(i)] + 1) / per_axis;
    out.push_back(Quasimomentum::wrapped(v));
  });
  return out;
}

ThetaSweepReport theta_sweep(int dimension, double horizon, double radius, int cutoff,
                             int theta_grid_n, unsigned threads) {
  ThetaSweepReport out;
  out.horizon = horizon;
  out.radius = radius;
  out.cutoff = cutoff;
  out.thetas = theta_grid(dimension, theta_grid_n);
  out.lambda_min.assign(out.thetas.size(), 0.0);
  parallel_for(out.thetas.size(), threads, [&](std::size_t i) {
    out.lambda_min[i] = smallest_eigenvalue(obs_gramian(out.thetas[i], horizon, radius, cutoff).matrix);
  });
  const auto worst = std::min_element(out.lambda_min.begin(), out.lambda_min.end());
  out.worst_index = static_cast<std::size_t>(worst - out.lambda_min.begin());
  out.global_min = *worst;
  out.worst_lambda_refined =
      smallest_eigenvalue(obs_gramian(out.thetas[out.worst_index], horizon, radius, 2 * cutoff).matrix);
  out.stability_ratio = out.global_min / out.worst_lambda_refined;
  return out;
}

Eigen::VectorXcd ControlTrajectory::physical(std::size_t j) const {
  const auto modes = eigenbasis(theta, cutoff);
  const double s = node_time(j);
  Eigen::VectorXcd out = envelope[j];
  for (std::size_t m = 0; m < modes.size(); ++m)
    out[static_cast<Eigen::Index>(m)] *= std::polar(1.0, -s * modes[m].eigenvalue);
  return out;
}

ControlTrajectory ControlTrajectory::zero(const Quasimomentum& theta, int cutoff, double radius,
                                          double horizon, int time_steps) {
  require(time_steps >= 1, "ControlTrajectory: need at least one time step");
  ControlTrajectory out;
  out.theta = theta;
  out.cutoff = cutoff;
  out.radius = radius;
  out.horizon = horizon;
  const auto n = static_cast<Eigen::Index>(mode_count(theta.dimension(), cutoff));
  out.envelope.assign(static_cast<std::size_t>(time_steps) + 1, Eigen::VectorXcd::Zero(n));
  return out;
}

ControlTrajectory ControlTrajectory::from_physical(const Quasimomentum& theta, int cutoff,
                                                   double radius, double horizon, int time_steps,
                                                   const std::function<Eigen::VectorXcd(double)>& f) {
  ControlTrajectory out = zero(theta, cutoff, radius, horizon, time_steps);
  const auto modes = eigenbasis(theta, cutoff);
  for (std::size_t j = 0; j < out.envelope.size(); ++j) {
    const double s = out.node_time(j);
    Eigen::VectorXcd v = f(s);
    require(v.size() == out.envelope[j].size(), "ControlTrajectory: coefficient count mismatch");
    for (std::size_t m = 0; m < modes.size(); ++m)
      v[static_cast<Eigen::Index>(m)] *= std::polar(1.0, s * modes[m].eigenvalue);
    out.envelope[j] = v;
  }
  return out;
}

namespace {

/// I_p(x) = integral_0^1 sigma^p exp(i x sigma) d sigma for p = 0, 1, 2.
std::array<Complex, 3> phase_moments(double x) {
  std::array<Complex, 3> out{};
  if (std::abs(x) < 0.5) {
    const Complex ix(0.0, x);
    for (int p = 0; p < 3; ++p) {
      Complex term = 1.0;
      Complex sum = 0.0;
      for (int k = 0; k < 30; ++k) {
        if (k > 0) term *= ix / static_cast<double>(k);
        sum += term / static_cast<double>(k + p + 1);
      }
      out[static_cast<std::size_t>(p)] = sum;
    }
    return out;
  }
  const Complex ix(0.0, x);
  const Complex e = std::polar(1.0, x);
  out[0] = (e - 1.0) / ix;
  out[1] = e / ix - out[0] / ix;
  out[2] = e / ix - 2.0 * out[1] / ix;
  return out;
}

/// Projection of 1_B onto the truncated modes: P[g][g'] = S(g - g') / (2 pi)^d.
Eigen::MatrixXd restriction_matrix(const std::vector<Mode>& modes, int d, double radius) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXd p(n, n);
  const double norm = std::pow(kTwoPi, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    p(j, j) = ball_volume(d, radius) / norm;
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double v = ball_exp_integral(modes[static_cast<std::size_t>(j)].gamma -
                                             modes[static_cast<std::size_t>(k)].gamma,
                                         radius) /
                       norm;
      p(j, k) = v;
      p(k, j) = v;
    }
  }
  return p;
}

void check_compatible(const ModalState& u0, const ControlTrajectory& c) {
  require(c.time_steps() >= 1, "control trajectory has no time steps");
  require(u0.cutoff == c.cutoff, "control and state use different cutoffs");
  require((u0.theta.value() - c.theta.value()).norm() == 0.0,
          "control and state use different quasimomenta");
}

}  // namespace

ModalState simulate_duhamel(const ModalState& u0, const ControlTrajectory& control) {
  check_compatible(u0, control);
  const int d = u0.dimension();
  const auto modes = eigenbasis(u0.theta, u0.cutoff);
  const auto n = static_cast<Eigen::Index>(modes.size());
  const Eigen::MatrixXd p = restriction_matrix(modes, d, control.radius);
  const int steps = control.time_steps();
  const double h = control.horizon / steps;

  // w[g] = sum_g' P[g][g'] integral_0^T exp(i s (|g|^2 - |g'|^2)) env_g'(s) ds
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (p(j, k) == 0.0) continue;
      const double lambda = modes[static_cast<std::size_t>(j)].eigenvalue -
                            modes[static_cast<std::size_t>(k)].eigenvalue;
      const auto mom = phase_moments(lambda * h);
      Complex inner = 0.0;
      for (int s = 0; s < steps; ++s) {
        const Complex g0 = control.envelope[static_cast<std::size_t>(s)][k];
        const Complex g1 = control.envelope[static_cast<std::size_t>(s) + 1][k];
        inner += std::polar(1.0, lambda * s * h) * (mom[0] * g0 + mom[1] * (g1 - g0));
      }
      acc += p(j, k) * h * inner;
    }
    w[j] = acc;
  }
  ModalState out = u0;
  for (Eigen::Index j = 0; j < n; ++j)
    out.coefficients[j] = std::polar(1.0, -control.horizon * modes[static_cast<std::size_t>(j)].eigenvalue) *
                          (u0.coefficients[j] + w[j]);
  return out;
}

double control_cost(const ControlTrajectory& control) {
  const int d = control.theta.dimension();
  const auto modes = eigenbasis(control.theta, control.cutoff);
  const auto n = static_cast<Eigen::Index>(modes.size());
  const Eigen::MatrixXd p = restriction_matrix(modes, d, control.radius) * std::pow(kTwoPi, d);
  const int steps = control.time_steps();
  const double h = control.horizon / steps;
  Complex total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (p(j, k) == 0.0) continue;
      const double lambda = modes[static_cast<std::size_t>(j)].eigenvalue -
                            modes[static_cast<std::size_t>(k)].eigenvalue;
      const auto mom = phase_moments(lambda * h);
      Complex inner = 0.0;
      for (int s = 0; s < steps; ++s) {
        const auto& e0 = control.envelope[static_cast<std::size_t>(s)];
        const auto& e1 = control.envelope[static_cast<std::size_t>(s) + 1];
        const Complex a0 = std::conj(e0[j]);
        const Complex da = std::conj(e1[j] - e0[j]);
        const Complex b0 = e0[k];
        const Complex db = e1[k] - e0[k];
        inner += std::polar(1.0, lambda * s * h) *
                 (mom[0] * a0 * b0 + mom[1] * (a0 * db + da * b0) + mom[2] * da * db);
      }
      total += p(j, k) * h * inner;
    }
  }
  return total.real();
}

ControlSolution hum_control(const ModalState& u0, double horizon, double radius, int time_steps) {
  require(time_steps >= 1, "hum_control: need at least one time step");
  const int d = u0.dimension();
  const ObservabilityGramian m = obs_gramian(u0.theta, horizon, radius, u0.cutoff);
  const EigenPair low = smallest_eigenpair(m.matrix);
  const double scale = m.matrix.cwiseAbs().maxCoeff();
  if (low.value <= 1e-10 * scale)
    throw NumericalError("hum_control: observability Gramian is numerically singular (lambda_min = " +
                         std::to_string(low.value) + ")");
  const double volume = std::pow(kTwoPi, d);
  Eigen::LDLT<Eigen::MatrixXcd> solver(m.matrix);
  const Eigen::VectorXcd eta = solver.solve(-volume * u0.coefficients);

  ControlSolution out;
  out.control = ControlTrajectory::zero(u0.theta, u0.cutoff, radius, horizon, time_steps);
  for (auto& e : out.control.envelope) e = eta;
  out.adjoint_state = eta;
  out.lambda_min = low.value;
  out.observability_constant = low.value / volume;
  out.expected_cost = (eta.adjoint() * m.matrix * eta)(0, 0).real();
  out.cost = control_cost(out.control);
  out.final_state = simulate_duhamel(u0, out.control);
  const double start = u0.coefficient_norm();
  out.residual = start > 0.0 ? out.final_state.coefficient_norm() / start : 0.0;
  return out;
}

ControlSolution steer(const ModalState& u0, const ModalState& target, double horizon, double radius,
                      int time_steps) {
  require(u0.cutoff == target.cutoff, "steer: states use different cutoffs");
  require((u0.theta.value() - target.theta.value()).norm() == 0.0,
          "steer: states use different quasimomenta");
  ModalState shifted = u0;
  shifted.coefficients -= propagate(target, -horizon).coefficients;
  ControlSolution out = hum_control(shifted, horizon, radius, time_steps);
  out.final_state = simulate_duhamel(u0, out.control);
  const double start = (u0.coefficients - propagate(target, -horizon).coefficients).norm();
  const double miss = (out.final_state.coefficients - target.coefficients).norm();
  out.residual = start > 0.0 ? miss / start : 0.0;
  return out;
}

}  // namespace obslab

#include <random>

#include <gtest/gtest.h>

#include "obslab/control.hpp"
#include "oracles.hpp"

using namespace obslab;

namespace {

Quasimomentum theta1(double t) { return Quasimomentum(Eigen::VectorXd::Constant(1, t)); }

double lambda_min(const Eigen::MatrixXcd& m) { return smallest_eigenvalue(m); }

}  // namespace

TEST(ObsGramian, SingleMode) {
  const ObservabilityGramian g = obs_gramian(Quasimomentum(Eigen::Vector2d(0.2, 0.1)), 1.7, 0.9, 0);
  ASSERT_EQ(g.matrix.rows(), 1);
  EXPECT_NEAR(g.matrix(0, 0).real(), 1.7 * oracle::pi * 0.81, 1e-14);
}

TEST(ObsGramian, FullTorusIsDiagonal) {
  for (double theta : {0.0, 0.7, kPi}) {
    const ObservabilityGramian g = obs_gramian(theta1(theta), 2.0, kPi, 6);
    const Eigen::MatrixXcd off = g.matrix - Eigen::MatrixXcd(g.matrix.diagonal().asDiagonal());
    EXPECT_LE(off.cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(lambda_min(g.matrix), 2 * oracle::pi * 2.0, 1e-12);
  }
}

TEST(ObsGramian, HermitianWithExactDiagonal) {
  const ObservabilityGramian g = obs_gramian(Quasimomentum(Eigen::Vector2d(0.4, -1.0)), 3.0, 1.2, 2);
  EXPECT_EQ((g.matrix - g.matrix.adjoint()).norm(), 0.0);
  for (Eigen::Index i = 0; i < g.matrix.rows(); ++i)
    EXPECT_EQ(g.matrix(i, i), Complex(3.0 * ball_volume(2, 1.2), 0.0));
}

TEST(ObsGramian, MatchesTimeQuadratureThroughFloquet) {
  std::mt19937_64 rng(41);
  const ObservabilityGramian g = obs_gramian(Quasimomentum::zero(1), 1.0, 1.0, 5);
  for (int trial = 0; trial < 5; ++trial) {
    const ModalState s = ModalState::random(Quasimomentum::zero(1), 5, rng);
    const double ref = oracle::integrate([&](double t) { return restrict_mass(propagate(s, t), 1.0); }, 0.0, 1.0, 8, 24);
    const double form = (s.coefficients.adjoint() * g.matrix * s.coefficients)(0, 0).real();
    EXPECT_NEAR(form, ref, 1e-6 * std::max(1.0, ref));
  }
  for (int trial = 0; trial < 3; ++trial) {
    const Quasimomentum th(Eigen::Vector2d(0.3, 2.0));
    const ModalState s = ModalState::random(th, 1, rng);
    const ObservabilityGramian g2 = obs_gramian(th, 0.8, 1.1, 1);
    const double ref = oracle::integrate([&](double t) { return restrict_mass(propagate(s, t), 1.1); }, 0.0, 0.8, 4, 20);
    const double form = (s.coefficients.adjoint() * g2.matrix * s.coefficients)(0, 0).real();
    EXPECT_NEAR(form / ref, 1.0, 1e-9);
  }
}

TEST(ObsGramian, WindowShiftKeepsSpectrum) {
  for (double theta : {0.0, 1.3}) {
    const double a = lambda_min(obs_gramian(theta1(theta), 2.0, 1.0, 6).matrix);
    const double b = lambda_min(obs_gramian(theta1(theta), 2.0, 1.0, 6, -1.0).matrix);
    EXPECT_NEAR(a, b, 1e-10 * a);
  }
}

TEST(ObsGramian, CylinderDominatesBall) {
  for (double theta : {0.0, 0.9, kPi})
    for (double T : {1.0, 3.0}) {
      const double cyl = lambda_min(obs_gramian(theta1(theta), T, 1.0, 4, -T / 2).matrix);
      const double ball = smallest_eigenvalue(ball_observation_gramian(theta1(theta), T, 1.0, 4).entries);
      EXPECT_GE(cyl, ball - 1e-12) << theta << " " << T;
    }
}

TEST(ObsGramian, InvalidArguments) {
  EXPECT_THROW(obs_gramian(theta1(0.0), 1.0, 3.5, 2), std::invalid_argument);
  EXPECT_THROW(obs_gramian(theta1(0.0), 0.0, 1.0, 2), std::invalid_argument);
}

TEST(TimeFactor, ClosedForm) {
  EXPECT_EQ(time_factor(0.0, 1.0, 3.5), Complex(2.5, 0.0));
  const Complex v = time_factor(2.0, 0.5, 1.5);
  const Complex ref = (std::polar(1.0, 3.0) - std::polar(1.0, 1.0)) / Complex(0.0, 2.0);
  EXPECT_NEAR(std::abs(v - ref), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(time_factor(1e-9, 0.0, 1.0) - Complex(1.0, 0.5e-9)), 0.0, 1e-15);
}

TEST(ThetaSweep, GridLayout) {
  const auto grid = theta_grid(1, 4);
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_NEAR(grid[0][0], -kPi / 2, 1e-15);
  EXPECT_NEAR(grid[3][0], kPi, 1e-15);
  EXPECT_EQ(theta_grid(2, 3).size(), 9u);
}

TEST(ThetaSweep, FullTorusConstant) {
  const ThetaSweepReport r = theta_sweep(1, 1.5, kPi, 4, 16);
  for (double l : r.lambda_min) EXPECT_NEAR(l, 2 * oracle::pi * 1.5, 1e-12);
  EXPECT_NEAR(r.stability_ratio, 1.0, 1e-12);
}

TEST(ThetaSweep, PositiveAndStableUnderRefinement) {
  const ThetaSweepReport coarse = theta_sweep(1, kTwoPi, 1.0, 15, 64, 2);
  for (double l : coarse.lambda_min) EXPECT_GT(l, 0.0);
  EXPECT_EQ(coarse.global_min, *std::min_element(coarse.lambda_min.begin(), coarse.lambda_min.end()));
  const ThetaSweepReport fine = theta_sweep(1, kTwoPi, 1.0, 15, 128, 2);
  EXPECT_GE(fine.global_min, coarse.global_min * (1 - 1e-2));
}

TEST(ThetaSweep, ThreadCountDoesNotChangeResults) {
  const ThetaSweepReport a = theta_sweep(1, 2.0, 1.0, 6, 12, 1);
  const ThetaSweepReport b = theta_sweep(1, 2.0, 1.0, 6, 12, 4);
  EXPECT_EQ(a.lambda_min, b.lambda_min);
}

TEST(Duhamel, ZeroControlIsFreeEvolution) {
  std::mt19937_64 rng(42);
  const ModalState u0 = ModalState::random(theta1(0.3), 4, rng);
  const ControlTrajectory f = ControlTrajectory::zero(u0.theta, 4, 1.0, 2.5, 16);
  EXPECT_EQ((simulate_duhamel(u0, f).coefficients - propagate(u0, 2.5).coefficients).norm(), 0.0);
  EXPECT_EQ(control_cost(f), 0.0);
}

TEST(Duhamel, ConstantForcingOnFullTorus) {
  const Quasimomentum th = theta1(0.8);
  const int cutoff = 2;
  const double T = 1.7;
  ModalState u0 = ModalState::zero(th, cutoff);
  u0.coefficients[1] = 0.4;
  const auto modes = eigenbasis(th, cutoff);
  const Complex c(0.3, -1.1);
  const std::size_t m = 3;
  Eigen::VectorXcd forcing = Eigen::VectorXcd::Zero(5);
  forcing[static_cast<Eigen::Index>(m)] = c;
  const ControlTrajectory f = ControlTrajectory::from_physical(th, cutoff, kPi, T, 512, [&](double) { return forcing; });
  const ModalState out = simulate_duhamel(u0, f);
  const double lam = modes[m].eigenvalue;
  const Complex expected = c * (1.0 - std::polar(1.0, -T * lam)) / Complex(0.0, lam);
  EXPECT_NEAR(std::abs(out.coefficients[static_cast<Eigen::Index>(m)] - expected), 0.0, 1e-5);
  EXPECT_NEAR(std::abs(out.coefficients[1] - std::polar(1.0, -T * modes[1].eigenvalue) * 0.4), 0.0, 1e-15);
}

TEST(Duhamel, SecondOrderInTimeSteps) {
  std::mt19937_64 rng(43);
  const Quasimomentum th = theta1(0.5);
  const int cutoff = 3;
  const ModalState u0 = ModalState::random(th, cutoff, rng);
  Eigen::VectorXcd base(7);
  for (auto& v : base) v = Complex(std::normal_distribution<double>()(rng), 0.2);
  const auto forcing = [&](double s) {
    Eigen::VectorXcd v = base;
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] *= std::cos(1.3 * s + 0.2 * static_cast<double>(i));
    return v;
  };
  const double T = 2.0;
  const ModalState reference =
      simulate_duhamel(u0, ControlTrajectory::from_physical(th, cutoff, 1.0, T, 8192, forcing));
  double previous = 0.0;
  for (int steps : {32, 64, 128}) {
    const ModalState s = simulate_duhamel(u0, ControlTrajectory::from_physical(th, cutoff, 1.0, T, steps, forcing));
    const double err = (s.coefficients - reference.coefficients).norm();
    if (previous > 0.0) EXPECT_GE(previous / err, 3.9) << steps;
    previous = err;
  }
}

TEST(Duhamel, MismatchedGridsThrow) {
  const ModalState u0 = ModalState::zero(theta1(0.0), 2);
  EXPECT_THROW(simulate_duhamel(u0, ControlTrajectory::zero(theta1(0.0), 3, 1.0, 1.0, 4)), std::invalid_argument);
  EXPECT_THROW(simulate_duhamel(u0, ControlTrajectory::zero(theta1(0.1), 2, 1.0, 1.0, 4)), std::invalid_argument);
}

TEST(Hum, FullTorusClosedForm) {
  std::mt19937_64 rng(44);
  const ModalState u0 = ModalState::random(theta1(-0.6), 8, rng);
  const double T = 1.3;
  const ControlSolution s = hum_control(u0, T, kPi, 64);
  const double l2 = u0.l2_norm() * u0.l2_norm();
  EXPECT_LE(s.residual, 1e-10);
  EXPECT_NEAR(s.cost, l2 / T, 1e-10 * l2 / T);
  EXPECT_NEAR(s.expected_cost, l2 / T, 1e-10 * l2 / T);
}

TEST(Hum, ZeroStateGivesZeroControl) {
  const ModalState u0 = ModalState::zero(theta1(0.3), 5);
  const ControlSolution s = hum_control(u0, 2.0, 1.0, 32);
  EXPECT_EQ(s.cost, 0.0);
  EXPECT_EQ(s.adjoint_state.norm(), 0.0);
  EXPECT_EQ(s.residual, 0.0);
}

TEST(Hum, EndToEndNullControl) {
  std::mt19937_64 rng(45);
  for (double theta : {0.0, 0.3}) {
    const ModalState u0 = ModalState::random(theta1(theta), 30, rng);
    const ControlSolution s = hum_control(u0, kTwoPi, 1.0, 512);
    EXPECT_LE(s.residual, 1e-8) << theta;
    EXPECT_NEAR(s.cost, s.expected_cost, 1e-8 * s.expected_cost);
    const double l2 = u0.l2_norm() * u0.l2_norm();
    EXPECT_LE(s.cost, l2 / s.observability_constant * (1 + 1e-3));
  }
}

TEST(Hum, SteerReachesTarget) {
  std::mt19937_64 rng(46);
  const ModalState u0 = ModalState::random(theta1(1.0), 6, rng);
  const ModalState target = ModalState::random(theta1(1.0), 6, rng);
  const ControlSolution s = steer(u0, target, 3.0, 1.2, 64);
  EXPECT_LE((s.final_state.coefficients - target.coefficients).norm(), 1e-9 * target.coefficient_norm());
  EXPECT_LE(s.residual, 1e-9);
}

TEST(Hum, SingularGramianIsReported) {
  const ModalState u0 = ModalState::zero(theta1(0.0), 20);
  EXPECT_THROW(hum_control(u0, 0.05, 0.05, 8), NumericalError);
}

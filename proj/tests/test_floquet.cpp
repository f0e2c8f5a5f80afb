#include <random>

#include <gtest/gtest.h>

#include "obslab/floquet.hpp"
#include "oracles.hpp"

using namespace obslab;

namespace {

SampledFunction random_function(int d, int cells, int grid, std::mt19937_64& rng) {
  SampledFunction u = SampledFunction::zeros(d, cells, grid);
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& v : u.values) v = Complex(n(rng), n(rng));
  return u;
}

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

ModalState modal(double theta, int cutoff, std::initializer_list<Complex> coefficients) {
  ModalState s = ModalState::zero(Quasimomentum(Eigen::VectorXd::Constant(1, theta)), cutoff);
  Eigen::Index i = 0;
  for (Complex c : coefficients) s.coefficients[i++] = c;
  return s;
}

}  // namespace

TEST(FloquetForward, SingleCellIsScaledCopy) {
  std::mt19937_64 rng(1);
  SampledFunction u = random_function(2, 1, 8, rng);
  const FloquetField f = floquet_forward(u);
  ASSERT_EQ(f.thetas.size(), 1u);
  for (std::size_t p = 0; p < u.points_per_cell(); ++p)
    EXPECT_NEAR(std::abs(f.at(0, p) - u.at(0, p) / (2 * oracle::pi)), 0.0, 1e-15);
}

TEST(FloquetForward, TwoCellSum) {
  std::mt19937_64 rng(2);
  SampledFunction u = SampledFunction::zeros(1, 4, 16);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Complex> g(16);
  for (auto& v : g) v = Complex(n(rng), n(rng));
  // cells carry indices 0..3; put g on cells 0 and 1
  for (std::size_t p = 0; p < 16; ++p) {
    u.at(0, p) = g[p];
    u.at(1, p) = g[p];
  }
  const FloquetField f = floquet_forward(u);
  for (std::size_t m = 0; m < 4; ++m) {
    const double theta = f.thetas[m][0];
    const Complex factor = (1.0 + std::polar(1.0, theta)) / std::sqrt(2 * oracle::pi);
    for (std::size_t p = 0; p < 16; ++p) EXPECT_NEAR(std::abs(f.at(m, p) - factor * g[p]), 0.0, 1e-14);
  }
  EXPECT_NEAR(f.norm_squared(), u.norm_squared(), 1e-12 * u.norm_squared());
}

TEST(FloquetForward, IsometryOnRandomFunctions) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const SampledFunction u1 = random_function(1, 4, 32, rng);
    EXPECT_NEAR(floquet_forward(u1).norm_squared() / u1.norm_squared(), 1.0, 1e-10);
    const SampledFunction u2 = random_function(2, 2, 16, rng);
    EXPECT_NEAR(floquet_forward(u2).norm_squared() / u2.norm_squared(), 1.0, 1e-10);
  }
}

TEST(FloquetForward, ShiftedCellOrigin) {
  std::mt19937_64 rng(4);
  SampledFunction u = SampledFunction::zeros(1, 3, 8, {-1});
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& v : u.values) v = Complex(n(rng), n(rng));
  const FloquetField f = floquet_forward(u);
  for (std::size_t m = 0; m < 3; ++m) {
    const double theta = f.thetas[m][0];
    for (std::size_t p = 0; p < 8; ++p) {
      Complex expected = 0.0;
      for (int c = 0; c < 3; ++c) expected += std::polar(1.0, theta * (c - 1)) * u.at(c, p);
      expected /= std::sqrt(2 * oracle::pi);
      EXPECT_NEAR(std::abs(f.at(m, p) - expected), 0.0, 1e-14);
    }
  }
}

TEST(FloquetForward, CommutesWithPeriodicMultiplication) {
  std::mt19937_64 rng(5);
  SampledFunction u = random_function(2, 3, 8, rng);
  SampledFunction fu = u;
  for (std::size_t c = 0; c < u.cell_count(); ++c)
    for (std::size_t p = 0; p < u.points_per_cell(); ++p) {
      const Eigen::VectorXd y = u.torus_point(p);
      fu.at(c, p) *= Complex(std::cos(y[0]) + 0.3, std::sin(2 * y[1]));
    }
  const FloquetField a = floquet_forward(fu);
  const FloquetField b = floquet_forward(u);
  for (std::size_t m = 0; m < b.thetas.size(); ++m)
    for (std::size_t p = 0; p < u.points_per_cell(); ++p) {
      const Eigen::VectorXd y = u.torus_point(p);
      EXPECT_NEAR(std::abs(a.at(m, p) - Complex(std::cos(y[0]) + 0.3, std::sin(2 * y[1])) * b.at(m, p)),
                  0.0, 1e-13);
    }
}

TEST(FloquetForward, RejectsMalformedInput) {
  SampledFunction u = SampledFunction::zeros(1, 2, 4);
  u.values.pop_back();
  EXPECT_THROW(floquet_forward(u), std::invalid_argument);
}

TEST(FloquetInverse, RoundTrip) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const SampledFunction u = random_function(1, 4, 32, rng);
    EXPECT_LE(max_abs_diff(floquet_inverse(floquet_forward(u)).values, u.values), 1e-10);
    const SampledFunction v = random_function(2, 2, 16, rng);
    EXPECT_LE(max_abs_diff(floquet_inverse(floquet_forward(v)).values, v.values), 1e-10);
  }
}

TEST(FloquetInverse, ConstantInThetaLivesOnCellZero) {
  std::mt19937_64 rng(7);
  SampledFunction u = SampledFunction::zeros(1, 4, 8);
  std::normal_distribution<double> n(0.0, 1.0);
  for (std::size_t p = 0; p < 8; ++p) u.at(0, p) = Complex(n(rng), n(rng));
  FloquetField f = floquet_forward(u);
  const SampledFunction back = floquet_inverse(f);
  for (std::size_t c = 1; c < 4; ++c)
    for (std::size_t p = 0; p < 8; ++p) EXPECT_NEAR(std::abs(back.at(c, p)), 0.0, 1e-14);
}

TEST(FloquetInverse, ZeroFieldGivesZero) {
  const FloquetField f = floquet_forward(SampledFunction::zeros(2, 2, 4));
  for (const auto& v : floquet_inverse(f).values) EXPECT_EQ(v, Complex(0.0, 0.0));
}

TEST(FloquetInverse, MalformedGridThrows) {
  FloquetField f = floquet_forward(SampledFunction::zeros(1, 2, 4));
  f.thetas.pop_back();
  EXPECT_THROW(floquet_inverse(f), std::invalid_argument);
}

TEST(Eigenbasis, IntegerLattice) {
  const auto modes = eigenbasis(Quasimomentum::zero(1), 1);
  ASSERT_EQ(modes.size(), 3u);
  EXPECT_DOUBLE_EQ(modes[0].gamma[0], -1.0);
  EXPECT_DOUBLE_EQ(modes[1].gamma[0], 0.0);
  EXPECT_DOUBLE_EQ(modes[2].gamma[0], 1.0);
  EXPECT_DOUBLE_EQ(modes[0].eigenvalue, 1.0);
  EXPECT_DOUBLE_EQ(modes[1].eigenvalue, 0.0);
}

TEST(Eigenbasis, HalfShiftAtPi) {
  const auto modes = eigenbasis(Quasimomentum(Eigen::VectorXd::Constant(1, kPi)), 0);
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_DOUBLE_EQ(modes[0].gamma[0], 0.5);
  EXPECT_DOUBLE_EQ(modes[0].eigenvalue, 0.25);
}

TEST(Eigenbasis, CountAndPseudoperiodicity) {
  const Quasimomentum theta(Eigen::Vector2d(0.7, -2.1));
  for (int cutoff : {0, 1, 3}) EXPECT_EQ(eigenbasis(theta, cutoff).size(), mode_count(2, cutoff));
  EXPECT_EQ(mode_count(3, 2), 125u);
  EXPECT_THROW(eigenbasis(theta, -1), std::invalid_argument);
  std::mt19937_64 rng(8);
  const ModalState s = ModalState::random(theta, 2, rng);
  const Eigen::Vector2d y(0.3, -1.2);
  for (int axis = 0; axis < 2; ++axis) {
    const Eigen::Vector2d shifted = y + kTwoPi * Eigen::Vector2d::Unit(axis);
    EXPECT_NEAR(std::abs(s.evaluate(shifted) - std::polar(1.0, theta[axis]) * s.evaluate(y)), 0.0, 1e-11);
  }
}

TEST(Propagate, IdentityAtZeroAndPhaseOfSingleMode) {
  std::mt19937_64 rng(9);
  const ModalState s = ModalState::random(Quasimomentum(Eigen::VectorXd::Constant(1, 0.4)), 4, rng);
  EXPECT_EQ((propagate(s, 0.0).coefficients - s.coefficients).norm(), 0.0);
  ModalState one = modal(0.4, 1, {0.0, Complex(2.0, 1.0), 0.0});
  const double g = 0.4 / (2 * oracle::pi);
  const ModalState p = propagate(one, 1.7);
  EXPECT_NEAR(std::abs(p.coefficients[1] - std::polar(1.0, -1.7 * g * g) * Complex(2.0, 1.0)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(p.coefficient_norm(), one.coefficient_norm());
}

TEST(Propagate, GroupPropertyAndUnitarity) {
  std::mt19937_64 rng(10);
  const ModalState s = ModalState::random(Quasimomentum(Eigen::Vector2d(0.1, 3.0)), 5, rng);
  const ModalState back = propagate(propagate(s, 3.3), -3.3);
  EXPECT_LE((back.coefficients - s.coefficients).norm(), 1e-12 * s.coefficient_norm());
  EXPECT_NEAR(propagate(s, 11.0).coefficient_norm() / s.coefficient_norm(), 1.0, 1e-12);
  const ModalState ab = propagate(propagate(s, 0.4), 0.9);
  EXPECT_LE((ab.coefficients - propagate(s, 1.3).coefficients).norm(), 1e-12 * s.coefficient_norm());
}

TEST(RestrictMass, SingleModeIsBallVolume) {
  const ModalState s = modal(1.1, 2, {0.0, 0.0, 0.0, Complex(0.6, -0.8), 0.0});
  EXPECT_NEAR(restrict_mass(s, 1.3), 2 * 1.3, 1e-14);
  ModalState s2 = ModalState::zero(Quasimomentum(Eigen::Vector2d(0.0, 1.0)), 1);
  s2.coefficients[4] = 2.0;
  EXPECT_NEAR(restrict_mass(s2, 2.0), 4.0 * oracle::pi * 4.0, 1e-12);
}

TEST(RestrictMass, FullTorusIsParseval) {
  std::mt19937_64 rng(11);
  const ModalState s = ModalState::random(Quasimomentum(Eigen::VectorXd::Constant(1, -1.9)), 6, rng);
  EXPECT_NEAR(restrict_mass(s, kPi), 2 * oracle::pi * s.coefficients.squaredNorm(),
              1e-12 * s.coefficients.squaredNorm());
}

TEST(RestrictMass, MatchesPolarQuadrature) {
  std::mt19937_64 rng(12);
  {
    const ModalState s = ModalState::random(Quasimomentum(Eigen::VectorXd::Constant(1, 0.0)), 2, rng);
    const double ref = oracle::ball_integral(1, 1.0, [&](const Eigen::VectorXd& y) { return std::norm(s.evaluate(y)); });
    EXPECT_NEAR(restrict_mass(s, 1.0), ref, 1e-8);
    EXPECT_NEAR(restrict_mass_quadrature(s, 1.0, 64), ref, 1e-8);
  }
  {
    const ModalState s = ModalState::random(Quasimomentum(Eigen::Vector2d(0.5, -0.2)), 1, rng);
    const double ref = oracle::ball_integral(2, 1.4, [&](const Eigen::VectorXd& y) { return std::norm(s.evaluate(y)); });
    EXPECT_NEAR(restrict_mass(s, 1.4) / ref, 1.0, 1e-9);
  }
  {
    const ModalState s = ModalState::random(Quasimomentum(Eigen::Vector3d(0.5, -0.2, 2.0)), 1, rng);
    const double ref = oracle::ball_integral(3, 0.9, [&](const Eigen::VectorXd& y) { return std::norm(s.evaluate(y)); }, 24, 48);
    EXPECT_NEAR(restrict_mass(s, 0.9) / ref, 1.0, 1e-8);
  }
}

TEST(RestrictMass, RadiusBeyondTorusThrows) {
  const ModalState s = ModalState::zero(Quasimomentum::zero(1), 1);
  EXPECT_THROW(restrict_mass(s, 3.2), std::invalid_argument);
  EXPECT_THROW(restrict_mass(s, 0.0), std::invalid_argument);
}

TEST(FiberCoefficients, RecoversPseudoperiodicData) {
  // u(y + 2 pi n) = exp(i theta0 n) v(y) on K cells puts all of F u on the
  // fibre theta_m = -theta0, with value K (2 pi)^(-1/2) v.
  const int K = 4;
  const int M = 16;
  const double theta0 = -2 * oracle::pi / K;  // so that -theta0 is on the grid
  const ModalState v = modal(theta0, 2, {Complex(0.2, 0.1), 1.0, Complex(0.0, -0.5), 0.3, Complex(0.1, 0.1)});
  SampledFunction u = SampledFunction::zeros(1, K, M);
  for (std::size_t c = 0; c < static_cast<std::size_t>(K); ++c)
    for (std::size_t p = 0; p < static_cast<std::size_t>(M); ++p)
      u.at(c, p) = v.evaluate(u.torus_point(p) + Eigen::VectorXd::Constant(1, kTwoPi * static_cast<double>(c)));
  const FloquetField f = floquet_forward(u);
  for (std::size_t m = 0; m < static_cast<std::size_t>(K); ++m) {
    const ModalState fib = fiber_coefficients(f, m, 2);
    if (std::abs(f.thetas[m][0] + theta0) < 1e-12) {
      EXPECT_NEAR(fib.theta[0], theta0, 1e-12);
      EXPECT_LE((fib.coefficients - K / std::sqrt(2 * oracle::pi) * v.coefficients).norm(), 1e-12);
    } else {
      EXPECT_LE(fib.coefficients.norm(), 1e-12);
    }
  }
  EXPECT_THROW(fiber_coefficients(f, 0, 8), std::invalid_argument);
}

#include <random>

#include <gtest/gtest.h>

#include "obslab/counterexample.hpp"
#include "obslab/spectral_box.hpp"
#include "oracles.hpp"

using namespace obslab;

namespace {

Eigen::VectorXd at(double x) { return Eigen::VectorXd::Constant(1, x); }

}  // namespace

TEST(Gaussian, UnitNorm) {
  const GaussianState u = gaussian(0.5, at(0.3));
  EXPECT_NEAR(oracle::integrate([&](double x) { return std::pow(u.value(at(x)), 2); }, -15.0, 15.0, 30, 20), 1.0,
              1e-10);
  const GaussianState v = gaussian(0.8, Eigen::Vector2d(1.0, -2.0));
  const double mass = oracle::ball_integral(2, 12.0, [&](const Eigen::VectorXd& z) {
    return std::pow(v.value(v.center + z), 2);
  }, 96, 32);
  EXPECT_NEAR(mass, 1.0, 1e-10);
}

TEST(Gaussian, PlancherelAndConcentration) {
  const GaussianState u = gaussian(0.5, at(0.0));
  EXPECT_NEAR(oracle::integrate([&](double x) { return std::pow(u.fourier_modulus(std::abs(x)), 2); }, -12.0, 12.0, 24, 20),
              1.0, 1e-10);
  double previous = 1.0;
  for (double nu : {1.0, 4.0, 16.0, 64.0}) {
    const double tail = tail_mass(nu, 0.5, 1);
    EXPECT_LT(tail, previous);
    previous = tail;
  }
  EXPECT_LT(previous, 1e-6);
  EXPECT_THROW(gaussian(0.0, at(0.0)), std::invalid_argument);
  EXPECT_THROW(gaussian(-1.0, at(0.0)), std::invalid_argument);
}

TEST(Gaussian, HeatMassClosedForm) {
  const GaussianState u = gaussian(0.7, Eigen::Vector2d::Zero());
  for (double t : {0.0, 0.3, 2.0}) {
    const double m = oracle::ball_integral(2, 25.0, [&](const Eigen::VectorXd& z) { return u.heat_density(z, t); }, 128, 32);
    EXPECT_NEAR(m, u.heat_mass(t), 1e-10);
    EXPECT_NEAR(u.heat_mass(t), 0.7 / (0.7 + t), 1e-15);
  }
}

TEST(TailMass, ClosedForms) {
  for (double nu : {0.3, 1.0, 7.5})
    for (double E : {0.0, 0.2, 1.0}) {
      EXPECT_NEAR(tail_mass(nu, E, 1), std::erfc(E * std::sqrt(2 * nu)), 1e-9) << nu << " " << E;
      EXPECT_NEAR(tail_mass(nu, E, 2), std::exp(-2 * nu * E * E), 1e-9) << nu << " " << E;
    }
  EXPECT_NEAR(tail_mass(2.0, 0.0, 3), 1.0, 1e-12);
}

TEST(TailMass, DecreasingOnNuGrid) {
  const double E = 0.3;
  for (double nu = 0.5; nu < 200.0; nu *= 2.0) {
    const double a = tail_mass(nu, E, 1);
    const double b = tail_mass(2 * nu, E, 1);
    EXPECT_LT(b, a);
    // d = 1 Gaussian tail: the ratio is at most exp(-2 E^2 nu)
    EXPECT_LE(b / a, std::exp(-2 * E * E * nu) * (1 + 1e-9));
  }
}

TEST(SchrodingerHeatGap, ZeroAndQuadraticScaling) {
  EXPECT_EQ(schrodinger_heat_gap(0.3, 0.0), 0.0);
  EXPECT_EQ(schrodinger_heat_gap(0.0, 2.0), 0.0);
  const double T = 1.5;
  const double g1 = schrodinger_heat_gap(0.02, T);
  const double g2 = schrodinger_heat_gap(0.01, T);
  EXPECT_NEAR(g1 / g2, 4.0, 1e-3);
  for (double E : {0.01, 0.1, 0.5, 1.0, 3.0}) {
    const double g = schrodinger_heat_gap(E, T);
    EXPECT_LE(g, std::sqrt(2.0) * T * E * E);
    EXPECT_LE(g, schrodinger_heat_gap_constant(E, T) * T * E * E * (1 + 1e-12));
  }
  EXPECT_NEAR(schrodinger_heat_gap_constant(1e-3, 1.0), std::sqrt(2.0), 1e-5);
}

TEST(SchrodingerHeatGap, MatchesDenseScan) {
  for (double smax : {0.5, 3.0, 20.0}) {
    double ref = 0.0;
    for (int k = 0; k <= 200000; ++k) {
      const double s = smax * k / 200000.0;
      ref = std::max(ref, std::abs(std::polar(1.0, -s) - std::exp(-s)));
    }
    EXPECT_NEAR(schrodinger_heat_gap(std::sqrt(smax), 1.0), ref, 1e-9) << smax;
  }
}

TEST(HeatObservation, FullSpaceClosedForm) {
  const double nu = 0.6;
  const double T = 2.0;
  const double d1 = heat_observation(gaussian(nu, at(1.0)), ControlSet::full_space(1), T);
  EXPECT_NEAR(d1, 2 * std::sqrt(nu) * (std::sqrt(nu + T) - std::sqrt(nu)), 1e-10);
  EXPECT_LT(d1, T);
  const double d2 = heat_observation(gaussian(nu, Eigen::Vector2d(0.5, 0.5)), ControlSet::full_space(2), T);
  EXPECT_NEAR(d2, nu * std::log((nu + T) / nu), 1e-6);
}

TEST(HeatObservation, LargeClearingAndZeroHorizon) {
  const GaussianState u = gaussian(1.0, at(0.0));
  const ControlSet s = cleared_periodic_balls(1, 1.0, 20.0 * std::sqrt(1.0 + 2.0));
  EXPECT_LE(heat_observation(u, s, 1.0), 1e-6);
  EXPECT_EQ(heat_observation(u, ControlSet::full_space(1), 0.0), 0.0);
  const GaussianState v = gaussian(1.0, Eigen::Vector2d::Zero());
  EXPECT_LE(heat_observation(v, cleared_periodic_balls(2, 1.0, 40.0), 1.0), 1e-6);
}

TEST(HeatObservation, OneDimensionalSetMatchesQuadrature) {
  const GaussianState u = gaussian(0.4, at(0.2));
  const ControlSet s = ControlSet::periodic_balls(1, 1.0);
  const double ref = oracle::integrate([&](double t) {
    double m = 0.0;
    for (int n = -6; n <= 6; ++n)
      m += oracle::integrate([&](double x) { return u.heat_density(at(x), t); }, 2 * oracle::pi * n - 1.0,
                             2 * oracle::pi * n + 1.0, 4, 20);
    return m;
  }, 0.0, 1.5, 8, 20);
  EXPECT_NEAR(heat_observation(u, s, 1.5), ref, 1e-10);
}

TEST(Quotient, FullSpaceIsUnitary) {
  for (double T : {0.5, 1.0, 2.0}) {
    const QuotientReport r = observability_quotient(gaussian(1.0, at(0.0)), ControlSet::full_space(1), T, 0.5);
    EXPECT_NEAR(r.value / T, 1.0, 1e-8);
    EXPECT_TRUE(r.splitting_holds);
  }
  const QuotientReport r2 = observability_quotient(gaussian(1.0, Eigen::Vector2d::Zero()), ControlSet::full_space(2), 1.0, 0.5);
  EXPECT_NEAR(r2.value, 1.0, 1e-8);
}

TEST(Quotient, SplittingInequalityOnConfigurations) {
  struct Case {
    double nu, E, rho, T;
  };
  for (const Case c : {Case{1.0, 0.3, 0.0, 1.0}, Case{4.0, 0.2, 5.0, 1.0}, Case{10.0, 0.15, 12.0, 2.0},
                       Case{0.5, 1.0, 2.0, 0.5}}) {
    const ControlSet s = c.rho > 0 ? cleared_periodic_balls(1, 1.0, c.rho) : ControlSet::periodic_balls(1, 1.0);
    const QuotientReport r = observability_quotient(gaussian(c.nu, at(0.0)), s, c.T, c.E);
    EXPECT_TRUE(r.splitting_holds) << c.nu;
    EXPECT_LE(r.value, r.splitting_rhs + 1e-6);
    EXPECT_GE(r.value, 0.0);
    EXPECT_LE(r.value, c.T * (1 + 1e-8));
    EXPECT_LE(r.a1, r.a1_majorant * (1 + 1e-9));
    EXPECT_LE(r.leakage, 1e-7);
  }
}

TEST(Quotient, TwoDimensionalSplitting) {
  const QuotientReport r = observability_quotient(gaussian(1.0, Eigen::Vector2d::Zero()),
                                                  cleared_periodic_balls(2, 1.0, 3.0), 0.5, 0.5);
  EXPECT_TRUE(r.splitting_holds);
  EXPECT_LE(r.value, 0.5);
}

TEST(Quotient, OperatorNormAtMostTwo) {
  SpectralBox box(1, 512, 80.0, at(0.0));
  const ControlSet s = ControlSet::periodic_balls(1, 1.0);
  std::mt19937_64 rng(51);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> v(box.size());
    for (auto& x : v) x = Complex(n(rng), n(rng));
    for (double t : {0.01, 0.3, 1.0, 5.0}) {
      const auto a = box.schrodinger(v, t);
      const auto b = box.heat(v, t);
      std::vector<Complex> diff(v.size());
      for (std::size_t j = 0; j < v.size(); ++j)
        diff[j] = s.contains(box.point(j)) ? a[j] - b[j] : Complex(0.0, 0.0);
      worst = std::max(worst, std::sqrt(box.norm_squared(diff) / box.norm_squared(v)));
    }
  }
  EXPECT_LE(worst, 2.0);
  EXPECT_GT(worst, 0.0);
}

TEST(SpectralBox, UnitaryAndContractive) {
  SpectralBox box(2, 32, 20.0, Eigen::Vector2d::Zero());
  const GaussianState u = gaussian(1.0, Eigen::Vector2d::Zero());
  const auto v = box.sample([&](const Eigen::VectorXd& x) { return Complex(u.value(x), 0.0); });
  EXPECT_NEAR(box.norm_squared(box.schrodinger(v, 3.0)), box.norm_squared(v), 1e-12);
  EXPECT_NEAR(box.norm_squared(box.heat(v, 0.5)), u.heat_mass(0.5), 1e-8);
}

TEST(Schedule, DecayBelowEpsilon) {
  for (double fraction : {0.1, 0.01}) {
    const double T = 1.0;
    const ThicknessSchedule s = thickness_schedule(1, T, fraction * T, 1.0, 4);
    ASSERT_EQ(s.steps.size(), 4u);
    EXPECT_TRUE(s.strictly_decreasing) << fraction;
    EXPECT_TRUE(s.splitting_holds) << fraction;
    EXPECT_LE(s.steps.back().report.value, fraction * T) << fraction;
    for (std::size_t k = 1; k < s.steps.size(); ++k) EXPECT_NEAR(s.steps[k].rho, 2 * s.steps[k - 1].rho, 1e-12);
    EXPECT_LE(2 * T * std::pow(schrodinger_heat_gap(s.choice.E, T), 2), fraction * T / 6 * (1 + 1e-12));
    EXPECT_LE(4 * T * tail_mass(s.choice.nu, s.choice.E, 1), fraction * T / 6 * (1 + 1e-9));
  }
}

TEST(Schedule, CsvHasOneRowPerStep) {
  const ThicknessSchedule s = thickness_schedule(1, 1.0, 0.1, 1.0, 3);
  const std::string csv = decay_curve_csv(s);
  EXPECT_EQ(csv.rfind("rho,Q,A1,A2,B,bound\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

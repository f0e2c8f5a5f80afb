#include "obslab/counterexample.hpp"

#include <bit>
#include <iomanip>
#include <sstream>

#include "obslab/quadrature.hpp"
#include "obslab/spectral_box.hpp"

namespace obslab {

namespace {

double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

double gap_at(double s) { return std::abs(std::polar(1.0, -s) - std::exp(-s)); }

/// Standard normal probability of [a, b].
double normal_mass(double a, double b) {
  return 0.5 * (std::erfc(-b / std::sqrt(2.0)) - std::erfc(-a / std::sqrt(2.0)));
}

double heat_observation_1d(const GaussianState& u, const std::vector<Interval>& pieces, double T,
                           int nodes) {
  const double x0 = u.center[0];
  const GaussRule rule = gauss_legendre(nodes, 0.0, T);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    const double sigma = std::sqrt(u.nu + t);
    double mass = 0.0;
    for (const auto& iv : pieces) mass += normal_mass((iv.lo - x0) / sigma, (iv.hi - x0) / sigma);
    total += rule.weights[i] * u.heat_mass(t) * mass;
  }
  return total;
}

double heat_observation_grid(const GaussianState& u, const ControlSet& set, double T, int nodes,
                             int points) {
  const int d = u.dimension();
  const double half = 10.0 * std::sqrt(u.nu + T);
  const double h = 2.0 * half / points;
  std::vector<double> r2;
  for_each_box_index(d, 0, points - 1, [&](const IntVec& idx) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x[i] = u.center[i] - half + (idx[static_cast<std::size_t>(i)] + 0.5) * h;
    if (set.contains(x)) r2.push_back((x - u.center).squaredNorm());
  });
  const GaussRule rule = gauss_legendre(nodes, 0.0, T);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    const double var = u.nu + t;
    const double norm = std::pow(u.nu / var, 0.5 * d) * std::pow(kTwoPi * var, -0.5 * d);
    double sum = 0.0;
    for (double q : r2) sum += std::exp(-q / (2.0 * var));
    total += rule.weights[i] * norm * sum * std::pow(h, d);
  }
  return total;
}

/// Exact measure of S inside each grid cell [x_j - h/2, x_j + h/2] on a 1D box.
std::vector<double> cell_coverage_1d(const ControlSet& set, const SpectralBox& box) {
  const double h = box.spacing();
  const double lo = box.point(0)[0] - 0.5 * h;
  const double hi = lo + box.points_per_axis() * h;
  const auto pieces = set.intervals_1d(lo, hi);
  std::vector<double> out(box.size(), 0.0);
  std::size_t p = 0;
  for (std::size_t j = 0; j < box.size(); ++j) {
    const double a = lo + static_cast<double>(j) * h;
    const double b = a + h;
    while (p < pieces.size() && pieces[p].hi <= a) ++p;
    for (std::size_t q = p; q < pieces.size() && pieces[q].lo < b; ++q)
      out[j] += std::max(0.0, std::min(b, pieces[q].hi) - std::max(a, pieces[q].lo));
  }
  return out;
}

double clearing_extent(const ControlSet& set, const Eigen::VectorXd& x0) {
  if (const auto* c = std::get_if<Clearing>(&set.variant())) return c->radius + (c->center - x0).norm();
  return 0.0;
}

}  // namespace

double GaussianState::value(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const int d = dimension();
  return std::pow(kTwoPi * nu, -0.25 * d) * std::exp(-(x - center).squaredNorm() / (4.0 * nu));
}

double GaussianState::fourier_modulus(double xi_norm) const {
  return std::pow(2.0 * nu / kPi, 0.25 * dimension()) * std::exp(-xi_norm * xi_norm * nu);
}

double GaussianState::heat_density(const Eigen::Ref<const Eigen::VectorXd>& x, double t) const {
  const int d = dimension();
  const double var = nu + t;
  return std::pow(nu / var, 0.5 * d) * std::pow(kTwoPi * var, -0.5 * d) *
         std::exp(-(x - center).squaredNorm() / (2.0 * var));
}

double GaussianState::heat_mass(double t) const { return std::pow(nu / (nu + t), 0.5 * dimension()); }

GaussianState gaussian(double nu, Eigen::VectorXd center) {
  require(nu > 0.0, "gaussian: nu must be positive");
  require(center.size() >= 1, "gaussian: centre must have positive dimension");
  return GaussianState{nu, std::move(center)};
}

double schrodinger_heat_gap(double E, double T) {
  require(E >= 0.0 && T >= 0.0, "schrodinger_heat_gap: E and T must be non-negative");
  const double smax = T * E * E;
  if (smax == 0.0) return 0.0;
  constexpr int n = 4000;
  const double step = smax / n;
  int best = 0;
  double best_value = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double v = gap_at(k * step);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  // golden-section refinement of the bracketing grid cell pair
  double a = std::max(0.0, (best - 1) * step);
  double b = std::min(smax, (best + 1) * step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double dd = a + g * (b - a);
  for (int it = 0; it < 80; ++it) {
    if (gap_at(c) > gap_at(dd)) b = dd;
    else a = c;
    c = b - g * (b - a);
    dd = a + g * (b - a);
  }
  return std::max(best_value, gap_at(0.5 * (a + b)));
}

double schrodinger_heat_gap_constant(double E, double T) {
  require(E > 0.0 && T > 0.0, "schrodinger_heat_gap_constant: E and T must be positive");
  const double smax = T * E * E;
  double best = std::sqrt(2.0);  // limit as s -> 0
  constexpr int n = 4000;
  for (int k = 1; k <= n; ++k) {
    const double s = smax * k / n;
    best = std::max(best, gap_at(s) / s);
  }
  return best;
}

double tail_mass(double nu, double E, int dimension) {
  require(nu > 0.0, "tail_mass: nu must be positive");
  require(E >= 0.0, "tail_mass: E must be non-negative");
  require(dimension >= 1, "tail_mass: dimension must be positive");
  // r = E + s / sqrt(2 nu); the integrand decays like exp(-s^2).
  const double scale = 1.0 / std::sqrt(2.0 * nu);
  const double prefactor = sphere_area(dimension) * std::pow(2.0 * nu / kPi, 0.5 * dimension) * scale;
  constexpr int panels = 12;
  constexpr double upper = 12.0;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const GaussRule rule = gauss_legendre(24, upper * p / panels, upper * (p + 1) / panels);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = E + rule.nodes[i] * scale;
      total += rule.weights[i] * std::pow(r, dimension - 1) * std::exp(-2.0 * nu * r * r);
    }
  }
  return prefactor * total;
}

double heat_observation(const GaussianState& u, const ControlSet& set, double T, int time_nodes,
                        int space_points) {
  require(T >= 0.0, "heat_observation: horizon must be non-negative");
  require(set.dimension() == u.dimension(), "heat_observation: set and state dimensions differ");
  require(time_nodes >= 1 && space_points >= 2, "heat_observation: grid too small");
  if (T == 0.0) return 0.0;
  double coarse = 0.0;
  double fine = 0.0;
  if (u.dimension() == 1) {
    const double reach = 14.0 * std::sqrt(u.nu + T);
    const auto pieces = set.intervals_1d(u.center[0] - reach, u.center[0] + reach);
    coarse = heat_observation_1d(u, pieces, T, time_nodes);
    fine = heat_observation_1d(u, pieces, T, 2 * time_nodes);
  } else {
    coarse = heat_observation_grid(u, set, T, time_nodes, space_points);
    fine = heat_observation_grid(u, set, T, 2 * time_nodes, 2 * space_points);
  }
  if (std::abs(fine - coarse) > 1e-4)
    throw NumericalError("heat_observation: grid under-resolved (two resolutions differ by " +
                         std::to_string(std::abs(fine - coarse)) + ")");
  return fine;
}

double quotient_on_box(const GaussianState& u, const ControlSet& set, double T, int points_per_axis,
                       double box_length, int time_nodes) {
  const int d = u.dimension();
  require(set.dimension() == d, "observability_quotient: set and state dimensions differ");
  SpectralBox box(d, points_per_axis, box_length, u.center);
  const auto u0 = box.sample([&](const Eigen::VectorXd& x) { return Complex(u.value(x), 0.0); });
  std::vector<double> weight;
  if (d == 1) {
    weight = cell_coverage_1d(set, box);
  } else {
    weight.assign(box.size(), 0.0);
    const double cell = std::pow(box.spacing(), d);
    for (std::size_t j = 0; j < box.size(); ++j)
      weight[j] = set.contains(box.point(j)) ? cell : 0.0;
  }
  const double norm0 = box.norm_squared(u0);
  if (T == 0.0) return 0.0;
  const GaussRule rule = gauss_legendre(time_nodes, 0.0, T);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const auto v = box.schrodinger(u0, rule.nodes[i]);
    double observed = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) observed += weight[j] * std::norm(v[j]);
    total += rule.weights[i] * observed;
  }
  return total / norm0;
}

QuotientReport observability_quotient(const GaussianState& u, const ControlSet& set, double T,
                                      double E, const FourierGrid& grid) {
  require(T >= 0.0, "observability_quotient: horizon must be non-negative");
  require(E > 0.0, "observability_quotient: E must be positive");
  const int d = u.dimension();
  QuotientReport out;
  out.E = E;
  out.nu = u.nu;
  out.T = T;
  out.center = u.center;
  const double spread = std::sqrt(u.nu + 2.0 * T + T * T / u.nu);
  out.box_length = grid.box_length > 0.0 ? grid.box_length
                                          : 2.0 * clearing_extent(set, u.center) + 12.0 * spread;
  if (grid.points_per_axis > 0) {
    out.box_points = grid.points_per_axis;
  } else {
    const double h = std::min(0.1, std::sqrt(u.nu) / 8.0);
    const auto wanted = static_cast<unsigned>(std::ceil(out.box_length / h));
    out.box_points = static_cast<int>(std::bit_ceil(std::max(64u, wanted)));
  }
  out.value = quotient_on_box(u, set, T, out.box_points, out.box_length, grid.time_nodes);
  const double doubled =
      quotient_on_box(u, set, T, 2 * out.box_points, 2.0 * out.box_length, grid.time_nodes);
  out.leakage = std::abs(doubled - out.value);
  if (out.leakage > grid.leakage_tolerance)
    throw NumericalError("observability_quotient: box leakage " + std::to_string(out.leakage) +
                         " above tolerance");

  if (T > 0.0) {
    const GaussRule radial = gauss_legendre(64, 0.0, E);
    const GaussRule times = gauss_legendre(64, 0.0, T);
    double a1 = 0.0;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      const double r = radial.nodes[i];
      const double density = std::pow(u.fourier_modulus(r), 2) * std::pow(r, d - 1);
      double inner = 0.0;
      for (std::size_t k = 0; k < times.nodes.size(); ++k)
        inner += times.weights[k] * std::pow(gap_at(r * r * times.nodes[k]), 2);
      a1 += radial.weights[i] * density * inner;
    }
    out.a1 = 2.0 * sphere_area(d) * a1;
  }
  out.a2 = 4.0 * T * tail_mass(u.nu, E, d);
  out.b = heat_observation(u, set, T);
  out.a1_majorant = 2.0 * T * std::pow(schrodinger_heat_gap(E, T), 2);
  out.splitting_rhs = 2.0 * (out.a1 + out.a2) + 2.0 * out.b;
  out.splitting_holds = out.value <= out.splitting_rhs + 1e-6;
  return out;
}

ControlSet cleared_periodic_balls(int dimension, double base_radius, double rho) {
  return ControlSet::clearing(ControlSet::periodic_balls(dimension, base_radius),
                              Eigen::VectorXd::Zero(dimension), rho);
}

ThicknessSchedule thickness_schedule(int dimension, double T, double epsilon, double base_radius,
                                     int steps, const ScheduleOptions& options) {
  require(T > 0.0, "thickness_schedule: horizon must be positive");
  require(epsilon > 0.0, "thickness_schedule: epsilon must be positive");
  require(steps >= 1, "thickness_schedule: need at least one step");
  ThicknessSchedule out;
  ScheduleChoice& choice = out.choice;
  choice.epsilon = epsilon;
  choice.T = T;
  choice.base_radius = base_radius;
  choice.center = Eigen::VectorXd::Zero(dimension);
  const double share = epsilon / 6.0;

  // E from T: the gap grows with E.
  auto a1_bound = [&](double e) { return 2.0 * T * std::pow(schrodinger_heat_gap(e, T), 2); };
  if (options.E > 0.0) {
    choice.E = options.E;
  } else {
    double lo = 0.0;
    double hi = 1.0;
    while (a1_bound(hi) <= share && hi < 1e6) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (a1_bound(mid) <= share ? lo : hi) = mid;
    }
    choice.E = lo;
  }
  require(choice.E > 0.0, "thickness_schedule: no admissible E");

  // nu from E: the Fourier tail shrinks as nu grows.
  auto a2 = [&](double nu) { return 4.0 * T * tail_mass(nu, choice.E, dimension); };
  if (options.nu > 0.0) {
    choice.nu = options.nu;
  } else {
    double nu_lo = 1e-3;
    double nu_hi = 1.0;
    while (a2(nu_hi) > share) nu_hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = std::sqrt(nu_lo * nu_hi);
      (a2(mid) <= share ? nu_hi : nu_lo) = mid;
    }
    choice.nu = nu_hi;
  }
  const GaussianState u = gaussian(choice.nu, choice.center);

  // clearing from nu: the heat term shrinks as the clearing grows.
  auto b = [&](double rho) {
    return heat_observation(u, cleared_periodic_balls(dimension, base_radius, rho), T);
  };
  double rho_lo = 0.0;
  double rho_hi = std::sqrt(choice.nu);
  while (b(rho_hi) > share) rho_hi *= 2.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (rho_lo + rho_hi);
    (b(mid) <= share ? rho_hi : rho_lo) = mid;
  }
  choice.rho_final = rho_hi;

  for (int k = 0; k < steps; ++k) {
    const double rho = choice.rho_final / std::pow(2.0, steps - 1 - k);
    ScheduleStep step;
    step.rho = rho;
    step.report = observability_quotient(u, cleared_periodic_balls(dimension, base_radius, rho), T,
                                         choice.E, options.grid);
    out.steps.push_back(std::move(step));
  }
  out.strictly_decreasing = true;
  out.splitting_holds = true;
  for (std::size_t k = 0; k < out.steps.size(); ++k) {
    if (!out.steps[k].report.splitting_holds) out.splitting_holds = false;
    if (k > 0 && !(out.steps[k].report.value < out.steps[k - 1].report.value))
      out.strictly_decreasing = false;
  }
  return out;
}

std::string decay_curve_csv(const ThicknessSchedule& schedule) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "rho,Q,A1,A2,B,bound\n";
  for (const auto& s : schedule.steps)
    out << s.rho << ',' << s.report.value << ',' << s.report.a1 << ',' << s.report.a2 << ','
        << s.report.b << ',' << s.report.splitting_rhs << '\n';
  return out.str();
}

}  // namespace obslab

#include "obslab/floquet.hpp"

#include "obslab/gramian.hpp"
#include "obslab/quadrature.hpp"

namespace obslab {

namespace {

std::size_t int_pow(int base, int exponent) {
  std::size_t r = 1;
  for (int i = 0; i < exponent; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

// Decodes a flat row-major index with the last axis fastest.
IntVec unflatten(std::size_t flat, int dimension, int extent) {
  IntVec idx(static_cast<std::size_t>(dimension));
  for (int i = dimension - 1; i >= 0; --i) {
    idx[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(extent));
    flat /= static_cast<std::size_t>(extent);
  }
  return idx;
}

void check_layout(int dimension, int cells, int grid, const IntVec& origin, std::size_t value_count,
                  std::size_t blocks, const char* what) {
  if (dimension < 1 || cells < 1 || grid < 1)
    throw std::invalid_argument(std::string(what) + ": malformed grid");
  if (origin.size() != static_cast<std::size_t>(dimension))
    throw std::invalid_argument(std::string(what) + ": cell origin has wrong dimension");
  if (value_count != blocks * int_pow(grid, dimension))
    throw std::invalid_argument(std::string(what) + ": value count does not match the grid");
}

}  // namespace

SampledFunction SampledFunction::zeros(int dimension, int cells_per_axis, int grid_per_axis,
                                       IntVec cell_origin) {
  require(dimension >= 1, "SampledFunction: dimension must be positive");
  require(cells_per_axis >= 1, "SampledFunction: need at least one cell");
  require(grid_per_axis >= 1, "SampledFunction: need at least one grid point");
  if (cell_origin.empty()) cell_origin.assign(static_cast<std::size_t>(dimension), 0);
  SampledFunction u;
  u.dimension = dimension;
  u.cells_per_axis = cells_per_axis;
  u.cell_origin = std::move(cell_origin);
  u.grid_per_axis = grid_per_axis;
  u.values.assign(u.cell_count() * u.points_per_cell(), Complex(0.0, 0.0));
  return u;
}

std::size_t SampledFunction::cell_count() const { return int_pow(cells_per_axis, dimension); }

std::size_t SampledFunction::points_per_cell() const { return int_pow(grid_per_axis, dimension); }

IntVec SampledFunction::cell_index(std::size_t cell) const {
  IntVec idx = unflatten(cell, dimension, cells_per_axis);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] += cell_origin[i];
  return idx;
}

Eigen::VectorXd SampledFunction::torus_point(std::size_t point) const {
  const IntVec j = unflatten(point, dimension, grid_per_axis);
  Eigen::VectorXd y(dimension);
  for (int i = 0; i < dimension; ++i) y[i] = -kPi + spacing() * j[static_cast<std::size_t>(i)];
  return y;
}

double SampledFunction::norm_squared() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s * std::pow(spacing(), dimension);
}

std::size_t FloquetField::points_per_cell() const { return int_pow(grid_per_axis, dimension); }

double FloquetField::norm_squared() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  const double h = kTwoPi / grid_per_axis;
  const double dtheta = kTwoPi / cells_per_axis;
  return s * std::pow(h * dtheta, dimension);
}

FloquetField floquet_forward(const SampledFunction& u) {
  if (u.cells_per_axis < 1) throw std::invalid_argument("floquet_forward: empty cell list");
  check_layout(u.dimension, u.cells_per_axis, u.grid_per_axis, u.cell_origin, u.values.size(),
               u.cell_count(), "floquet_forward");
  const int d = u.dimension;
  const int k_cells = u.cells_per_axis;
  FloquetField field;
  field.dimension = d;
  field.cells_per_axis = k_cells;
  field.cell_origin = u.cell_origin;
  field.grid_per_axis = u.grid_per_axis;
  const std::size_t n_theta = u.cell_count();
  const std::size_t per_cell = u.points_per_cell();
  field.values.assign(n_theta * per_cell, Complex(0.0, 0.0));
  field.thetas.reserve(n_theta);
  for (std::size_t m = 0; m < n_theta; ++m) {
    const IntVec mi = unflatten(m, d, k_cells);
    Eigen::VectorXd theta(d);
    for (int i = 0; i < d; ++i) theta[i] = kTwoPi * mi[static_cast<std::size_t>(i)] / k_cells;
    field.thetas.push_back(Quasimomentum::wrapped(theta));
  }
  const double norm = std::pow(kTwoPi, -0.5 * d);
  for (std::size_t m = 0; m < n_theta; ++m) {
    const Eigen::VectorXd& theta = field.thetas[m].value();
    for (std::size_t cell = 0; cell < u.cell_count(); ++cell) {
      const IntVec n = u.cell_index(cell);
      double phase = 0.0;
      for (int i = 0; i < d; ++i) phase += theta[i] * n[static_cast<std::size_t>(i)];
      const Complex w = norm * std::polar(1.0, phase);
      for (std::size_t p = 0; p < per_cell; ++p) field.at(m, p) += w * u.at(cell, p);
    }
  }
  return field;
}

SampledFunction floquet_inverse(const FloquetField& field) {
  const std::size_t n_theta = int_pow(field.cells_per_axis, field.dimension);
  check_layout(field.dimension, field.cells_per_axis, field.grid_per_axis, field.cell_origin,
               field.values.size(), n_theta, "floquet_inverse");
  if (field.thetas.size() != n_theta) throw std::invalid_argument("floquet_inverse: malformed theta grid");
  const int d = field.dimension;
  SampledFunction u =
      SampledFunction::zeros(d, field.cells_per_axis, field.grid_per_axis, field.cell_origin);
  const double norm = std::pow(kTwoPi, 0.5 * d) / static_cast<double>(n_theta);
  const std::size_t per_cell = u.points_per_cell();
  for (std::size_t cell = 0; cell < u.cell_count(); ++cell) {
    const IntVec n = u.cell_index(cell);
    for (std::size_t m = 0; m < n_theta; ++m) {
      const Eigen::VectorXd& theta = field.thetas[m].value();
      double phase = 0.0;
      for (int i = 0; i < d; ++i) phase -= theta[i] * n[static_cast<std::size_t>(i)];
      const Complex w = norm * std::polar(1.0, phase);
      for (std::size_t p = 0; p < per_cell; ++p) u.at(cell, p) += w * field.at(m, p);
    }
  }
  return u;
}

std::size_t mode_count(int dimension, int cutoff) { return int_pow(2 * cutoff + 1, dimension); }

std::vector<Mode> eigenbasis(const Quasimomentum& theta, int cutoff) {
  require(cutoff >= 0, "eigenbasis: cutoff must be non-negative");
  const int d = theta.dimension();
  const Eigen::VectorXd shift = theta.lattice_shift();
  std::vector<Mode> modes;
  modes.reserve(mode_count(d, cutoff));
  for_each_box_index(d, -cutoff, cutoff, [&](const IntVec& idx) {
    Mode mode;
    mode.index = idx;
    mode.gamma.resize(d);
    for (int i = 0; i < d; ++i) mode.gamma[i] = shift[i] + idx[static_cast<std::size_t>(i)];
    mode.eigenvalue = mode.gamma.squaredNorm();
    modes.push_back(std::move(mode));
  });
  return modes;
}

ModalState ModalState::zero(const Quasimomentum& theta, int cutoff) {
  require(cutoff >= 0, "ModalState: cutoff must be non-negative");
  const auto n = static_cast<Eigen::Index>(mode_count(theta.dimension(), cutoff));
  return ModalState{theta, cutoff, Eigen::VectorXcd::Zero(n)};
}

ModalState ModalState::random(const Quasimomentum& theta, int cutoff, std::mt19937_64& rng) {
  ModalState s = zero(theta, cutoff);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    s.coefficients[i] = Complex(re, im);
  }
  return s;
}

double ModalState::l2_norm() const {
  return std::pow(kTwoPi, 0.5 * dimension()) * coefficient_norm();
}

Complex ModalState::evaluate(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  const auto basis = modes();
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i)
    sum += coefficients[static_cast<Eigen::Index>(i)] * std::polar(1.0, basis[i].gamma.dot(y));
  return sum;
}

ModalState propagate(const ModalState& state, double t) {
  ModalState out = state;
  const auto basis = state.modes();
  for (std::size_t i = 0; i < basis.size(); ++i)
    out.coefficients[static_cast<Eigen::Index>(i)] *= std::polar(1.0, -t * basis[i].eigenvalue);
  return out;
}

double restrict_mass(const ModalState& state, double ball_radius) {
  require(ball_radius > 0.0, "restrict_mass: radius must be positive");
  require(ball_radius <= kPi, "restrict_mass: radius exceeds the torus half-width");
  const auto basis = state.modes();
  const int d = state.dimension();
  const auto n = static_cast<Eigen::Index>(basis.size());
  Complex sum(0.0, 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex aj = state.coefficients[j];
    sum += std::norm(aj) * ball_volume(d, ball_radius);
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double b = ball_exp_integral(basis[static_cast<std::size_t>(j)].gamma -
                                             basis[static_cast<std::size_t>(k)].gamma,
                                         ball_radius);
      // the (j,k) and (k,j) terms are complex conjugates
      sum += 2.0 * (aj * std::conj(state.coefficients[k])).real() * b;
    }
  }
  return sum.real();
}

double restrict_mass_quadrature(const ModalState& state, double ball_radius, int nodes) {
  require(ball_radius > 0.0, "restrict_mass: radius must be positive");
  require(ball_radius <= kPi, "restrict_mass: radius exceeds the torus half-width");
  const auto basis = state.modes();
  return integrate_ball(state.dimension(), ball_radius, nodes, [&](std::span<const double> y) {
    Complex sum(0.0, 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      double phase = 0.0;
      for (std::size_t a = 0; a < y.size(); ++a) phase += basis[i].gamma[static_cast<Eigen::Index>(a)] * y[a];
      sum += state.coefficients[static_cast<Eigen::Index>(i)] * std::polar(1.0, phase);
    }
    return std::norm(sum);
  });
}

ModalState fiber_coefficients(const FloquetField& field, std::size_t theta_index, int cutoff) {
  require(theta_index < field.thetas.size(), "fiber_coefficients: theta index out of range");
  require(2 * cutoff + 1 <= field.grid_per_axis, "fiber_coefficients: cutoff aliases on the torus grid");
  // The fibre at theta is (-theta)-pseudoperiodic: F(y + 2 pi k, theta) = exp(-i k.theta) F(y, theta).
  const Quasimomentum fibre_theta = Quasimomentum::wrapped(-field.thetas[theta_index].value());
  ModalState state = ModalState::zero(fibre_theta, cutoff);
  const auto basis = state.modes();
  const int d = field.dimension;
  const double h = kTwoPi / field.grid_per_axis;
  const double weight = std::pow(h / kTwoPi, d);
  const std::size_t per_cell = field.points_per_cell();
  SampledFunction layout = SampledFunction::zeros(d, 1, field.grid_per_axis);
  for (std::size_t p = 0; p < per_cell; ++p) {
    const Eigen::VectorXd y = layout.torus_point(p);
    const Complex v = field.at(theta_index, p);
    for (std::size_t i = 0; i < basis.size(); ++i)
      state.coefficients[static_cast<Eigen::Index>(i)] += weight * v * std::polar(1.0, -basis[i].gamma.dot(y));
  }
  return state;
}

}  // namespace obslab

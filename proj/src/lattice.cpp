#include "obslab/lattice.hpp"

#include <map>
#include <numeric>

#include "obslab/bessel.hpp"

namespace obslab {

LiftedLattice build_lifted(const Quasimomentum& theta, int cutoff) {
  require(cutoff >= 0, "build_lifted: cutoff must be non-negative");
  const int d = theta.dimension();
  const Eigen::VectorXd shift = theta.lattice_shift();
  LiftedLattice lattice;
  lattice.theta = theta;
  lattice.cutoff = cutoff;
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(2 * cutoff + 1);
  lattice.points.resize(static_cast<Eigen::Index>(n), d + 1);
  lattice.indices.reserve(n);
  Eigen::Index row = 0;
  for_each_box_index(d, -cutoff, cutoff, [&](const IntVec& idx) {
    double norm2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double g = shift[i] + idx[static_cast<std::size_t>(i)];
      lattice.points(row, i) = g;
      norm2 += g * g;
    }
    lattice.points(row, d) = norm2;
    lattice.indices.push_back(idx);
    ++row;
  });
  return lattice;
}

double brute_force_gap(const PointSet& points) {
  double best = kInf;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (Eigen::Index j = i + 1; j < points.rows(); ++j)
      best = std::min(best, (points.row(i) - points.row(j)).norm());
  return best;
}

double gap(const PointSet& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) return kInf;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return points(a, 0) < points(b, 0); });
  double best = kInf;
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const double dx = points(order[b], 0) - points(order[a], 0);
      if (dx >= best) break;
      best = std::min(best, (points.row(order[a]) - points.row(order[b])).norm());
    }
  }
  return best;
}

double ingham_c(int ambient_dim, double safety) {
  require(ambient_dim >= 1, "ingham_c: ambient dimension must be positive");
  require(safety >= 1.0, "ingham_c: safety factor must be at least 1");
  return safety * first_bessel_zero(0.5 * (ambient_dim - 1));
}

int shifted_box_count(const Quasimomentum& theta, double half_width, int skip_axis) {
  const Eigen::VectorXd shift = theta.lattice_shift();
  int total = 1;
  for (int i = 0; i < theta.dimension(); ++i) {
    if (i == skip_axis) continue;
    const auto lo = static_cast<int>(std::ceil(-half_width - shift[i]));
    const auto hi = static_cast<int>(std::floor(half_width - shift[i]));
    total *= std::max(0, hi - lo + 1);
  }
  return total;
}

namespace {

PointSet select_rows(const PointSet& points, const std::vector<std::size_t>& rows) {
  PointSet out(static_cast<Eigen::Index>(rows.size()), points.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = points.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

double budget_term(double c, double delta) { return std::isinf(delta) ? 0.0 : 2.0 * c / delta; }

bool clear_of_axes(const PointSet& points, Eigen::Index row, int d, double alpha) {
  for (int j = 0; j < d; ++j)
    if (std::abs(points(row, j)) < alpha) return false;
  return true;
}

}  // namespace

GapDecomposition decompose(const LiftedLattice& lattice, double radius, double c) {
  require(radius > 0.0, "decompose: radius must be positive");
  require(c > 0.0, "decompose: Ingham constant must be positive");
  require(lattice.size() > 0, "decompose: empty lattice");
  const int d = lattice.dimension();
  const PointSet& pts = lattice.points;
  const auto n = static_cast<std::size_t>(lattice.size());
  const double third = radius / 3.0;

  GapDecomposition out;
  DecompositionParams& params = out.params;
  params.c = c;
  params.radius = radius;

  // Part one: points with every spatial coordinate at least alpha in size.
  params.alpha = std::max(6.0 * c / radius, 1.0);
  std::vector<std::size_t> clear;
  double clear_gap = kInf;
  while (true) {
    clear.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (clear_of_axes(pts, static_cast<Eigen::Index>(i), d, params.alpha)) clear.push_back(i);
    clear_gap = gap(select_rows(pts, clear));
    if (budget_term(c, clear_gap) <= third) break;
    params.alpha *= 2.0;
    ++params.alpha_doublings;
  }
  std::vector<bool> assigned(n, false);
  for (auto i : clear) assigned[i] = true;
  if (!clear.empty()) {
    out.subsets.push_back({SubsetKind::AxisClear, clear, clear_gap, -1, {}});
    out.axis_clear_budget = budget_term(c, clear_gap);
  }

  // Part two: chains of fixed transverse coordinates along each axis slab.
  params.n_alpha = 0;
  for (int k = 0; k < d; ++k)
    params.n_alpha = std::max(params.n_alpha, shifted_box_count(lattice.theta, params.alpha + 1.0, k));
  params.beta = std::max({2.0 * d * params.n_alpha * c / radius, params.alpha + 1.0, 1.0});

  std::vector<GapSubset> chains;
  while (true) {
    std::map<std::pair<int, IntVec>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
      if (assigned[i]) continue;
      const auto row = static_cast<Eigen::Index>(i);
      int axis = -1;
      for (int j = 0; j < d && axis < 0; ++j)
        if (std::abs(pts(row, j)) >= params.beta) axis = j;
      if (axis < 0) continue;
      IntVec transverse;
      for (int j = 0; j < d; ++j)
        if (j != axis) transverse.push_back(lattice.indices[i][static_cast<std::size_t>(j)]);
      groups[{axis, transverse}].push_back(i);
    }
    chains.clear();
    double slab_budget = 0.0;
    for (auto& [key, members] : groups) {
      const double g = gap(select_rows(pts, members));
      slab_budget += budget_term(c, g);
      chains.push_back({SubsetKind::Slab, std::move(members), g, key.first, key.second});
    }
    if (slab_budget <= third) {
      out.slab_budget = slab_budget;
      break;
    }
    params.beta *= 1.5;
    ++params.beta_escalations;
  }
  for (auto& chain : chains) {
    for (auto i : chain.members) assigned[i] = true;
    out.subsets.push_back(std::move(chain));
  }

  // Part three: the bounded rest, one point per subset.
  for (std::size_t i = 0; i < n; ++i)
    if (!assigned[i]) out.subsets.push_back({SubsetKind::Singleton, {i}, kInf, -1, {}});

  out.budget = 0.0;
  for (const auto& s : out.subsets) out.budget += budget_term(c, s.gap);
  if (out.budget > radius * (1.0 + 1e-12))
    throw NumericalError("decompose: certified budget " + std::to_string(out.budget) +
                         " exceeds radius " + std::to_string(radius));
  return out;
}

}  // namespace obslab

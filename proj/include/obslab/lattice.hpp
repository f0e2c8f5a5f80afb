#pragma once

#include <vector>

#include "obslab/common.hpp"
#include "obslab/gramian.hpp"
#include "obslab/quasimomentum.hpp"

namespace obslab {

/// Points (gamma, |gamma|^2) in R^(d+1) for gamma in theta/(2 pi) + Z^d with
/// integer part in [-cutoff, cutoff]^d.
struct LiftedLattice {
  Quasimomentum theta;
  int cutoff = 0;
  PointSet points;
  std::vector<IntVec> indices;  ///< integer part of each gamma

  int dimension() const { return theta.dimension(); }
  Eigen::Index size() const { return points.rows(); }
};

LiftedLattice build_lifted(const Quasimomentum& theta, int cutoff);

/// Minimum pairwise distance; infinity for fewer than two points.
/// Sort-and-sweep along the first coordinate.
double gap(const PointSet& points);

/// O(n^2) reference scan used to certify `gap`.
double brute_force_gap(const PointSet& points);

/// safety * (first positive zero of J_((m-1)/2)), m the ambient dimension.
double ingham_c(int ambient_dim, double safety);

struct DecompositionParams {
  double c = 0.0;
  double radius = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  int n_alpha = 0;
  int alpha_doublings = 0;   ///< times alpha was doubled to certify part one
  int beta_escalations = 0;  ///< times beta was raised to certify the slabs
};

enum class SubsetKind { AxisClear, Slab, Singleton };

struct GapSubset {
  SubsetKind kind = SubsetKind::Singleton;
  std::vector<std::size_t> members;  ///< indices into the parent lattice
  double gap = kInf;                 ///< certified; infinity for one point
  int axis = -1;                     ///< slab axis
  IntVec transverse;                 ///< fixed integer coordinates of a slab chain
};

struct GapDecomposition {
  DecompositionParams params;
  std::vector<GapSubset> subsets;
  double budget = 0.0;  ///< 2 * sum_j c / delta_j
  double axis_clear_budget = 0.0;
  double slab_budget = 0.0;

  std::size_t count() const { return subsets.size(); }
};

/// Splits the lifted lattice into a part away from the axes, chains along
/// the axis slabs and singletons, with every gap certified by a sweep over
/// the subset and 2 sum c/delta_j <= R. Throws NumericalError when the
/// budget cannot be met.
GapDecomposition decompose(const LiftedLattice& lattice, double radius, double c);

/// Number of points of theta_i/(2 pi) + Z in [-a, a], multiplied over the
/// axes other than `skip_axis`.
int shifted_box_count(const Quasimomentum& theta, double half_width, int skip_axis);

}  // namespace obslab

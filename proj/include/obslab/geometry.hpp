#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "obslab/common.hpp"

namespace obslab {

class ControlSet;

/// Union of open balls of radius `radius` centred on the lattice 2*pi*Z^d.
struct PeriodicBalls {
  double radius = 0.0;
};

/// Complement of the open ball B_radius(center).
struct BallComplement {
  double radius = 0.0;
  Eigen::VectorXd center;
};

/// `base` with the open ball B_radius(center) removed.
struct Clearing {
  std::shared_ptr<const ControlSet> base;
  double radius = 0.0;
  Eigen::VectorXd center;
};

/// Indicator sampled on a cell-centred grid over the box [lower, upper].
/// Cell values are row-major with the last axis fastest. When `periodic` is
/// set the box is one period of the set, otherwise the set is empty outside.
struct CustomGrid {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<int> shape;
  std::vector<std::uint8_t> values;
  bool periodic = false;
};

using ControlSetVariant = std::variant<PeriodicBalls, BallComplement, Clearing, CustomGrid>;

/// Axis-aligned box; used for sampling windows.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::VectorXd anchor;  ///< always sampled, e.g. the centre of a clearing
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Immutable description of a control set S in R^d.
class ControlSet {
 public:
  static ControlSet periodic_balls(int dimension, double radius);
  static ControlSet ball_complement(Eigen::VectorXd center, double radius);
  static ControlSet clearing(const ControlSet& base, Eigen::VectorXd center, double radius);
  static ControlSet custom(CustomGrid grid);
  /// The whole space, as a periodic custom grid of ones.
  static ControlSet full_space(int dimension);

  int dimension() const { return dimension_; }
  const ControlSetVariant& variant() const { return variant_; }
  std::string variant_name() const;

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// True when the set is invariant under a lattice of translations, so one
  /// period cell is a complete sampling window.
  bool is_periodic() const;

  /// Boxes over which worst-case centres and line offsets are searched.
  std::vector<Box> sampling_windows(double margin) const;

  /// Reduces x into the canonical period cell for periodic variants.
  Eigen::VectorXd canonical_point(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Exact decomposition of S intersected with [lo, hi] into disjoint,
  /// sorted intervals. Requires dimension 1.
  std::vector<Interval> intervals_1d(double lo, double hi) const;

 private:
  ControlSet(int dimension, ControlSetVariant variant)
      : dimension_(dimension), variant_(std::move(variant)) {}

  int dimension_ = 0;
  ControlSetVariant variant_;
};

/// 1 if x lies in S, else 0. Throws on dimension mismatch.
int indicator(const ControlSet& set, const Eigen::Ref<const Eigen::VectorXd>& x);

struct ThicknessReport {
  double gamma_mass = 0.0;   ///< min over sampled centres of Vol(S n B_rho(x))
  double rho = 0.0;
  bool is_thick = false;
  Eigen::VectorXd worst_center;
  double tolerance_band = 0.0;  ///< +-2/sqrt(samples) * Vol(B_rho)
  int mc_samples = 0;
  std::size_t centers_evaluated = 0;
  std::uint64_t seed = 0;
};

ThicknessReport thickness_check(const ControlSet& set, double rho, int centers_per_axis,
                                int mc_samples, std::uint64_t seed = 0);

struct Line {
  Eigen::VectorXd base;
  Eigen::VectorXd direction;  ///< unit length
};

struct GCCReport {
  double length = 0.0;
  double delta_line = 0.0;  ///< min sampled measure of segment n S
  bool satisfies_gcc = false;
  Line witness_line;
  std::size_t lines_evaluated = 0;
};

GCCReport gcc_check(const ControlSet& set, double length, int direction_samples,
                    int offset_samples, int line_resolution);

/// Search directions: all coordinate axes first, then a Fibonacci-type grid
/// on the unit sphere (half circle for d = 2).
std::vector<Eigen::VectorXd> line_directions(int dimension, int samples);

/// Points of the Halton sequence (first `dimension` primes as bases) after a
/// Cranley-Patterson shift drawn from `seed`, in [0, 1)^dimension.
std::vector<Eigen::VectorXd> shifted_halton(int dimension, int count, std::uint64_t seed);

}  // namespace obslab

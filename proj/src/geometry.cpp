#include "obslab/geometry.hpp"

#include <random>

namespace obslab {

namespace {

double wrap_to_cell(double x, double lower, double period) {
  double r = std::fmod(x - lower, period);
  if (r < 0.0) r += period;
  return lower + r;
}

double reduce_periodic(double x) { return x - kTwoPi * std::round(x / kTwoPi); }

std::vector<Interval> merge(std::vector<Interval> pieces) {
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& p : pieces) {
    if (p.hi <= p.lo) continue;
    if (!out.empty() && p.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, p.hi);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Interval> subtract(const std::vector<Interval>& pieces, double cut_lo, double cut_hi) {
  std::vector<Interval> out;
  for (const auto& p : pieces) {
    if (p.hi <= cut_lo || p.lo >= cut_hi) {
      out.push_back(p);
      continue;
    }
    if (p.lo < cut_lo) out.push_back({p.lo, cut_lo});
    if (p.hi > cut_hi) out.push_back({cut_hi, p.hi});
  }
  return out;
}

Eigen::VectorXd cell_width(const CustomGrid& g) {
  Eigen::VectorXd h(g.lower.size());
  for (Eigen::Index i = 0; i < h.size(); ++i)
    h[i] = (g.upper[i] - g.lower[i]) / g.shape[static_cast<std::size_t>(i)];
  return h;
}

bool custom_contains(const CustomGrid& g, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd h = cell_width(g);
  std::size_t flat = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const int n = g.shape[static_cast<std::size_t>(i)];
    double xi = x[i];
    if (g.periodic) xi = wrap_to_cell(xi, g.lower[i], g.upper[i] - g.lower[i]);
    auto cell = static_cast<long>(std::floor((xi - g.lower[i]) / h[i]));
    if (g.periodic) {
      cell = std::clamp(cell, 0L, static_cast<long>(n - 1));
    } else if (cell < 0 || cell >= n) {
      return false;
    }
    flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(cell);
  }
  return g.values[flat] != 0;
}

}  // namespace

ControlSet ControlSet::periodic_balls(int dimension, double radius) {
  require(dimension >= 1, "ControlSet: dimension must be positive");
  require(radius > 0.0, "ControlSet: periodic-balls radius must be positive");
  return ControlSet(dimension, PeriodicBalls{radius});
}

ControlSet ControlSet::ball_complement(Eigen::VectorXd center, double radius) {
  require(center.size() >= 1, "ControlSet: dimension must be positive");
  require(radius >= 0.0, "ControlSet: ball-complement radius must be non-negative");
  const int d = static_cast<int>(center.size());
  return ControlSet(d, BallComplement{radius, std::move(center)});
}

ControlSet ControlSet::clearing(const ControlSet& base, Eigen::VectorXd center, double radius) {
  require(center.size() == base.dimension(), "ControlSet: clearing centre has wrong dimension");
  require(radius >= 0.0, "ControlSet: clearing radius must be non-negative");
  return ControlSet(base.dimension(),
                    Clearing{std::make_shared<const ControlSet>(base), radius, std::move(center)});
}

ControlSet ControlSet::custom(CustomGrid grid) {
  const auto d = grid.lower.size();
  require(d >= 1 && grid.upper.size() == d && grid.shape.size() == static_cast<std::size_t>(d),
          "ControlSet: custom grid bounds and shape must share the dimension");
  std::size_t cells = 1;
  for (Eigen::Index i = 0; i < d; ++i) {
    require(grid.shape[static_cast<std::size_t>(i)] >= 1, "ControlSet: custom grid shape must be positive");
    require(grid.upper[i] > grid.lower[i], "ControlSet: custom grid upper must exceed lower");
    cells *= static_cast<std::size_t>(grid.shape[static_cast<std::size_t>(i)]);
  }
  require(grid.values.size() == cells, "ControlSet: custom grid value count does not match shape");
  for (auto v : grid.values) require(v == 0 || v == 1, "ControlSet: indicator values must be 0 or 1");
  return ControlSet(static_cast<int>(d), std::move(grid));
}

ControlSet ControlSet::full_space(int dimension) {
  require(dimension >= 1, "ControlSet: dimension must be positive");
  CustomGrid g;
  g.lower = Eigen::VectorXd::Constant(dimension, -kPi);
  g.upper = Eigen::VectorXd::Constant(dimension, kPi);
  g.shape.assign(static_cast<std::size_t>(dimension), 1);
  g.values = {1};
  g.periodic = true;
  return custom(std::move(g));
}

std::string ControlSet::variant_name() const {
  struct Visitor {
    std::string operator()(const PeriodicBalls&) const { return "periodic-balls"; }
    std::string operator()(const BallComplement&) const { return "ball-complement"; }
    std::string operator()(const Clearing&) const { return "clearing"; }
    std::string operator()(const CustomGrid&) const { return "custom"; }
  };
  return std::visit(Visitor{}, variant_);
}

bool ControlSet::contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  struct Visitor {
    const Eigen::Ref<const Eigen::VectorXd>& x;
    bool operator()(const PeriodicBalls& s) const {
      double r2 = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double y = reduce_periodic(x[i]);
        r2 += y * y;
      }
      return r2 < s.radius * s.radius;
    }
    bool operator()(const BallComplement& s) const {
      return (x - s.center).squaredNorm() >= s.radius * s.radius;
    }
    bool operator()(const Clearing& s) const {
      return (x - s.center).squaredNorm() >= s.radius * s.radius && s.base->contains(x);
    }
    bool operator()(const CustomGrid& s) const { return custom_contains(s, x); }
  };
  return std::visit(Visitor{x}, variant_);
}

bool ControlSet::is_periodic() const {
  if (std::holds_alternative<PeriodicBalls>(variant_)) return true;
  if (const auto* g = std::get_if<CustomGrid>(&variant_)) return g->periodic;
  return false;
}

std::vector<Box> ControlSet::sampling_windows(double margin) const {
  const int d = dimension_;
  struct Visitor {
    int d;
    double margin;
    std::vector<Box> operator()(const PeriodicBalls&) const {
      return {Box{Eigen::VectorXd::Constant(d, -kPi), Eigen::VectorXd::Constant(d, kPi),
                  Eigen::VectorXd::Zero(d)}};
    }
    std::vector<Box> operator()(const BallComplement& s) const {
      const double w = s.radius + margin;
      return {Box{s.center.array() - w, s.center.array() + w, s.center}};
    }
    std::vector<Box> operator()(const Clearing& s) const {
      auto windows = s.base->sampling_windows(margin);
      const double w = s.radius + margin;
      windows.push_back(Box{s.center.array() - w, s.center.array() + w, s.center});
      return windows;
    }
    std::vector<Box> operator()(const CustomGrid& s) const {
      const Eigen::VectorXd mid = 0.5 * (s.lower + s.upper);
      if (s.periodic) return {Box{s.lower, s.upper, mid}};
      return {Box{s.lower.array() - margin, s.upper.array() + margin, mid}};
    }
  };
  return std::visit(Visitor{d, margin}, variant_);
}

Eigen::VectorXd ControlSet::canonical_point(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd y = x;
  if (std::holds_alternative<PeriodicBalls>(variant_)) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      y[i] = reduce_periodic(y[i]);
      if (y[i] <= -kPi) y[i] += kTwoPi;  // canonical cell (-pi, pi]
    }
  } else if (const auto* g = std::get_if<CustomGrid>(&variant_); g && g->periodic) {
    for (Eigen::Index i = 0; i < y.size(); ++i)
      y[i] = wrap_to_cell(y[i], g->lower[i], g->upper[i] - g->lower[i]);
  }
  return y;
}

std::vector<Interval> ControlSet::intervals_1d(double lo, double hi) const {
  require(dimension_ == 1, "intervals_1d: set must be one-dimensional");
  require(hi >= lo, "intervals_1d: empty window");
  struct Visitor {
    double lo;
    double hi;
    std::vector<Interval> operator()(const PeriodicBalls& s) const {
      std::vector<Interval> pieces;
      const auto k0 = static_cast<long>(std::floor((lo - s.radius) / kTwoPi));
      const auto k1 = static_cast<long>(std::ceil((hi + s.radius) / kTwoPi));
      for (long k = k0; k <= k1; ++k) {
        const double c = kTwoPi * static_cast<double>(k);
        pieces.push_back({std::max(lo, c - s.radius), std::min(hi, c + s.radius)});
      }
      return merge(std::move(pieces));
    }
    std::vector<Interval> operator()(const BallComplement& s) const {
      const double c = s.center[0];
      return merge({{lo, std::min(hi, c - s.radius)}, {std::max(lo, c + s.radius), hi}});
    }
    std::vector<Interval> operator()(const Clearing& s) const {
      const double c = s.center[0];
      return subtract(s.base->intervals_1d(lo, hi), c - s.radius, c + s.radius);
    }
    std::vector<Interval> operator()(const CustomGrid& g) const {
      const int n = g.shape[0];
      const double h = (g.upper[0] - g.lower[0]) / n;
      std::vector<Interval> pieces;
      auto emit = [&](double offset) {
        for (int i = 0; i < n; ++i) {
          if (g.values[static_cast<std::size_t>(i)] == 0) continue;
          const double a = offset + g.lower[0] + i * h;
          pieces.push_back({std::max(lo, a), std::min(hi, a + h)});
        }
      };
      if (g.periodic) {
        const double period = g.upper[0] - g.lower[0];
        const auto j0 = static_cast<long>(std::floor((lo - g.upper[0]) / period));
        const auto j1 = static_cast<long>(std::ceil((hi - g.lower[0]) / period));
        for (long j = j0; j <= j1; ++j) emit(period * static_cast<double>(j));
      } else {
        emit(0.0);
      }
      return merge(std::move(pieces));
    }
  };
  return std::visit(Visitor{lo, hi}, variant_);
}

int indicator(const ControlSet& set, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != set.dimension())
    throw std::invalid_argument("indicator: point dimension " + std::to_string(x.size()) +
                                " does not match set dimension " +
                                std::to_string(set.dimension()));
  return set.contains(x) ? 1 : 0;
}

std::vector<Eigen::VectorXd> shifted_halton(int dimension, int count, std::uint64_t seed) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  require(dimension >= 1 && dimension <= 12, "shifted_halton: dimension must be in [1, 12]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::VectorXd shift(dimension);
  for (int j = 0; j < dimension; ++j) shift[j] = uniform(rng);
  std::vector<Eigen::VectorXd> points(static_cast<std::size_t>(count), Eigen::VectorXd(dimension));
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < dimension; ++j) {
      const int base = kPrimes[j];
      double f = 1.0;
      double r = 0.0;
      for (int k = i + 1; k > 0; k /= base) {
        f /= base;
        r += f * (k % base);
      }
      const double v = r + shift[j];
      points[static_cast<std::size_t>(i)][j] = v - std::floor(v);
    }
  }
  return points;
}

namespace {

// Node grid over each window (endpoints included) plus the window anchor.
std::vector<Eigen::VectorXd> window_grid(const std::vector<Box>& windows, int per_axis) {
  std::vector<Eigen::VectorXd> points;
  for (const auto& box : windows) {
    const int d = static_cast<int>(box.lower.size());
    for_each_box_index(d, 0, per_axis - 1, [&](const IntVec& idx) {
      Eigen::VectorXd p(d);
      for (int i = 0; i < d; ++i) {
        const double s = per_axis == 1 ? 0.5 : static_cast<double>(idx[static_cast<std::size_t>(i)]) / (per_axis - 1);
        p[i] = box.lower[i] + s * (box.upper[i] - box.lower[i]);
      }
      points.push_back(std::move(p));
    });
    points.push_back(box.anchor);
  }
  return points;
}

}  // namespace

ThicknessReport thickness_check(const ControlSet& set, double rho, int centers_per_axis,
                                int mc_samples, std::uint64_t seed) {
  require(rho > 0.0, "thickness_check: rho must be positive");
  require(mc_samples > 0, "thickness_check: mc_samples must be positive");
  require(centers_per_axis > 0, "thickness_check: centers_per_axis must be positive");
  const int d = set.dimension();

  // Offsets inside the unit ball, from cube samples mapped to [-1, 1]^d.
  std::vector<Eigen::VectorXd> offsets;
  for (auto& u : shifted_halton(d, mc_samples, seed)) {
    Eigen::VectorXd s = 2.0 * u.array() - 1.0;
    if (s.squaredNorm() < 1.0) offsets.push_back(std::move(s));
  }
  const double cube_volume = std::pow(2.0 * rho, d);

  const auto centers = window_grid(set.sampling_windows(rho), centers_per_axis);
  ThicknessReport report;
  report.rho = rho;
  report.mc_samples = mc_samples;
  report.seed = seed;
  report.centers_evaluated = centers.size();
  report.gamma_mass = kInf;
  Eigen::VectorXd probe(d);
  for (const auto& x : centers) {
    std::size_t hits = 0;
    for (const auto& s : offsets) {
      probe = x + rho * s;
      if (set.contains(probe)) ++hits;
    }
    const double mass = cube_volume * static_cast<double>(hits) / mc_samples;
    if (mass < report.gamma_mass) {
      report.gamma_mass = mass;
      report.worst_center = x;
    }
  }
  const double ball = ball_volume(d, rho);
  if (report.gamma_mass < 1e-6 * ball) report.gamma_mass = 0.0;
  report.is_thick = report.gamma_mass > 0.0;
  report.tolerance_band = 2.0 / std::sqrt(static_cast<double>(mc_samples)) * ball;
  return report;
}

std::vector<Eigen::VectorXd> line_directions(int dimension, int samples) {
  require(dimension >= 1, "line_directions: dimension must be positive");
  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < dimension; ++i) dirs.push_back(Eigen::VectorXd::Unit(dimension, i));
  if (dimension == 1 || samples <= 0) return dirs;
  if (dimension == 2) {
    // lines are unoriented, so half a circle suffices
    for (int i = 0; i < samples; ++i) {
      const double phi = kPi * (i + 0.5) / samples;
      Eigen::VectorXd v(2);
      v << std::cos(phi), std::sin(phi);
      dirs.push_back(std::move(v));
    }
  } else if (dimension == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < samples; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / samples;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Eigen::VectorXd v(3);
      v << r * std::cos(golden * i), r * std::sin(golden * i), z;
      dirs.push_back(std::move(v));
    }
  } else {
    for (auto& u : shifted_halton(dimension, samples, 0)) {
      Eigen::VectorXd v = 2.0 * u.array() - 1.0;
      if (v.norm() > 1e-8) dirs.push_back(v.normalized());
    }
  }
  return dirs;
}

GCCReport gcc_check(const ControlSet& set, double length, int direction_samples,
                    int offset_samples, int line_resolution) {
  require(length > 0.0, "gcc_check: length must be positive");
  require(offset_samples > 0, "gcc_check: offset_samples must be positive");
  require(line_resolution > 0, "gcc_check: line_resolution must be positive");
  require(direction_samples >= 0, "gcc_check: direction_samples must be non-negative");
  const int d = set.dimension();
  const auto directions = line_directions(d, direction_samples);
  const auto bases = window_grid(set.sampling_windows(length), offset_samples);

  GCCReport report;
  report.length = length;
  report.delta_line = kInf;
  Eigen::VectorXd probe(d);
  for (const auto& v : directions) {
    for (const auto& p : bases) {
      std::size_t hits = 0;
      for (int i = 0; i < line_resolution; ++i) {
        probe = p + ((i + 0.5) / line_resolution * length) * v;
        if (set.contains(probe)) ++hits;
      }
      ++report.lines_evaluated;
      const double measure = length * static_cast<double>(hits) / line_resolution;
      if (measure < report.delta_line) {
        report.delta_line = measure;
        report.witness_line = Line{set.canonical_point(p), v};
      }
    }
  }
  if (report.delta_line < 1e-6 * length) report.delta_line = 0.0;
  report.satisfies_gcc = report.delta_line > 0.0;
  return report;
}

}  // namespace obslab

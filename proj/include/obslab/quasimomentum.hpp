#pragma once

#include "obslab/common.hpp"

namespace obslab {

/// Floquet parameter theta in (-pi, pi]^d.
class Quasimomentum {
 public:
  Quasimomentum() = default;
  /// Throws unless every component lies in (-pi, pi].
  explicit Quasimomentum(Eigen::VectorXd theta);
  /// Reduces each component into (-pi, pi].
  static Quasimomentum wrapped(const Eigen::Ref<const Eigen::VectorXd>& theta);
  static Quasimomentum zero(int dimension) { return Quasimomentum(Eigen::VectorXd::Zero(dimension)); }

  int dimension() const { return static_cast<int>(theta_.size()); }
  const Eigen::VectorXd& value() const { return theta_; }
  double operator[](Eigen::Index i) const { return theta_[i]; }

  /// The shift theta / (2 pi) of the frequency lattice.
  Eigen::VectorXd lattice_shift() const { return theta_ / kTwoPi; }

 private:
  Eigen::VectorXd theta_;
};

inline Quasimomentum::Quasimomentum(Eigen::VectorXd theta) : theta_(std::move(theta)) {
  require(theta_.size() >= 1, "Quasimomentum: dimension must be positive");
  for (Eigen::Index i = 0; i < theta_.size(); ++i)
    require(theta_[i] > -kPi && theta_[i] <= kPi, "Quasimomentum: components must lie in (-pi, pi]");
}

inline Quasimomentum Quasimomentum::wrapped(const Eigen::Ref<const Eigen::VectorXd>& theta) {
  Eigen::VectorXd t = theta;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    t[i] = std::remainder(t[i], kTwoPi);
    if (t[i] <= -kPi) t[i] += kTwoPi;
  }
  return Quasimomentum(std::move(t));
}

}  // namespace obslab

#pragma once

#include <memory>
#include <vector>

#include "obslab/common.hpp"

namespace obslab {

/// Periodic box [center - L/2, center + L/2)^d with N points per axis, used as
/// a stand-in for R^d. Free Schrödinger and heat evolution act as Fourier
/// multipliers exp(-i |xi|^2 t) and exp(-|xi|^2 t).
class SpectralBox {
 public:
  SpectralBox(int dimension, int points_per_axis, double length, Eigen::VectorXd center);
  ~SpectralBox();
  SpectralBox(const SpectralBox&) = delete;
  SpectralBox& operator=(const SpectralBox&) = delete;

  int dimension() const { return dimension_; }
  int points_per_axis() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }
  std::size_t size() const { return size_; }
  const Eigen::VectorXd& center() const { return center_; }

  /// Coordinate of grid point `flat` (row-major, last axis fastest).
  Eigen::VectorXd point(std::size_t flat) const;
  /// Squared frequency |xi|^2 of Fourier mode `flat` in FFT order.
  double frequency_squared(std::size_t flat) const { return xi2_[flat]; }

  std::vector<Complex> sample(const std::function<Complex(const Eigen::VectorXd&)>& f) const;

  std::vector<Complex> schrodinger(const std::vector<Complex>& v, double t);
  std::vector<Complex> heat(const std::vector<Complex>& v, double t);
  /// Applies an arbitrary Fourier multiplier m(|xi|^2).
  std::vector<Complex> multiply(const std::vector<Complex>& v,
                                const std::function<Complex(double)>& multiplier);

  /// sum |v|^2 h^d
  double norm_squared(const std::vector<Complex>& v) const;

 private:
  struct Plans;

  int dimension_;
  int n_;
  double length_;
  Eigen::VectorXd center_;
  std::size_t size_;
  std::vector<double> xi2_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace obslab

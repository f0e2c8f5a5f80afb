#include "obslab/spectral_box.hpp"

#include <fftw3.h>

namespace obslab {

struct SpectralBox::Plans {
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (buffer) fftw_free(buffer);
  }
};

SpectralBox::SpectralBox(int dimension, int points_per_axis, double length, Eigen::VectorXd center)
    : dimension_(dimension), n_(points_per_axis), length_(length), center_(std::move(center)) {
  require(dimension >= 1, "SpectralBox: dimension must be positive");
  require(points_per_axis >= 2, "SpectralBox: need at least two points per axis");
  require(length > 0.0, "SpectralBox: length must be positive");
  require(center_.size() == dimension, "SpectralBox: centre has the wrong dimension");
  size_ = 1;
  for (int i = 0; i < dimension; ++i) size_ *= static_cast<std::size_t>(n_);

  xi2_.assign(size_, 0.0);
  const double dk = kTwoPi / length_;
  for (std::size_t flat = 0; flat < size_; ++flat) {
    std::size_t rest = flat;
    double sum = 0.0;
    for (int axis = dimension - 1; axis >= 0; --axis) {
      const auto j = static_cast<int>(rest % static_cast<std::size_t>(n_));
      rest /= static_cast<std::size_t>(n_);
      const int k = j <= n_ / 2 ? j : j - n_;
      sum += (dk * k) * (dk * k);
    }
    xi2_[flat] = sum;
  }

  plans_ = std::make_unique<Plans>();
  plans_->buffer = fftw_alloc_complex(size_);
  std::vector<int> dims(static_cast<std::size_t>(dimension), n_);
  plans_->forward = fftw_plan_dft(dimension, dims.data(), plans_->buffer, plans_->buffer,
                                  FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft(dimension, dims.data(), plans_->buffer, plans_->buffer,
                                   FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->backward) throw NumericalError("SpectralBox: FFT planning failed");
}

SpectralBox::~SpectralBox() = default;

Eigen::VectorXd SpectralBox::point(std::size_t flat) const {
  Eigen::VectorXd x(dimension_);
  for (int axis = dimension_ - 1; axis >= 0; --axis) {
    const auto j = static_cast<double>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
    x[axis] = center_[axis] - 0.5 * length_ + j * spacing();
  }
  return x;
}

std::vector<Complex> SpectralBox::sample(const std::function<Complex(const Eigen::VectorXd&)>& f) const {
  std::vector<Complex> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = f(point(i));
  return out;
}

std::vector<Complex> SpectralBox::multiply(const std::vector<Complex>& v,
                                           const std::function<Complex(double)>& multiplier) {
  require(v.size() == size_, "SpectralBox: vector has the wrong size");
  static_assert(sizeof(Complex) == sizeof(fftw_complex));
  auto* data = reinterpret_cast<Complex*>(plans_->buffer);
  std::copy(v.begin(), v.end(), data);
  fftw_execute(plans_->forward);
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) data[i] *= multiplier(xi2_[i]) * scale;
  fftw_execute(plans_->backward);
  return std::vector<Complex>(data, data + size_);
}

std::vector<Complex> SpectralBox::schrodinger(const std::vector<Complex>& v, double t) {
  return multiply(v, [t](double xi2) { return std::polar(1.0, -xi2 * t); });
}

std::vector<Complex> SpectralBox::heat(const std::vector<Complex>& v, double t) {
  return multiply(v, [t](double xi2) { return Complex(std::exp(-xi2 * t), 0.0); });
}

double SpectralBox::norm_squared(const std::vector<Complex>& v) const {
  double sum = 0.0;
  for (const auto& z : v) sum += std::norm(z);
  return sum * std::pow(spacing(), dimension_);
}

}  // namespace obslab

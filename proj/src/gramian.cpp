#include "obslab/gramian.hpp"

#include <iomanip>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "obslab/bessel.hpp"
#include "obslab/lattice.hpp"

namespace obslab {

double ball_exp_integral_radial(int m, double k_norm, double radius) {
  require(m >= 1, "ball_exp_integral: dimension must be positive");
  require(radius > 0.0, "ball_exp_integral: radius must be positive");
  const double volume = ball_volume(m, radius);
  const double s = radius * std::abs(k_norm);
  const double order = 0.5 * m;
  if (s < 1.0) {
    // Vol * Gamma(nu+1) * sum_j (-1)^j (s/2)^(2j) / (j! Gamma(j+nu+1))
    const double q = 0.25 * s * s;
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < 40; ++j) {
      term *= -q / (j * (j + order));
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return volume * sum;
  }
  return std::pow(kTwoPi, order) * std::pow(radius, m) * std::pow(s, -order) * bessel_j(order, s);
}

double ball_exp_integral(const Eigen::Ref<const Eigen::VectorXd>& k, double radius) {
  return ball_exp_integral_radial(static_cast<int>(k.size()), k.norm(), radius);
}

double GramMatrix::quadratic_form(const Eigen::Ref<const Eigen::VectorXcd>& alpha) const {
  require(alpha.size() == entries.rows(), "quadratic_form: coefficient count mismatch");
  return (alpha.adjoint() * entries.cast<Complex>() * alpha)(0, 0).real();
}

GramMatrix gram_matrix(const PointSet& points, double radius) {
  require(radius > 0.0, "gram_matrix: radius must be positive");
  require(points.cols() >= 1, "gram_matrix: points need a positive ambient dimension");
  const Eigen::Index n = points.rows();
  const int m = static_cast<int>(points.cols());
  GramMatrix g;
  g.points = points;
  g.radius = radius;
  g.entries.resize(n, n);
  const double diagonal = ball_volume(m, radius);
  for (Eigen::Index j = 0; j < n; ++j) {
    g.entries(j, j) = diagonal;
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double dist = (points.row(j) - points.row(k)).norm();
      if (dist == 0.0)
        throw std::invalid_argument("gram_matrix: duplicate points " + std::to_string(j) + " and " +
                                    std::to_string(k));
      const double v = ball_exp_integral_radial(m, dist, radius);
      g.entries(j, k) = v;
      g.entries(k, j) = v;
    }
  }
  return g;
}

namespace {

template <class Matrix>
EigenPair smallest_eigenpair_impl(const Matrix& g) {
  require(g.rows() == g.cols() && g.rows() > 0, "smallest_eigenpair: matrix must be square and non-empty");
  const double scale = g.cwiseAbs().maxCoeff();
  const double asymmetry = (g - g.adjoint()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-12 * std::max(scale, 1e-300))
    throw std::invalid_argument("smallest_eigenpair: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g);
  if (solver.info() != Eigen::Success) throw NumericalError("smallest_eigenpair: eigensolver failed");
  EigenPair out;
  out.value = solver.eigenvalues()(0);
  out.vector = solver.eigenvectors().col(0).template cast<Complex>();
  const Eigen::VectorXcd r = g.template cast<Complex>() * out.vector - out.value * out.vector;
  out.residual = r.norm();
  const double norm = solver.eigenvalues().cwiseAbs().maxCoeff();
  if (out.residual > 1e-8 * std::max(norm, 1e-300))
    throw NumericalError("smallest_eigenpair: residual above tolerance");
  return out;
}

}  // namespace

EigenPair smallest_eigenpair(const Eigen::Ref<const Eigen::MatrixXd>& g) {
  return smallest_eigenpair_impl(Eigen::MatrixXd(g));
}

EigenPair smallest_eigenpair(const Eigen::Ref<const Eigen::MatrixXcd>& g) {
  return smallest_eigenpair_impl(Eigen::MatrixXcd(g));
}

double smallest_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& g) {
  return smallest_eigenpair(g).value;
}

double smallest_eigenvalue(const Eigen::Ref<const Eigen::MatrixXcd>& g) {
  return smallest_eigenpair(g).value;
}

InghamCertificate ingham_certify(const PointSet& points, double radius, double c, double delta) {
  require(points.rows() >= 1, "ingham_certify: empty point set");
  require(c > 0.0, "ingham_certify: Ingham constant must be positive");
  require(delta > 0.0, "ingham_certify: gap must be positive");
  const double true_gap = gap(points);
  if (delta > true_gap * (1.0 + 1e-12))
    throw std::invalid_argument("ingham_certify: declared gap exceeds the true gap of the points");
  InghamCertificate cert;
  cert.points = points;
  cert.radius = radius;
  cert.gap = delta;
  cert.ingham_constant = c;
  cert.in_regime = radius >= c / delta;
  cert.lambda_min = smallest_eigenvalue(gram_matrix(points, radius).entries);
  cert.satisfied = cert.lambda_min > 0.0;
  return cert;
}

std::string matrix_to_csv(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace obslab

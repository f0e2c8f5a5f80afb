#pragma once

#include <string>

#include "obslab/common.hpp"

namespace obslab {

/// Rows are points of R^m.
using PointSet = Eigen::MatrixXd;

/// Integral of exp(i z.k) over the ball B_R(0) in R^m, where m = k.size():
/// (2 pi)^(m/2) R^m (R|k|)^(-m/2) J_(m/2)(R|k|), and Vol(B_R) at k = 0.
double ball_exp_integral(const Eigen::Ref<const Eigen::VectorXd>& k, double radius);

/// Same integral as a function of |k| only.
double ball_exp_integral_radial(int m, double k_norm, double radius);

/// G[j][k] = integral over B_R of exp(i z.(x_j - x_k)); real symmetric.
struct GramMatrix {
  PointSet points;
  double radius = 0.0;
  Eigen::MatrixXd entries;

  int ambient_dim() const { return static_cast<int>(points.cols()); }
  Eigen::Index size() const { return entries.rows(); }

  /// Integral over B_R of |sum_j alpha_j exp(i x_j.z)|^2, i.e. alpha^* G alpha.
  double quadratic_form(const Eigen::Ref<const Eigen::VectorXcd>& alpha) const;
};

GramMatrix gram_matrix(const PointSet& points, double radius);

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXcd vector;
  double residual = 0.0;  ///< ||G v - lambda v||
};

/// Smallest eigenpair of a Hermitian matrix by a dense self-adjoint solve.
/// Throws std::invalid_argument for non-Hermitian input and NumericalError
/// if the residual exceeds 1e-8 ||G||.
EigenPair smallest_eigenpair(const Eigen::Ref<const Eigen::MatrixXd>& g);
EigenPair smallest_eigenpair(const Eigen::Ref<const Eigen::MatrixXcd>& g);

double smallest_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& g);
double smallest_eigenvalue(const Eigen::Ref<const Eigen::MatrixXcd>& g);

struct InghamCertificate {
  PointSet points;
  double radius = 0.0;
  double lambda_min = 0.0;
  bool satisfied = false;  ///< lambda_min > 0
  double gap = 0.0;        ///< separation used for the regime test
  double ingham_constant = 0.0;
  bool in_regime = false;  ///< radius >= c / gap
};

/// Eigen-solves the Gram matrix of `points` over B_R and records whether the
/// Ingham regime R >= c / delta holds. `delta` must not exceed the true gap.
InghamCertificate ingham_certify(const PointSet& points, double radius, double c, double delta);

/// Comma separated matrix, one row per line, 17 significant digits.
std::string matrix_to_csv(const Eigen::Ref<const Eigen::MatrixXd>& m);

}  // namespace obslab

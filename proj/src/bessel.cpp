#include "obslab/bessel.hpp"

#include <cmath>
#include <stdexcept>

#include "obslab/common.hpp"

namespace obslab {

namespace {

bool is_half_integer_order(double order) {
  return order >= 0.0 && std::abs(2.0 * order - std::round(2.0 * order)) == 0.0;
}

}  // namespace

double bessel_j(double order, double x) {
  require(is_half_integer_order(order), "bessel_j: order must be a non-negative (half-)integer");
  require(x >= 0.0, "bessel_j: negative argument");
  if (x == 0.0) return order == 0.0 ? 1.0 : 0.0;
  return std::cyl_bessel_j(order, x);
}

double first_bessel_zero(double order) {
  require(is_half_integer_order(order), "first_bessel_zero: order must be a non-negative (half-)integer");
  // J_nu > 0 on (0, nu], and the first zero lies below nu + 2 nu^(1/3) + 3.
  const double step = 0.05;
  double lo = std::max(order, step);
  double f_lo = bessel_j(order, lo);
  double hi = lo + step;
  double f_hi = bessel_j(order, hi);
  while (f_lo * f_hi > 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi += step;
    f_hi = bessel_j(order, hi);
    if (hi > order + 2.0 * std::cbrt(order + 1.0) + 10.0)
      throw NumericalError("first_bessel_zero: failed to bracket the first zero");
  }
  for (int iter = 0; iter < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = bessel_j(order, mid);
    if (f_mid == 0.0) return mid;
    if (f_lo * f_mid < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace obslab

#pragma once

namespace obslab {

/// Bessel function of the first kind J_nu(x) for integer or half-integer
/// order nu >= 0 and x >= 0.
double bessel_j(double order, double x);

/// First positive zero of J_nu, bracketed by a forward scan and refined by
/// bisection to machine resolution.
double first_bessel_zero(double order);

}  // namespace obslab

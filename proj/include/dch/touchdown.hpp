#pragma once

#include <cstddef>
#include <vector>

#include "dch/bvp.hpp"

namespace dch {

enum class FarFieldSide { left, right };

/// Leading far-field behaviour of phi^n phi''' = 1.
///   left  (y -> -inf): phi = x + xi(x), x = B - y,
///         xi(x) = x^(3-n) / ((n-1)(n-2)(n-3)), or -ln(x)/2 when n = 3;
///   right (y -> +inf): phi = A y^2 + D y + E + K y^(3-2n),
///         K = -1 / (A^n (2n-1)(2n-2)(2n-3)).
struct FarFieldExpansion {
  FarFieldSide side = FarFieldSide::left;
  double n = 4.0;
  double B = 0.0;
  double A = 0.0;
  double D = 0.0;
  double E = 0.0;

  /// Exponent of the leading correction: 3 - n (left, 0 meaning logarithmic
  /// at n = 3) or 3 - 2n (right).
  double correction_exponent() const;
  /// Coefficient K of the right correction.
  double right_correction_coefficient() const;
};

/// Left expansion with translation constant B. Throws DomainError for n <= 2.
FarFieldExpansion left_far_field(double n, double B = 0.0);
/// Right expansion. Throws DomainError for n <= 3/2 or A <= 0.
FarFieldExpansion right_far_field(double n, double A, double D, double E);

struct FarFieldValue {
  double phi = 0.0;
  double phi_prime = 0.0;
  double phi_double_prime = 0.0;
};

/// Throws DomainError when y lies on the wrong side (x <= 0 on the left, y <= 0 on the right).
FarFieldValue far_field_eval(const FarFieldExpansion& expansion, double y);

struct TouchdownOptions {
  /// Truncation of the left half, y in [-L, L_plus] before translation.
  /// L = 0 selects default_truncation(n).
  double L = 0.0;
  double L_plus = 200.0;
  /// 0 selects a uniform spacing of 1/160.
  std::size_t intervals = 0;
  /// Left translation constant of the far field imposed at -L.
  double left_offset = 0.0;
  int max_newton = 40;
};

/// Smallest L = 200 * 2^k for which the left correction at -L is below 1% of the leading term.
double default_truncation(double n);

struct TouchdownProfile {
  double n = 4.0;
  /// Mesh translated so the minimiser sits at y = 0.
  std::vector<double> mesh;
  std::vector<double> phi;
  std::vector<double> dphi;
  std::vector<double> d2phi;
  /// Minimiser before translation.
  double y_min = 0.0;
  /// Far-field curvature phi''(+inf) = 2 A, the value entering the matching.
  double kappa = 0.0;
  /// phi'' at the minimiser.
  double kappa_min = 0.0;
  double truncation = 0.0;
  FarFieldExpansion left;
  FarFieldExpansion right;
  /// Collocation solution in untranslated coordinates.
  bvp::Solution<3> raw;

  /// phi, phi', phi'' at y (translated). Uses the interpolant on the mesh and
  /// the far fields outside it.
  FarFieldValue eval(double y) const;
  /// max |phi''' - phi^(-n)| / max(phi^(-n), 1) over interior nodes, which is
  /// |phi^n phi''' - 1| wherever phi <= 1. phi''' is the sixth-order central
  /// difference of phi''.
  double node_residual() const;
  /// Exponent 3 - n estimated from the log-log slope of phi' + 1 over x = -y in [x_lo, x_hi].
  double left_tail_exponent(double x_lo, double x_hi) const;
  /// Quadratic coefficient from a least-squares fit of phi / y^2 against 1/y over
  /// the last decade of the mesh.
  double fitted_quadratic_coefficient() const;
};

/// Solves phi^n phi''' = 1 with the left far field imposed at -L by
/// collocation. Throws NegativeExcursion if phi <= 0 and NoConvergence.
TouchdownProfile solve_phi0(double n, double tol, const TouchdownOptions& options = {});

}  // namespace dch

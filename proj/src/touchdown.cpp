#include "dch/touchdown.hpp"

#include <algorithm>
#include <cmath>

#include "dch/errors.hpp"

namespace dch {

namespace {

using Vec3 = bvp::Vec<3>;
using Mat3 = bvp::Mat<3>;

bool is_three(double n) { return std::abs(n - 3.0) < 1e-12; }

// xi and its first two derivatives with respect to x.
std::array<double, 3> left_correction(double n, double x) {
  if (is_three(n)) return {-0.5 * std::log(x), -0.5 / x, 0.5 / (x * x)};
  const double c = 1.0 / ((n - 1.0) * (n - 2.0) * (n - 3.0));
  return {c * std::pow(x, 3.0 - n), c * (3.0 - n) * std::pow(x, 2.0 - n),
          c * (3.0 - n) * (2.0 - n) * std::pow(x, 1.0 - n)};
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

double FarFieldExpansion::correction_exponent() const {
  return side == FarFieldSide::left ? 3.0 - n : 3.0 - 2.0 * n;
}

double FarFieldExpansion::right_correction_coefficient() const {
  return -1.0 / (std::pow(A, n) * (2.0 * n - 1.0) * (2.0 * n - 2.0) * (2.0 * n - 3.0));
}

FarFieldExpansion left_far_field(double n, double B) {
  if (!(n > 2.0)) throw DomainError("left far field requires n > 2");
  FarFieldExpansion e;
  e.side = FarFieldSide::left;
  e.n = n;
  e.B = B;
  return e;
}

FarFieldExpansion right_far_field(double n, double A, double D, double E) {
  if (!(n > 1.5)) throw DomainError("right far field requires n > 3/2");
  if (!(A > 0.0)) throw DomainError("right far field requires A > 0");
  FarFieldExpansion e;
  e.side = FarFieldSide::right;
  e.n = n;
  e.A = A;
  e.D = D;
  e.E = E;
  return e;
}

FarFieldValue far_field_eval(const FarFieldExpansion& e, double y) {
  if (e.side == FarFieldSide::left) {
    const double x = e.B - y;
    if (!(x > 0.0)) throw DomainError("left far field evaluated at B - y <= 0");
    const auto xi = left_correction(e.n, x);
    return {x + xi[0], -1.0 - xi[1], xi[2]};
  }
  if (!(y > 0.0)) throw DomainError("right far field evaluated at y <= 0");
  const double k = e.right_correction_coefficient();
  const double p = 3.0 - 2.0 * e.n;
  return {e.A * y * y + e.D * y + e.E + k * std::pow(y, p), 2.0 * e.A * y + e.D + k * p * std::pow(y, p - 1.0),
          2.0 * e.A + k * p * (p - 1.0) * std::pow(y, p - 2.0)};
}

double default_truncation(double n) {
  double L = 200.0;
  while (std::abs(left_correction(n, L)[0]) >= 0.01 * L) L *= 2.0;
  return L;
}

FarFieldValue TouchdownProfile::eval(double y) const {
  if (y < mesh.front()) return far_field_eval(left, y);
  if (y > mesh.back()) return far_field_eval(right, y);
  const double s = y + y_min;
  return {raw.interpolate(0, s), raw.interpolate(1, s), raw.interpolate(2, s)};
}

double TouchdownProfile::node_residual() const {
  const auto& m = raw.mesh;
  const auto& v = raw.values;
  double worst = 0.0;
  for (std::size_t j = 3; j + 3 < m.size(); ++j) {
    const double h = (m[j + 3] - m[j - 3]) / 6.0;
    const double d3 = (45.0 * (v[j + 1][2] - v[j - 1][2]) - 9.0 * (v[j + 2][2] - v[j - 2][2]) +
                       (v[j + 3][2] - v[j - 3][2])) /
                      (60.0 * h);
    const double f = std::pow(v[j][0], -n);
    worst = std::max(worst, std::abs(d3 - f) / std::max(f, 1.0));
  }
  return worst;
}

double TouchdownProfile::left_tail_exponent(double x_lo, double x_hi) const {
  constexpr int samples = 64;
  std::vector<double> lx, lg;
  for (int k = 0; k < samples; ++k) {
    const double x = x_lo * std::pow(x_hi / x_lo, k / (samples - 1.0));
    const double g = eval(-x).phi_prime + 1.0;
    if (!(g > 0.0)) throw DomainError("left tail deviation is not positive");
    lx.push_back(std::log(x));
    lg.push_back(std::log(g));
  }
  return slope_fit(lx, lg) + 1.0;
}

double TouchdownProfile::fitted_quadratic_coefficient() const {
  // Least squares for phi / y^2 = A + D z + E z^2 with z = 1 / y.
  const double y_end = mesh.back();
  double s[5] = {0, 0, 0, 0, 0};
  double t[3] = {0, 0, 0};
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    const double y = mesh[j];
    if (y < 0.1 * y_end) continue;
    const double z = 1.0 / y;
    const double g = phi[j] * z * z;
    double zp = 1.0;
    for (int k = 0; k < 5; ++k) {
      s[k] += zp;
      if (k < 3) t[k] += g * zp;
      zp *= z;
    }
  }
  // Cramer's rule on the 3x3 normal equations.
  const double a[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
  auto det3 = [](const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  double b[3][3];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) b[i][k] = k == 0 ? t[i] : a[i][k];
  return det3(b) / det3(a);
}

TouchdownProfile solve_phi0(double n, double tol, const TouchdownOptions& options) {
  if (!(n > 2.0)) throw DomainError("touchdown profile requires n > 2");
  const double L = options.L > 0.0 ? options.L : default_truncation(n);
  if (!(options.L >= 0.0 && options.L_plus > 0.0)) throw DomainError("truncation lengths must be positive");
  const std::size_t intervals =
      options.intervals > 0 ? options.intervals : static_cast<std::size_t>(std::lround(160.0 * (L + options.L_plus)));
  const double x_left = options.left_offset + L;
  if (!(x_left > 0.0) || std::abs(left_correction(n, x_left)[0]) >= 0.01 * x_left)
    throw DomainError("left truncation too short for the far-field expansion");

  bvp::Problem<3> p;
  p.rhs = [n](double, const Vec3& y) {
    if (!(y[0] > 0.0)) throw DomainError("phi must stay positive");
    return Vec3{y[1], y[2], std::pow(y[0], -n)};
  };
  p.jacobian = [n](double, const Vec3& y) {
    Mat3 j{};
    j[0][1] = 1.0;
    j[1][2] = 1.0;
    j[2][0] = -n * std::pow(y[0], -n - 1.0);
    return j;
  };
  const FarFieldValue start = far_field_eval(left_far_field(n, options.left_offset), -L);
  p.num_left = 3;
  p.left = [start](const Vec3& y, std::span<double> r, std::span<Vec3> g) {
    r[0] = y[0] - start.phi;
    r[1] = y[1] - start.phi_prime;
    r[2] = y[2] - start.phi_double_prime;
    g[0] = Vec3{1, 0, 0};
    g[1] = Vec3{0, 1, 0};
    g[2] = Vec3{0, 0, 1};
  };
  p.right = [](const Vec3&, std::span<double>, std::span<Vec3>) {};

  const std::vector<double> mesh = bvp::uniform_mesh(-L, options.L_plus, intervals);
  // Initial guess by classical RK4 marching from the left data.
  std::vector<Vec3> guess(mesh.size());
  guess[0] = Vec3{start.phi, start.phi_prime, start.phi_double_prime};
  for (std::size_t j = 0; j + 1 < mesh.size(); ++j) {
    const double h = mesh[j + 1] - mesh[j];
    const Vec3& y = guess[j];
    auto add = [](const Vec3& a, const Vec3& b, double s) { return Vec3{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]}; };
    const Vec3 k1 = p.rhs(mesh[j], y);
    const Vec3 k2 = p.rhs(mesh[j], add(y, k1, 0.5 * h));
    const Vec3 k3 = p.rhs(mesh[j], add(y, k2, 0.5 * h));
    const Vec3 k4 = p.rhs(mesh[j], add(y, k3, h));
    for (int c = 0; c < 3; ++c) guess[j + 1][c] = y[c] + h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
    if (!(guess[j + 1][0] > 0.0)) throw NegativeExcursion("phi reached zero while marching the initial guess");
  }

  bvp::CollocationSolver<3> solver(p, mesh);
  bvp::NewtonOptions opt;
  opt.tol = tol;
  opt.max_iter = options.max_newton;
  bvp::Solution<3> sol = solver.solve(std::move(guess), opt);

  std::size_t jmin = 0;
  for (std::size_t j = 0; j < sol.values.size(); ++j) {
    if (!(sol.values[j][0] > 0.0)) throw NegativeExcursion("phi is not positive on the mesh");
    if (sol.values[j][0] < sol.values[jmin][0]) jmin = j;
  }
  if (jmin == 0 || jmin + 1 == sol.mesh.size()) throw NoConvergence("touchdown profile has no interior minimum");

  // Root of phi' on the interval bracketing the discrete minimiser.
  double a = sol.mesh[jmin - 1];
  double b = sol.mesh[jmin + 1];
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    (sol.interpolate(1, m) < 0.0 ? a : b) = m;
  }
  const double y0 = 0.5 * (a + b);

  TouchdownProfile out;
  out.n = n;
  out.y_min = y0;
  out.kappa_min = sol.interpolate(2, y0);
  out.truncation = L;
  for (std::size_t j = 0; j < sol.mesh.size(); ++j) {
    out.mesh.push_back(sol.mesh[j] - y0);
    out.phi.push_back(sol.values[j][0]);
    out.dphi.push_back(sol.values[j][1]);
    out.d2phi.push_back(sol.values[j][2]);
  }
  out.left = left_far_field(n, options.left_offset - y0);

  // Right constants from the end values, with the correction term removed.
  const double ye = out.mesh.back();
  double A = 0.5 * out.d2phi.back();
  for (int it = 0; it < 4; ++it) {
    const FarFieldExpansion trial = right_far_field(n, A, 0.0, 0.0);
    const double k = trial.right_correction_coefficient();
    const double q = 3.0 - 2.0 * n;
    A = 0.5 * (out.d2phi.back() - k * q * (q - 1.0) * std::pow(ye, q - 2.0));
  }
  FarFieldExpansion right = right_far_field(n, A, 0.0, 0.0);
  const double k = right.right_correction_coefficient();
  const double q = 3.0 - 2.0 * n;
  right.D = out.dphi.back() - 2.0 * A * ye - k * q * std::pow(ye, q - 1.0);
  right.E = out.phi.back() - A * ye * ye - right.D * ye - k * std::pow(ye, q);
  out.right = right;
  out.kappa = 2.0 * A;
  out.raw = std::move(sol);
  return out;
}

}  // namespace dch

#include "dch/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dch/errors.hpp"

namespace dch {

BesselOrder::BesselOrder(int order) : order_(order) {
  if (order < 0 || order > 2)
    throw DomainError("Bessel order must be 0, 1 or 2, got " + std::to_string(order));
}

namespace {

void check_argument(double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_i requires a nonnegative argument");
  if (x > kBesselMaxArgument) throw Overflow("bessel_i argument exceeds 750");
}

// sum_k (x/2)^(2k+nu) / (k! (k+nu)!); all terms are positive.
double series(int nu, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int j = 1; j <= nu; ++j) term *= half / j;
  double sum = term;
  const double q = half * half;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// exp(-x) I_nu(x) ~ (2 pi x)^(-1/2) sum_k (-1)^k a_k(nu) / x^k.
double asymptotic_scaled(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

double bessel_i_scaled(BesselOrder order, double x) {
  check_argument(x);
  if (x <= kBesselSeriesCrossover) return series(order.value(), x) * std::exp(-x);
  return asymptotic_scaled(order.value(), x);
}

double bessel_i(BesselOrder order, double x) {
  check_argument(x);
  if (x <= kBesselSeriesCrossover) return series(order.value(), x);
  const double value = std::exp(x + std::log(asymptotic_scaled(order.value(), x)));
  if (!std::isfinite(value)) throw Overflow("bessel_i value exceeds double range");
  return value;
}

double bessel_i_derivative(BesselOrder order, double x) {
  switch (order.value()) {
    case 0:
      return bessel_i(BesselOrder(1), x);
    case 1:
      if (x == 0.0) return 0.5;
      return bessel_i(BesselOrder(0), x) - bessel_i(BesselOrder(1), x) / x;
    default:
      if (x == 0.0) return 0.0;
      return bessel_i(BesselOrder(1), x) - 2.0 * bessel_i(BesselOrder(2), x) / x;
  }
}

}  // namespace dch

#pragma once

namespace dch {

/// Integer orders supported by bessel_i.
class BesselOrder {
 public:
  /// Throws DomainError unless order is 0, 1 or 2.
  explicit BesselOrder(int order);
  int value() const { return order_; }

 private:
  int order_;
};

/// Largest argument accepted by bessel_i.
inline constexpr double kBesselMaxArgument = 750.0;

/// Modified Bessel function of the first kind I_k(x), k in {0, 1, 2}, for
/// 0 <= x <= 750. Uses the positive-term power series below the crossover
/// and the large-argument expansion above it. Throws DomainError for x < 0
/// and Overflow when x > 750 or the value exceeds the double range.
double bessel_i(BesselOrder order, double x);

/// exp(-x) I_k(x); finite on the whole domain.
double bessel_i_scaled(BesselOrder order, double x);

/// d/dx I_k(x): I_0' = I_1, I_1' = I_0 - I_1/x, I_2' = I_1 - 2 I_2/x.
double bessel_i_derivative(BesselOrder order, double x);

/// Argument above which the asymptotic expansion replaces the series.
inline constexpr double kBesselSeriesCrossover = 30.0;

}  // namespace dch

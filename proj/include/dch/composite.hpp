#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "dch/annular.hpp"
#include "dch/model.hpp"
#include "dch/touchdown.hpp"

namespace dch {

/// Exact rational number num / den with den > 0 in lowest terms.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);
  /// Exact conversion of a double with denominator at most max_den; throws
  /// DomainError if x is not such a rational.
  static Rational from_double(double x, std::int64_t max_den = 1000000);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

/// Similarity exponents: v(0,t) ~ t^alpha, min v ~ t^beta, width ~ t^gamma.
struct Exponents {
  Rational alpha;
  Rational beta;
  Rational gamma;
};

/// alpha = gamma = -1/(2(n-1)), beta = -1/(n-1). n must be a rational > 2.
Exponents exponents(double n);

struct CompositeModel {
  double n = 4.0;
  double epsilon = 0.1;
  double r_star = 0.0;
  double mu0 = 0.0;
  double kappa = 0.0;
  Exponents exps;
  // Matching constants, all stored as positive magnitudes.
  double c2 = 0.0;
  double a1 = 0.0;
  double b2 = 0.0;
  double J = 0.0;
  double scale_c = 0.0;
  double scale_d = 0.0;
  std::shared_ptr<const TouchdownProfile> phi0;
  std::shared_ptr<const AnnularSolution> annular;

  /// Relative defect of 2 b2 = kappa c / d^2.
  double matching_defect() const;
};

/// Matching constants from the annular solution and the far-field curvature
/// kappa of the touchdown profile. Throws InconsistentMatching if the
/// identity 2 b2 = kappa c / d^2 fails beyond 1e-8 relative. The returned
/// model carries the annular solution but no touchdown profile.
CompositeModel matching_constants(double n, double epsilon, const AnnularSolution& annular, double kappa);

/// Full model: constants with kappa taken from the profile, which is attached.
CompositeModel build_composite(double n, double epsilon, const AnnularSolution& annular,
                               const TouchdownProfile& profile);

/// Central profile c2 (I0(2 r*/eps) - I0(2r/eps)) on [0, r*], zero beyond.
double psi0(double r, const CompositeModel& model);

/// Leading-order composite approximation of v = 1 - u.
double evaluate_composite(double r, double t, const CompositeModel& model);

struct CompositeError {
  double time = 0.0;
  double max_abs_error = 0.0;
  double location = 0.0;
};

/// max_i |v(r_i, t) - v_comp(r_i, t)| over the snapshot nodes.
CompositeError compare_error(const CompositeModel& model, const RadialState& snapshot, const RadialGrid& grid);

}  // namespace dch

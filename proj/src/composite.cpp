#include "dch/composite.hpp"

#include <cmath>
#include <numeric>

#include "dch/errors.hpp"
#include "dch/specfun.hpp"

namespace dch {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

Rational Rational::from_double(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw DomainError("rational conversion of a non-finite value");
  // Continued-fraction convergents p/q.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rest = x;
  for (int k = 0; k < 64; ++k) {
    const double a = std::floor(rest);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (static_cast<double>(p1) / static_cast<double>(q1) == x) return Rational(p1, q1);
    const double frac = rest - a;
    if (frac == 0.0) break;
    rest = 1.0 / frac;
  }
  throw DomainError("value is not a rational with a small denominator");
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) { return Rational(a.num_ * b.num_, a.den_ * b.den_); }

Exponents exponents(double n) {
  if (!(n > 2.0)) throw DomainError("similarity exponents require n > 2");
  const Rational rn = Rational::from_double(n);
  const Rational nm1 = rn - Rational(1);
  // 1 / (n - 1) = den / (num - den)
  const Rational inv(nm1.den(), nm1.num());
  Exponents e;
  e.beta = Rational(-1) * inv;
  e.alpha = Rational(-1, 2) * inv;
  e.gamma = e.alpha;
  return e;
}

double CompositeModel::matching_defect() const {
  const double lhs = 2.0 * b2;
  return std::abs(lhs - kappa * scale_c / (scale_d * scale_d)) / std::abs(lhs);
}

CompositeModel matching_constants(double n, double epsilon, const AnnularSolution& annular, double kappa) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  if (!(annular.mu0 > 0.0)) throw DomainError("matching requires mu0 > 0");
  CompositeModel m;
  m.n = n;
  m.epsilon = epsilon;
  m.exps = exponents(n);
  m.r_star = annular.r_star;
  m.mu0 = annular.mu0;
  m.kappa = kappa;
  m.annular = std::make_shared<const AnnularSolution>(annular);

  const double x = 2.0 * m.r_star / epsilon;
  const double i1 = bessel_i(BesselOrder(1), x);
  const double i2 = bessel_i(BesselOrder(2), x);
  // Logarithms keep I_1^(2n-1) in range.
  const double log_c2 = (std::log(m.r_star) + std::log(epsilon) + (n - 2.0) * std::log(m.mu0) + std::log(i2) -
                         (3.0 * n + 1.0) * std::log(2.0) - std::log(n - 1.0) - (n - 2.0) * std::log(kappa) -
                         (2.0 * n - 1.0) * std::log(i1)) /
                        (2.0 * (n - 1.0));
  m.c2 = std::exp(log_c2);
  m.a1 = 2.0 * m.c2 / epsilon * i1;
  m.b2 = taylor_coefficient_b2(annular, epsilon);
  m.J = std::abs(m.exps.alpha.value()) * m.c2 * m.r_star * i2 / (std::pow(2.0, n + 1.0) * epsilon * epsilon);
  m.scale_c = std::pow(m.J / (m.a1 * m.a1 * m.a1), 1.0 / (n - 2.0));
  m.scale_d = std::pow(m.J / std::pow(m.a1, n + 1.0), 1.0 / (n - 2.0));
  if (!(m.matching_defect() <= 1e-8))
    throw InconsistentMatching("2 b2 = kappa c / d^2 fails, relative defect " + std::to_string(m.matching_defect()));
  return m;
}

CompositeModel build_composite(double n, double epsilon, const AnnularSolution& annular,
                               const TouchdownProfile& profile) {
  if (std::abs(profile.n - n) > 1e-12) throw DomainError("touchdown profile solved for a different n");
  CompositeModel m = matching_constants(n, epsilon, annular, profile.kappa);
  m.phi0 = std::make_shared<const TouchdownProfile>(profile);
  return m;
}

double psi0(double r, const CompositeModel& model) {
  if (r >= model.r_star) return 0.0;
  const double e = model.epsilon;
  return model.c2 * (bessel_i(BesselOrder(0), 2.0 * model.r_star / e) - bessel_i(BesselOrder(0), 2.0 * r / e));
}

double evaluate_composite(double r, double t, const CompositeModel& model) {
  if (!(t > 0.0)) throw DomainError("composite evaluation requires t > 0");
  if (!model.phi0 || !model.annular) throw DomainError("composite model lacks its region solutions");
  const double ta = std::pow(t, model.exps.alpha.value());
  const double tb = std::pow(t, model.exps.beta.value());
  const double tg = std::pow(t, model.exps.gamma.value());
  const double s = r - model.r_star;
  const double eta = s / (tg * model.scale_d);
  double v = ta * psi0(r, model) + tb * model.scale_c * model.phi0->eval(eta).phi;
  if (s > 0.0) {
    v += 1.0 - model.annular->u_star(r);
    v -= model.b2 * s * s;
  } else {
    v -= model.a1 * ta * (-s);
  }
  return v;
}

CompositeError compare_error(const CompositeModel& model, const RadialState& snapshot, const RadialGrid& grid) {
  if (snapshot.values.size() != grid.num_nodes()) throw DomainError("snapshot does not match grid");
  CompositeError e;
  e.time = snapshot.time;
  for (std::size_t i = 0; i < snapshot.values.size(); ++i) {
    const double r = grid.node(i);
    const double d = std::abs((1.0 - snapshot.values[i]) - evaluate_composite(r, snapshot.time, model));
    if (d > e.max_abs_error) {
      e.max_abs_error = d;
      e.location = r;
    }
  }
  return e;
}

}  // namespace dch

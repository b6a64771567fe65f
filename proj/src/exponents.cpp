#include "splf/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splf/errors.hpp"

namespace splf {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double CriticalExponents::p2_value() const {
  return p2 ? to_double(*p2) : std::numeric_limits<double>::infinity();
}

CriticalExponents critical_exponents(int d) {
  if (d < 2) throw DomainError("critical exponents need d >= 2, got " + std::to_string(d));
  const long long dd = d;
  CriticalExponents out;
  out.p1 = std::max(Rational(3 * dd, dd + 2), Rational(3 * dd - 4, dd));
  if (d >= 3) out.p2 = Rational(2 * dd, dd - 2);
  const double df = d;
  out.p3 = (3.0 * df - 8.0 + std::sqrt(9.0 * df * df + 64.0)) / (2.0 * df);
  return out;
}

namespace {

void require_p_gt_one(double p) {
  if (!(p > 1.0)) throw DomainError("power-law exponent must be > 1, got " + std::to_string(p));
}

}  // namespace

bool admissible_existence(double p, int d) {
  require_p_gt_one(p);
  const auto c = critical_exponents(d);
  return (p > to_double(c.p1) && p < c.p2_value()) || p > c.p3;
}

bool admissible_existence_piecewise(double p, int d) {
  require_p_gt_one(p);
  const auto c = critical_exponents(d);
  if (d <= 8) return p > to_double(c.p1);
  if (d == 9) return (p > to_double(c.p1) && p < c.p2_value()) || p > c.p3;
  return p > c.p3;
}

BetaResult beta(double p, double alpha, int d) {
  if (d < 2) throw DomainError("beta needs d >= 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("beta needs alpha in (0, 1], got " + std::to_string(alpha));
  const double df = d;
  const double lower = 2.0 * df / (df + 2.0 * alpha);
  if (!(p > lower)) {
    throw DomainError("beta needs p > 2d/(d + 2 alpha) = " + std::to_string(lower) + ", got " + std::to_string(p));
  }
  BetaResult out;
  out.interpolation_case = d == 2 && p == 2.0 && alpha == 1.0;
  const double branch = 4.0 * df / (df + 2.0 * alpha);
  out.value = p < branch ? 1.0 + (2.0 / p - 0.5) * df - alpha : 1.0;
  return out;
}

double lambda(double p, int d) {
  if (d < 2) throw DomainError("lambda needs d >= 2");
  if (d == 2) return 0.0;
  const double df = d;
  const double denom = df * p - 3.0 * df + 4.0;
  if (!(denom > 0.0)) {
    throw DomainError("lambda needs p > (3d-4)/d = " + std::to_string((3.0 * df - 4.0) / df) + ", got " + std::to_string(p));
  }
  return 2.0 * std::max(3.0 - p, 0.0) / denom;
}

double delta(double p) {
  require_p_gt_one(p);
  return p / (p + 2.0);
}

double theta_gn(double q, int d) {
  if (d < 2) throw DomainError("theta needs d >= 2");
  const double df = d;
  const bool ok = d == 2 ? (q > 2.0 && std::isfinite(q)) : (q >= 2.0 && q <= 2.0 * df / (df - 2.0));
  if (!ok) throw DomainError("interpolation exponent q = " + std::to_string(q) + " outside its range for d = " + std::to_string(d));
  return (2.0 * df - q * (df - 2.0)) / (2.0 * q);
}

Rational uniqueness_threshold(int d) {
  if (d < 2) throw DomainError("uniqueness threshold needs d >= 2");
  return Rational(1) + Rational(d, 2);
}

ExponentReport exponent_report(int d, std::optional<double> p) {
  ExponentReport r;
  r.d = d;
  r.p = p;
  r.critical = critical_exponents(d);
  r.uniqueness = uniqueness_threshold(d);
  if (!p) return r;
  const double pv = *p;
  r.admissible_existence = admissible_existence(pv, d);
  r.delta = delta(pv);
  r.uniqueness_ok = pv >= to_double(r.uniqueness);
  const double df = d;
  if (d == 2 || df * pv - 3.0 * df + 4.0 > 0.0) r.lambda = lambda(pv, d);
  if (pv > 2.0 * df / (df + 2.0)) r.beta_p1 = beta1(pv, d).value;
  return r;
}

}  // namespace splf

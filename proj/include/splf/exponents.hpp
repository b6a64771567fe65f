#pragma once

#include <boost/rational.hpp>

#include <optional>
#include <string>

namespace splf {

using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }
std::string to_string(const Rational& r);

/// Critical power-law exponents for dimension d.
struct CriticalExponents {
  Rational p1;                // max(3d/(d+2), (3d-4)/d)
  std::optional<Rational> p2; // 2d/(d-2); empty (= +infinity) for d = 2
  double p3 = 0.0;            // (3d - 8 + sqrt(9d^2 + 64)) / (2d)

  double p2_value() const;    // +infinity when p2 is empty
};

CriticalExponents critical_exponents(int d);

/// p in (p1, p2) U (p3, inf).
bool admissible_existence(double p, int d);

/// Same set, written out piecewise in d (2..8, 9, >= 10).
bool admissible_existence_piecewise(double p, int d);

struct BetaResult {
  double value = 1.0;
  /// (d, p, alpha) = (2, 2, 1): the bound holds only in its interpolated form.
  bool interpolation_case = false;
};

/// 1 + (2/p - 1/2) d - alpha if p < 4d/(d + 2 alpha), else 1.
BetaResult beta(double p, double alpha, int d);
inline BetaResult beta1(double p, int d) { return beta(p, 1.0, d); }

/// 2 (3-p)^+ / (dp - 3d + 4) for d >= 3, 0 for d = 2.
double lambda(double p, int d);

/// p / (p + 2).
double delta(double p);

/// (2d - q(d-2)) / (2q) on q in (2, inf) for d = 2, [2, 2d/(d-2)] for d >= 3.
double theta_gn(double q, int d);

/// 1 + d/2.
Rational uniqueness_threshold(int d);

struct ExponentReport {
  int d = 2;
  std::optional<double> p;
  CriticalExponents critical;
  Rational uniqueness;
  // Populated only when p is given.
  std::optional<bool> admissible_existence;
  std::optional<double> lambda;
  std::optional<double> beta_p1;
  std::optional<double> delta;
  std::optional<bool> uniqueness_ok;
};

ExponentReport exponent_report(int d, std::optional<double> p = std::nullopt);

}  // namespace splf

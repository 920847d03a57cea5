#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace carpets {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Tolerance used when accepting a root from the scalar solver: the residual
/// |f(root) - target| must be below this.
inline constexpr double kResidualTol = 1e-13;

/// Tolerance for cross-checks between two independently computed quantities
/// (formula vs. enumeration, two formulas for the same dimension, ...).
inline constexpr double kCrossTol = 1e-10;

/// Tolerance substituting for exact comparison when a carpet was built from
/// doubles rather than rationals.
inline constexpr double kExactTol = 1e-12;

/// A scalar that is either an exact rational or a plain double. Exactness is
/// contagious downward only: combining an exact and an inexact value yields
/// an inexact one.
struct Scalar {
  double value = 0.0;
  bool exact = false;
  Rational rat;  // meaningful only when exact

  Scalar() = default;
  Scalar(double v) : value(v), exact(false) {}  // NOLINT: implicit by design
  explicit Scalar(Rational r)
      : value(static_cast<double>(r)), exact(true), rat(std::move(r)) {}

  static Scalar from_int(long long v) { return Scalar(Rational(v)); }
};

/// Parses "p/q" fractions, integer literals, and decimal literals ("0.125")
/// into exact rationals. Throws CarpetError(ParseError) on malformed input.
Rational parse_rational(const std::string& text);

Scalar scalar_add(const Scalar& a, const Scalar& b);
Scalar scalar_sub(const Scalar& a, const Scalar& b);
Scalar scalar_mul(const Scalar& a, const Scalar& b);

/// a < b, exactly when both operands are exact, otherwise with slack: an
/// inexact comparison requires b - a > kExactTol.
bool scalar_less(const Scalar& a, const Scalar& b);
bool scalar_equal(const Scalar& a, const Scalar& b);

/// Decimal rendering with 12 significant digits, used by every CSV and
/// report writer so output is reproducible bit for bit.
std::string format_sig(double v);

BigInt ipow(BigInt base, unsigned exp);
BigInt ipow(unsigned base, unsigned exp);

/// Natural log of a positive big integer, accurate enough for dimension
/// arithmetic (relative error ~1e-15 regardless of magnitude).
double log_big(const BigInt& v);

/// Ordinary least-squares slope of y against x. Requires >= 2 points and
/// non-constant x.
double least_squares_slope(const std::vector<double>& x,
                           const std::vector<double>& y);

}  // namespace carpets

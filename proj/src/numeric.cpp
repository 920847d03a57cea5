#include "carpets/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "carpets/errors.hpp"

namespace carpets {

Rational parse_rational(const std::string& text) {
  if (text.empty()) fail(Err::ParseError, "empty numeric literal");
  auto bad = [&]() { fail(Err::ParseError, "bad numeric literal '" + text + "'"); };

  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (num.empty() || den.empty()) bad();
    try {
      BigInt p(num);
      BigInt q(den);
      if (q == 0) bad();
      return Rational(p, q);
    } catch (const std::exception&) {
      bad();
    }
  }

  std::size_t dot = text.find('.');
  if (dot != std::string::npos) {
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    bool neg = false;
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) {
      neg = whole[0] == '-';
      whole = whole.substr(1);
    }
    if (whole.empty() && frac.empty()) bad();
    for (char c : whole)
      if (!std::isdigit(static_cast<unsigned char>(c))) bad();
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) bad();
    BigInt p = whole.empty() ? BigInt(0) : BigInt(whole);
    BigInt q = 1;
    for (char c : frac) {
      p = p * 10 + (c - '0');
      q *= 10;
    }
    Rational r(p, q);
    return neg ? -r : r;
  }

  try {
    return Rational(BigInt(text));
  } catch (const std::exception&) {
    bad();
  }
  fail(Err::ParseError, "unreachable");
}

Scalar scalar_add(const Scalar& a, const Scalar& b) {
  if (a.exact && b.exact) return Scalar(a.rat + b.rat);
  return Scalar(a.value + b.value);
}

Scalar scalar_sub(const Scalar& a, const Scalar& b) {
  if (a.exact && b.exact) return Scalar(a.rat - b.rat);
  return Scalar(a.value - b.value);
}

Scalar scalar_mul(const Scalar& a, const Scalar& b) {
  if (a.exact && b.exact) return Scalar(a.rat * b.rat);
  return Scalar(a.value * b.value);
}

bool scalar_less(const Scalar& a, const Scalar& b) {
  if (a.exact && b.exact) return a.rat < b.rat;
  return b.value - a.value > kExactTol;
}

bool scalar_equal(const Scalar& a, const Scalar& b) {
  if (a.exact && b.exact) return a.rat == b.rat;
  return std::fabs(a.value - b.value) <= kExactTol;
}

std::string format_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

BigInt ipow(BigInt base, unsigned exp) {
  BigInt result = 1;
  while (exp) {
    if (exp & 1u) result *= base;
    base *= base;
    exp >>= 1u;
  }
  return result;
}

BigInt ipow(unsigned base, unsigned exp) { return ipow(BigInt(base), exp); }

double log_big(const BigInt& v) {
  if (v <= 0) throw std::domain_error("log_big: nonpositive");
  // msb() gives floor(log2 v); peel off 2^shift so the mantissa fits a double.
  unsigned bits = boost::multiprecision::msb(v);
  if (bits <= 900) return std::log(static_cast<double>(v));
  unsigned shift = bits - 900;
  BigInt mantissa = v >> shift;
  return std::log(static_cast<double>(mantissa)) + shift * std::log(2.0);
}

double least_squares_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares_slope: need >= 2 paired points");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("least_squares_slope: constant x");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace carpets

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace lipschitz {

using Rational = mpq_class;

// Accepts integers, fractions "p/q" and finite decimals "1.25".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

template <class Real>
Real real_from(const Rational& q);
template <>
inline double real_from<double>(const Rational& q) {
  return q.get_d();
}
template <>
inline Rational real_from<Rational>(const Rational& q) {
  return q;
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace lipschitz

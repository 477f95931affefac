#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace qga {

// Exact arbitrary-precision scalars. cpp_rational keeps gcd-reduced
// numerator/denominator with denominator > 0, which is exactly the
// canonical form we need for equality tests.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int gcd_int(Int a, Int b) { return boost::multiprecision::gcd(a, b); }

} // namespace qga

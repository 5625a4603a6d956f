#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace bic {

/// Exact rational coefficients for symbolic inequality systems.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace bic

#pragma once

// Exact rational scalar for the certification paths.  GMP-backed so Eigen
// expression templates instantiate cleanly; link against gmp.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace newtoncurv {

using Rational = boost::multiprecision::mpq_rational;

inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

}  // namespace newtoncurv

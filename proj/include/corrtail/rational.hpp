#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>

namespace corrtail {

// Exact rational scalar used throughout. All algebra checks in this library
// are identities over Q; nothing is ever rounded.
using Rational = boost::multiprecision::mpq_rational;

inline std::string to_string(const Rational& q) { return q.str(); }

}  // namespace corrtail

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace rsmm {

using Rational = boost::rational<std::int64_t>;

// Always "num/den", including integers ("1/1").
std::string to_string(const Rational& r);
// Accepts "num/den" or a bare integer. Throws FormatError on a zero
// denominator or malformed text.
Rational parse_rational(std::string_view text);

inline Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational positive_part(const Rational& a) { return a < 0 ? Rational(0) : a; }

}  // namespace rsmm

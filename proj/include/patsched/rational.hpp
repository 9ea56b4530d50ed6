#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace patsched {

/// Exact rational used for patient weights and every weighted metric.
// Compare against Rational(k), never a bare integer: under C++20 the
// reversed-operator rewrite makes boost 1.74's mixed == recurse forever.
using Rational = boost::rational<std::int64_t>;

/// Integer values render without a decimal point; everything else is rounded
/// half away from zero to at most six places, trailing zeros trimmed.
std::string to_decimal(const Rational& value);

/// "3" or "3/2". Lossless; used in scenario files.
std::string to_fraction_text(const Rational& value);

/// Accepts "7", "-7" or "7/2". Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

}  // namespace patsched

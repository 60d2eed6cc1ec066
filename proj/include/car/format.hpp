#pragma once

#include <string>

#include "car/car_operator.hpp"

namespace car {

/// Scientific notation with a 12-digit mantissa and a bare exponent,
/// e.g. 0 -> "0.000000000000e0", 0.00025 -> "2.500000000000e-4".
std::string format_sci(double value);

/// Complex literal "re+imj" with round-trip-exact precision.
std::string format_complex(Complex value);

/// Parses the "re+imj" literal form.
Complex parse_complex(std::string_view text);

} // namespace car

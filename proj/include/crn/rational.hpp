#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace crn {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

// Accepts integers, fractions ("3/2") and plain decimals ("0.25", "1e-3").
// Decimals are converted exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

// Exact binary value of a finite double.
Rational from_double(double x);

std::vector<double> to_double(const RationalVector& v);
RationalVector from_double(const std::vector<double>& v);

int sign(const Rational& q);

}  // namespace crn

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "qfa/errors.hpp"

namespace qfa {

// Exact arbitrary-precision rational, always reduced with positive
// denominator (GMP keeps the canonical form).
using Rat = mpq_class;
using Int = mpz_class;

/// Canonical string: "p" when the denominator is 1, else "p/q".
inline std::string rat_str(const Rat& r) { return r.get_str(); }

/// Parses "p" or "p/q"; throws InputError on garbage or zero denominator.
Rat rat_parse(std::string_view s);

Rat rat_pow(const Rat& base, unsigned long exp);

inline double rat_double(const Rat& r) { return r.get_d(); }

}  // namespace qfa

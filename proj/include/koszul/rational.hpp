#pragma once

#include <gmpxx.h>

#include <string>

namespace koszul {

// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
// positive denominator) under arithmetic; parsing canonicalizes explicitly.
using Rat = mpq_class;

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

// Parses "p", "-p" or "p/q" with arbitrary precision; canonicalizes "2/4" -> "1/2".
Rat rat_parse(const std::string& s);

// Canonical rendering: integer values print without "/1".
std::string rat_str(const Rat& q);

} // namespace koszul

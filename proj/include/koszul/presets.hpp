#pragma once

#include "koszul/operad.hpp"

namespace koszul {

// Built-in operad presentations. N is the arity truncation bound.
OperadPresentation preset_as(int max_arity = 5);
OperadPresentation preset_com(int max_arity = 5);
OperadPresentation preset_lie(int max_arity = 5);

// Resolves "as" | "com" | "lie"; errors with unknown_preset otherwise.
OperadPresentation load_preset(const std::string& name, int max_arity = 5);

struct AlgebraPresentation; // defined in algebra.hpp

// The associative algebra A, concentrated in arity 1, as an operad: one unary
// generator per algebra generator, relations transported from the algebra's.
// Its monogene algebras are the quadratic left A-modules.
OperadPresentation algebra_as_operad(const AlgebraPresentation& a);

} // namespace koszul

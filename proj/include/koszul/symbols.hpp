#pragma once

#include <string>
#include <vector>

#include "koszul/matrix.hpp"
#include "koszul/perm.hpp"

namespace koszul {

// One generating operation space of an S-module E: a named, graded coefficient
// space of dimension `dim` with a right S_arity-action given on adjacent
// transpositions. action(sigma) returns M with (x . sigma) = M x.
struct GeneratorSymbol {
    std::string name;
    int arity = 2;
    int degree = 0;
    int dim = 1;
    std::vector<Matrix> transpositions; // arity-1 matrices, s_i = (i, i+1), 0-based i

    static GeneratorSymbol trivial(const std::string& name, int arity = 2, int degree = 0);
    static GeneratorSymbol sign(const std::string& name, int degree = 0); // arity 2
    static GeneratorSymbol regular(const std::string& name, int degree = 0); // arity 2, dim 2

    Matrix action(const Perm& sigma) const;

    // Checks the defining relations of S_arity on the given matrices.
    void validate() const;
};

using SModule = std::vector<GeneratorSymbol>;

// Suspends every generator's homological degree by one (same actions).
SModule suspend(const SModule& e);

// Contragredient generators twisted by the sign representation:
// action_dual(s_i) = -action(s_i)^{-T}. Names get a trailing '*'.
SModule sign_twisted_dual(const SModule& e);

} // namespace koszul

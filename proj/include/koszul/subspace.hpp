#pragma once

#include <optional>
#include <vector>

#include "koszul/matrix.hpp"

namespace koszul {

// A subspace of Q^ambient_dim, stored as its reduced row-echelon basis.
// Equality of subspaces is equality of representations.
class Subspace {
  public:
    Subspace() : ambient_(0) {}
    explicit Subspace(int ambient_dim) : ambient_(ambient_dim), basis_(0, ambient_dim) {}

    static Subspace span(const Matrix& generators);
    static Subspace full(int ambient_dim);

    int ambient_dim() const { return ambient_; }
    int dim() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }

    bool contains(const SparseVec& v) const;
    bool contains(const Subspace& other) const;
    bool operator==(const Subspace& other) const;

    // Reduces v modulo the subspace (v minus its projection onto the span along pivot columns).
    SparseVec reduce(const SparseVec& v) const;

    // Coordinates of v in the echelon basis; nullopt if v is not in the span.
    std::optional<SparseVec> coordinates(const SparseVec& v) const;

    Subspace sum(const Subspace& other) const;

  private:
    int ambient_;
    Matrix basis_;
    std::vector<int> pivots_;
};

Subspace subspace_intersect(const Subspace& a, const Subspace& b);

struct QuotientMap {
    int quotient_dim = 0;
    Matrix projection; // quotient_dim x ambient-coordinate-dim
    Matrix section;    // ambient-coordinate-dim x quotient_dim, projection*section = id
};

// Quotient of the coordinate space Q^n by `sub`. The quotient basis is indexed by
// the non-pivot coordinates of sub's echelon basis.
QuotientMap quotient_by(const Subspace& sub, int ambient_dim);

// General form: quotient of `ambient` (a subspace) by `sub` (must be contained in it).
// projection/section act on ambient *coordinates* (dim(ambient) many).
QuotientMap subspace_quotient(const Subspace& ambient, const Subspace& sub);

struct AnnihilatorResult {
    Subspace annihilator; // subspace of the dual coordinate space
    bool degenerate = false;
    int corank = 0; // corank of the pairing when degenerate
};

// pairing[i][j] = <f_i, e_j> for dual basis f and primal basis e.
// Returns {f : <f, s> = 0 for all s in S}.
AnnihilatorResult annihilator(const Subspace& s, const Matrix& pairing);

// Expresses v, a vector in X_1 (x) ... (x) X_r with mixed-radix flat indices
// (dims[i] = dim X_i, last factor fastest), in the echelon bases of the given
// subspaces U_i <= X_i. Errors with internal_consistency when v does not lie in
// the tensor product of the subspaces.
std::map<std::vector<int>, Rat> express_in_tensor(const SparseVec& v,
                                                  const std::vector<const Subspace*>& factors,
                                                  const std::vector<int>& dims);

} // namespace koszul

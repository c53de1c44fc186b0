#pragma once

#include <map>
#include <memory>
#include <string>

#include "koszul/subspace.hpp"
#include "koszul/tree.hpp"

namespace koszul {

// Quadratic operadic data (E, R): generators plus relations spanned by
// two-vertex trees, with truncation bounds for arity and weight.
struct OperadPresentation {
    SModule generators;
    std::map<int, std::vector<OperadElement>> relations; // arity -> weight-2 elements
    int max_arity = 5;
    int max_weight = 0; // 0: derived (binary => max_arity - 1; unary => must be set)
    std::string name = "operad";

    bool binary() const;     // every generator has arity 2
    bool unary_only() const; // every generator has arity 1
    int resolved_max_weight() const;
    void validate() const; // weight-2 homogeneity, arity bounds, representation checks
};

// The quadratic quotient P = F(E)/(R) with all components of arity <= max_arity
// and weight <= max_weight materialized: ideal subspaces, quotient maps,
// composition and symmetric-action matrices on the quotient bases.
class TruncatedOperad {
  public:
    explicit TruncatedOperad(OperadPresentation pres);

    const OperadPresentation& presentation() const { return pres_; }
    const SModule& gens() const { return pres_.generators; }
    int max_arity() const { return pres_.max_arity; }
    int max_weight() const { return pres_.resolved_max_weight(); }

    std::vector<int> weights(int arity) const; // weights with nonzero component
    int dim(int arity, int weight) const;
    int total_dim(int arity) const;

    const FreeBasis& free_basis(int arity, int weight) const;
    const Subspace& ideal(int arity, int weight) const;

    // quotient coordinates
    SparseVec reduce(int arity, int weight, const OperadElement& x) const;
    SparseVec reduce_free_vec(int arity, int weight, const SparseVec& free_coords) const;
    OperadElement representative(int arity, int weight, const SparseVec& coords) const;
    OperadElement representative(int arity, int weight, int idx) const;
    std::string basis_label(int arity, int weight, int idx) const;

    // matrix of o_i : P(n1,w1) (x) P(n2,w2) -> P(n1+n2-1, w1+w2);
    // column index = idx1 * dim(n2,w2) + idx2
    const Matrix& compose_matrix(int n1, int w1, int i, int n2, int w2) const;
    SparseVec compose(int n1, int w1, const SparseVec& a, int i, int n2, int w2,
                      const SparseVec& b) const;

    const Matrix& adjacent_action(int arity, int weight, int i) const; // s_i = (i, i+1), 0-based
    SparseVec act(int arity, int weight, const Perm& sigma, const SparseVec& v) const;

    void check_truncation(int arity, int weight) const;

  private:
    struct Component {
        FreeBasis free;
        Subspace ideal;
        QuotientMap quot;
    };
    const Component& comp(int arity, int weight) const;

    OperadPresentation pres_;
    std::map<std::pair<int, int>, Component> comps_;
    mutable std::map<std::tuple<int, int, int, int, int>, Matrix> compose_memo_;
    mutable std::map<std::tuple<int, int, int>, Matrix> action_memo_;
};

// Koszul dual presentation P^! = F(E^v)/(R^perp) for binary (or purely unary)
// finitely generated presentations.
OperadPresentation koszul_dual_operad(const OperadPresentation& pres);

// Pairing matrix between F(E^v)^{(2)}(n) and F(E)^{(2)}(n) used for R^perp:
// rows indexed by the dual free basis, columns by the primal one.
Matrix quadratic_pairing(const SModule& dual_gens, const SModule& gens, int arity);

} // namespace koszul

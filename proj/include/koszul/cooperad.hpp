#pragma once

#include "koszul/chain.hpp"
#include "koszul/operad.hpp"

namespace koszul {

// Test-only fault injection into the twisted differentials, used by the mutation
// tests; all flags default to off.
struct TwistFaults {
    bool mc_flip_shape_sign = false;  // negate kappa.kappa terms on one shuffle shape
    bool complex_flip_block2 = false; // negate d_kappa terms acting on the second factor
    bool drop_phi_twist = false;      // omit the phi legs of the coequalizer twist
    bool flip_bar_sign = false;       // drop the split sign in the bar differential
};

// The Koszul dual cooperad C(sE, s^2 R), realized concretely as subspaces of the
// free operad on the suspended generators: weight 1 is all of sE, weight 2 the
// suspended relation space, and higher weights the intersection of the split
// conditions (every infinitesimal decomposition lands in lower components).
class TruncatedCooperad {
  public:
    explicit TruncatedCooperad(std::shared_ptr<const TruncatedOperad> p);

    const TruncatedOperad& operad() const { return *p_; }
    const SModule& sgens() const { return se_; }
    int max_arity() const { return p_->max_arity(); }
    int max_weight() const { return p_->max_weight(); }

    std::vector<int> weights(int arity) const;
    int dim(int arity, int weight) const;
    int total_dim(int arity) const;

    const FreeBasis& free_basis(int arity, int weight) const;
    const Subspace& component(int arity, int weight) const;
    // projection onto a complement of the component inside the free space
    const Matrix& complement_projection(int arity, int weight) const;

    SparseVec to_coords(int arity, int weight, const SparseVec& free_vec) const;
    SparseVec rep_free(int arity, int weight, const SparseVec& coords) const;
    OperadElement rep(int arity, int weight, int idx) const;
    std::string basis_label(int arity, int weight, int idx) const;

    // kappa transport C(n, 1) -> P(n)^{(1)} (desuspend a single corolla)
    const Matrix& kappa_matrix(int arity) const;

    const Matrix& adjacent_action(int arity, int weight, int i) const;
    SparseVec act(int arity, int weight, const Perm& sigma, const SparseVec& v) const;

  private:
    struct Component {
        FreeBasis free;
        Subspace space;
        Matrix complement_proj;
    };
    const Component& comp(int arity, int weight) const;

    std::shared_ptr<const TruncatedOperad> p_;
    SModule se_;
    std::map<std::pair<int, int>, Component> comps_;
    mutable std::map<int, Matrix> kappa_memo_;
    mutable std::map<std::tuple<int, int, int>, Matrix> action_memo_;
};

struct McReport {
    bool ok = true;
    std::string detail; // offending basis element when not ok
};

// Maurer-Cartan check for kappa: evaluates kappa * kappa on every basis element
// of every component (the boundary term vanishes because all differentials are
// zero) and requires exact zero in the quotient operad.
McReport mc_check_kappa(const TruncatedOperad& p, const TruncatedCooperad& c,
                        const TwistFaults& faults = {});

enum class KoszulSide { left, right }; // P o_k C  vs  C o_k P

// Builds the arity-n component of the twisted composite product with the
// kappa-twisted differential, graded by total cooperad weight. `labels`, when
// given, receives a printable description of each basis element per degree.
ChainComplexData operadic_koszul_complex(const TruncatedOperad& p, const TruncatedCooperad& c,
                                         KoszulSide side, int arity,
                                         const TwistFaults& faults = {},
                                         std::map<int, std::vector<std::string>>* labels = nullptr);

// Homology of the above; checks d*d = 0.
HomologyReport operadic_koszul_homology(const TruncatedOperad& p, const TruncatedCooperad& c,
                                        KoszulSide side, int arity,
                                        const TwistFaults& faults = {});

struct OperadKoszulVerdict {
    bool koszul = true;
    int checked_up_to = 0;
    std::map<int, HomologyReport> left;
    std::map<int, HomologyReport> right;
    int first_failing_arity = 0;
};

OperadKoszulVerdict operadic_koszul_verdict(const TruncatedOperad& p,
                                            const TruncatedCooperad& c, int up_to_arity);

} // namespace koszul

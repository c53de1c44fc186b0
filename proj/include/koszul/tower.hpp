#pragma once

#include "koszul/applied.hpp"
#include "koszul/cooperad.hpp"

namespace koszul {

// Components of the cofree dual cooperad applied to a graded entry table,
// realized inside labeled free components and cut out by the split conditions:
//   - the numbered root cluster of every split lies in the abstract dual
//     cooperad component (stabilizer-symmetrized collective condition);
//   - every full-subtree piece lies in the lower component, sliced per
//     one-hole upper class;
//   - weight two is the suspended relation span.
// An optional override replaces the weight-one component (the monogene case,
// where weight one is the suspended algebra relation space).
class AppliedTower {
  public:
    AppliedTower(SModule se, LTable entries, const OperadPresentation& pres,
                 std::shared_ptr<const TruncatedCooperad> cabs, int max_tree_weight,
                 int max_entry_weight, int max_total_weight = -1,
                 const std::map<int, Subspace>* weight1_override = nullptr);

    const SModule& sgens() const { return se_; }
    const LTable& entries() const { return entries_; }
    int max_tree_weight() const { return max_tw_; }
    int max_entry_weight() const { return max_ew_; }

    bool has(int tw, int ew) const;
    const LBasis& free_basis(int tw, int ew) const;
    const Subspace& component(int tw, int ew) const;
    const Matrix& complement_projection(int tw, int ew) const;
    int dim(int tw, int ew) const;

    SparseVec to_coords(int tw, int ew, const SparseVec& free_vec) const;
    SparseVec rep_free(int tw, int ew, const SparseVec& coords) const;
    LElement rep1(int tw, int ew, int idx) const;

  private:
    struct Component {
        LBasis free;
        Subspace space;
        Matrix complement_proj;
    };
    const Component& comp(int tw, int ew) const;

    SModule se_;
    LTable entries_;      // extended with two hole entries (even, odd) at the end
    int n_real_entries_ = 0;
    int max_tw_ = 0, max_ew_ = 0, max_total_ = -1;
    std::shared_ptr<const TruncatedCooperad> cabs_;
    std::map<std::pair<int, int>, Component> comps_;
};

// Graded components of the free operadic algebra on an entry table modulo the
// operadic relations (windows with arbitrary subtree fillings) and optional
// extra weight-one windows (algebra relations).
class AppliedQuotient {
  public:
    AppliedQuotient(SModule e, LTable entries, const OperadPresentation& pres, int max_tree_weight,
                    int max_entry_weight, int max_total_weight = -1,
                    const std::vector<LElement>* extra_weight1_windows = nullptr);

    const SModule& gens() const { return e_; }
    const LTable& entries() const { return entries_; }

    bool has(int tw, int ew) const;
    const LBasis& free_basis(int tw, int ew) const;
    const Subspace& ideal(int tw, int ew) const;
    int dim(int tw, int ew) const;
    SparseVec reduce(int tw, int ew, const SparseVec& free_vec) const;
    SparseVec reduce_elem(int tw, int ew, const LElement& x) const;
    LElement rep(int tw, int ew, const SparseVec& coords) const;
    LElement rep1(int tw, int ew, int idx) const;

  private:
    struct Component {
        LBasis free;
        Subspace ideal;
        QuotientMap quot;
    };
    const Component& comp(int tw, int ew) const;

    SModule e_;
    LTable entries_;
    int max_tw_ = 0, max_ew_ = 0, max_total_ = -1;
    std::map<std::pair<int, int>, Component> comps_;
};

} // namespace koszul

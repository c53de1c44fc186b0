#pragma once

#include <memory>

#include "koszul/applied.hpp"
#include "koszul/cooperad.hpp"
#include "koszul/tower.hpp"

namespace koszul {

// Monogene data (V, S): generators with degrees plus relations inside E(V),
// given as combinations of single operations applied to generators.
struct AlgebraPresentation {
    OperadPresentation operad;
    std::vector<std::string> gen_names;
    std::vector<int> gen_degrees; // empty = all zero
    struct RelTerm {
        Rat coef;
        int gen = 0;   // operad generator index
        int basis = 0; // basis vector within the generator space
        std::vector<int> args; // V indices, one per generator input
    };
    std::vector<std::vector<RelTerm>> relations;
    int max_weight = 4;
    std::string name = "algebra";

    void validate() const;
};

// The monogene algebra A = P(V)/(S), realized degreewise in labeled-tree
// coordinates: weight w is the labeled free component modulo the operadic
// relations (one window per bottom cluster) and the ideal generated by S.
class MonogeneAlgebra {
  public:
    explicit MonogeneAlgebra(AlgebraPresentation pres);

    const AlgebraPresentation& pres() const { return pres_; }
    const SModule& egens() const { return pres_.operad.generators; }
    int max_weight() const { return pres_.max_weight; }
    int dim_v() const { return static_cast<int>(pres_.gen_names.size()); }

    int dim(int w) const;
    std::vector<int> dims() const;

    const LTable& ventries() const { return ventries_; }
    const LBasis& free_basis(int w) const;
    const Subspace& ideal(int w) const;
    SparseVec reduce(int w, const SparseVec& free_vec) const;
    SparseVec reduce_elem(int w, const LElement& x) const;
    LElement rep(int w, const SparseVec& coords) const;
    LElement rep1(int w, int idx) const;
    std::string basis_label(int w, int idx) const;

    // relation subspace S inside the weight-1 free component
    const Subspace& relation_space() const { return relspace_; }

    // gamma_A of a single generating operation applied to algebra classes
    SparseVec apply_corolla(int gen, int basis,
                            const std::vector<std::pair<int, SparseVec>>& args) const;

    // A-basis entry table: entry per (weight, index) with degree from representatives
    const LTable& aentries() const { return aentries_; }
    int aentry_id(int w, int idx) const;
    std::pair<int, int> aentry_info(int id) const { return ainfo_[id]; }

    void check_weight(int w) const;

  private:
    struct Component {
        LBasis free;
        Subspace ideal;
        QuotientMap quot;
    };
    const Component& comp(int w) const;

    AlgebraPresentation pres_;
    LTable ventries_;
    std::vector<Component> comps_; // by weight 0..W
    Subspace relspace_;
    LTable aentries_;
    std::vector<std::pair<int, int>> ainfo_;
    std::map<std::pair<int, int>, int> aid_;
};

// The Koszul dual coalgebra, realized as subspaces of the labeled free
// components over the suspended generators: weight 0 is V, weight 1 is the
// suspended relation space, and higher weights are cut out by the cluster
// conditions (clusters in the abstract dual cooperad, pieces in lower parts).
class KoszulDualCoalgebra {
  public:
    KoszulDualCoalgebra(std::shared_ptr<const MonogeneAlgebra> a,
                        std::shared_ptr<const TruncatedOperad> abstract_operad,
                        std::shared_ptr<const TruncatedCooperad> abstract_cooperad);

    const MonogeneAlgebra& algebra() const { return *a_; }
    const TruncatedCooperad& abstract_cooperad() const { return *cabs_; }
    const SModule& sgens() const { return se_; }

    int dim(int w) const;
    std::vector<int> dims() const;
    const LBasis& free_basis(int w) const;
    const Subspace& component(int w) const;
    const Matrix& complement_projection(int w) const;
    SparseVec to_coords(int w, const SparseVec& free_vec) const;
    SparseVec rep_free(int w, const SparseVec& coords) const;
    LElement rep1(int w, int idx) const;
    std::string basis_label(int w, int idx) const;

    // coalgebra entry table: entry (w, idx), degree w + generator degrees
    const LTable& centries() const { return centries_; }
    int centry_id(int w, int idx) const;
    std::pair<int, int> centry_info(int id) const { return cinfo_[id]; }

  private:
    std::shared_ptr<const MonogeneAlgebra> a_;
    std::shared_ptr<const TruncatedOperad> pabs_;
    std::shared_ptr<const TruncatedCooperad> cabs_;
    SModule se_;
    std::unique_ptr<AppliedTower> tower_;
    LTable centries_;
    std::vector<std::pair<int, int>> cinfo_;
    std::map<std::pair<int, int>, int> cid_;
};

// Invariant realization of (C_abs(n) (x) entry-tensors)^{S_n} via the averaging
// projector, used for the coalgebra decomposition maps.
class InvariantSpace {
  public:
    InvariantSpace() = default;
    // keys: sorted entry tuples of size n for a fixed abstract component (n, w)
    InvariantSpace(const TruncatedCooperad& cabs, int arity, int cweight, const LTable& entries,
                   std::vector<std::vector<int>> tuples);

    int dim() const { return total_; }
    int n_components() const { return static_cast<int>(keys_.size()); }
    const std::vector<int>& tuple(int comp) const { return keys_[comp]; }
    const Subspace& image(int comp) const { return images_[comp]; }
    int offset(int comp) const { return offsets_[comp]; }

    // class of (outer vector (x) assignment of entries to slots 1..n)
    SparseVec normalize(const SparseVec& outer, const std::vector<int>& slot_entries) const;
    std::string label(int idx) const;

  private:
    const TruncatedCooperad* cabs_ = nullptr;
    int arity_ = 0, cweight_ = 0;
    const LTable* entries_ = nullptr;
    std::vector<std::vector<int>> keys_;
    std::vector<Subspace> images_;
    std::vector<Matrix> projectors_;
    std::vector<int> offsets_;
    int total_ = 0;
};

// Matrix of Delta_C(n) from the weight-w component of A-upside-down into the
// invariant realization of (P-dual(n) (x) C^{(x)n})^{S_n}.
struct CoproductComponent {
    InvariantSpace target;
    Matrix matrix; // target.dim() x dim Amc(w)
};
CoproductComponent coproduct_component(const KoszulDualCoalgebra& c, int arity, int w);

// Maurer-Cartan check for the canonical algebraic twisting morphism: evaluates
// the convolution square on every basis element of the dual coalgebra.
McReport mc_check_varkappa(const MonogeneAlgebra& a, const KoszulDualCoalgebra& c,
                           const TwistFaults& faults = {});

// Dual presentation over the dual operad: generators V*, relations the
// annihilator of S under the evaluation pairing of the weight-one components.
AlgebraPresentation koszul_dual_algebra_presentation(const MonogeneAlgebra& a);

// Bundles an algebra with the abstract (co)operad pair it was built against.
struct AlgebraContext {
    std::shared_ptr<MonogeneAlgebra> algebra;
    std::shared_ptr<TruncatedOperad> op;
    std::shared_ptr<TruncatedCooperad> coop;
    std::shared_ptr<KoszulDualCoalgebra> dual_coalgebra;
};

// Builds the algebra, the abstract dual cooperad at the arity bound the
// truncation requires, and the Koszul dual coalgebra.
AlgebraContext build_algebra_context(AlgebraPresentation pres);

} // namespace koszul

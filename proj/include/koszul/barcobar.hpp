#pragma once

#include "koszul/algebra.hpp"
#include "koszul/tower.hpp"

namespace koszul {

// Bar construction of a monogene algebra: per internal weight w, the cochain
// complex of (weight-degree omega) strata of the cofree dual cooperad applied to
// the algebra, with the twisted differential contracting one bottom operation
// through the algebra product. Internally graded as a chain complex by the tree
// weight w - omega.
class BarComplex {
  public:
    BarComplex(std::shared_ptr<const MonogeneAlgebra> a,
               std::shared_ptr<const KoszulDualCoalgebra> c, const TwistFaults& faults = {});

    const MonogeneAlgebra& algebra() const { return *a_; }
    const KoszulDualCoalgebra& dual() const { return *c_; }
    const AppliedTower& tower() const { return *tower_; }

    int max_weight() const { return a_->max_weight(); }
    // stratum (internal weight w, weight-degree omega): dimension
    int dim(int w, int omega) const;
    // differential raising omega by one inside internal weight w
    const Matrix& differential(int w, int omega) const;

    // chain complex of internal weight w, graded by tree weight w - omega
    ChainComplexData weight_complex(int w) const;

    // labels of the stratum basis
    std::vector<std::string> labels(int w, int omega) const;

  private:
    std::shared_ptr<const MonogeneAlgebra> a_;
    std::shared_ptr<const KoszulDualCoalgebra> c_;
    std::unique_ptr<AppliedTower> tower_;
    std::map<std::pair<int, int>, Matrix> diff_; // (w, omega) -> d
};

struct H0Report {
    bool ok = true;
    std::vector<int> h0_dims;       // per internal weight
    std::vector<int> coalgebra_dims;
    std::string counterexample;     // offending basis vector when subspaces differ
};

// ker(d | weight-degree 0) must equal the embedded dual coalgebra, as subspaces.
H0Report bar_h0_check(const BarComplex& bar);

struct BarHomologyReport {
    std::map<int, HomologyReport> by_weight; // keyed by internal weight; degrees = omega
    bool koszul = true;                      // concentrated in weight-degree 0, dims = dual
    int first_failure_weight = 0;
};

BarHomologyReport bar_homology(const BarComplex& bar);

// Cobar construction on the dual coalgebra: the free algebra on the coalgebra
// entries modulo the operadic relations, with the differential expanding one
// coalgebra entry through its root decomposition.
class CobarComplex {
  public:
    CobarComplex(std::shared_ptr<const MonogeneAlgebra> a,
                 std::shared_ptr<const KoszulDualCoalgebra> c, const TwistFaults& faults = {});

    const MonogeneAlgebra& algebra() const { return *a_; }
    int max_weight() const { return a_->max_weight(); }

    int dim(int w, int degree) const;
    const Matrix& differential(int w, int degree) const; // lowers the degree by one
    ChainComplexData weight_complex(int w) const;

    // the projection onto the algebra in degree zero
    const Matrix& projection_to_algebra(int w) const;

  private:
    std::shared_ptr<const MonogeneAlgebra> a_;
    std::shared_ptr<const KoszulDualCoalgebra> c_;
    std::unique_ptr<AppliedQuotient> quotient_;
    std::map<std::pair<int, int>, Matrix> diff_;
    std::map<int, Matrix> proj_;
};

struct CobarReport {
    bool quasi_iso = true; // f: cobar -> A a quasi-isomorphism in weights <= W
    std::map<int, HomologyReport> by_weight;
    int first_failure_weight = 0;
};

CobarReport build_cobar_and_check(const CobarComplex& cobar);

} // namespace koszul

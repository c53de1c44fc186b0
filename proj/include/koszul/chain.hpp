#pragma once

#include <map>

#include "koszul/subspace.hpp"

namespace koszul {

// A bounded chain complex ... -> X_{d} -> X_{d-1} -> ... with differential
// lowering the degree by one. Degrees run over the keys of `dims`.
struct ChainComplexData {
    std::map<int, int> dims;         // degree -> dimension (absent = 0)
    std::map<int, Matrix> diff;      // diff[d] : X_d -> X_{d-1}, shape dims[d-1] x dims[d]

    int dim(int d) const {
        auto it = dims.find(d);
        return it == dims.end() ? 0 : it->second;
    }
    const Matrix* differential(int d) const {
        auto it = diff.find(d);
        return it == diff.end() ? nullptr : &it->second;
    }

    // Shape checks and d*d = 0; names the failing degree on error.
    void validate() const;
};

struct HomologyReport {
    std::map<int, int> betti;                 // only degrees with spaces present
    std::map<int, Subspace> representatives;  // cycle subspaces, on request

    int total() const {
        int t = 0;
        for (auto& [d, b] : betti) t += b;
        return t;
    }
    bool concentrated_in(int degree) const {
        for (auto& [d, b] : betti)
            if (d != degree && b != 0) return false;
        return true;
    }
    long euler_characteristic() const {
        long e = 0;
        for (auto& [d, b] : betti) e += (d % 2 == 0 ? b : -b);
        return e;
    }
};

HomologyReport homology(const ChainComplexData& c, bool with_representatives = false);

// Mapping cone of a chain map f : X -> Y (f[d] : X_d -> Y_d). The cone is exact
// iff f is a quasi-isomorphism.
ChainComplexData mapping_cone(const ChainComplexData& x, const ChainComplexData& y,
                              const std::map<int, Matrix>& f);

bool is_quasi_isomorphism(const ChainComplexData& x, const ChainComplexData& y,
                          const std::map<int, Matrix>& f);

} // namespace koszul

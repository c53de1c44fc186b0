#include "koszul/chain.hpp"

#include <string>

namespace koszul {

void ChainComplexData::validate() const {
    for (const auto& [d, m] : diff) {
        if (m.cols() != dim(d) || m.rows() != dim(d - 1))
            fail(ErrorCode::structural,
                 "differential shape mismatch at degree " + std::to_string(d));
        const Matrix* next = differential(d + 1);
        if (next && !(m * *next).zero())
            fail(ErrorCode::structural,
                 "d*d != 0 between degrees " + std::to_string(d + 1) + " and " +
                     std::to_string(d - 1));
    }
    // differentials out of nonzero spaces may be absent only when the target is below
    for (const auto& [d, n] : dims) {
        if (n == 0) continue;
        if (dim(d - 1) != 0 && !differential(d))
            fail(ErrorCode::structural, "missing differential at degree " + std::to_string(d));
    }
}

HomologyReport homology(const ChainComplexData& c, bool with_representatives) {
    c.validate();
    HomologyReport rep;
    for (const auto& [d, n] : c.dims) {
        const Matrix* dn = c.differential(d);
        const Matrix* dnext = c.differential(d + 1);
        int rank_d = 0;
        Subspace cycles;
        if (dn) {
            RankKernelImage rki = rank_kernel_image(*dn);
            rank_d = rki.rank;
            if (with_representatives) cycles = Subspace::span(rki.kernel);
        } else if (with_representatives) {
            cycles = Subspace::full(n);
        }
        int rank_next = dnext ? rank_of(*dnext) : 0;
        int betti = n - rank_d - rank_next;
        rep.betti[d] = betti;
        if (with_representatives) rep.representatives[d] = cycles;
    }
    return rep;
}

ChainComplexData mapping_cone(const ChainComplexData& x, const ChainComplexData& y,
                              const std::map<int, Matrix>& f) {
    // cone(f)_d = X_{d-1} (+) Y_d, d(a, b) = (-d_X a, d_Y b - f(a)). Sign conventions
    // only need d*d = 0, which validate() checks.
    ChainComplexData cone;
    int lo = 1 << 30, hi = -(1 << 30);
    for (auto& [d, n] : x.dims) { lo = std::min(lo, d); hi = std::max(hi, d + 1); }
    for (auto& [d, n] : y.dims) { lo = std::min(lo, d); hi = std::max(hi, d); }
    if (lo > hi) return cone;
    for (int d = lo; d <= hi; ++d) cone.dims[d] = x.dim(d - 1) + y.dim(d);
    for (int d = lo; d <= hi; ++d) {
        int xr = x.dim(d - 2), yr = y.dim(d - 1);
        int xc = x.dim(d - 1), yc = y.dim(d);
        if (xr + yr == 0 || xc + yc == 0) continue;
        Matrix m(xr + yr, xc + yc);
        if (const Matrix* dx = x.differential(d - 1))
            for (int r = 0; r < dx->rows(); ++r)
                for (const auto& [cc, v] : dx->row(r)) m.add(r, cc, -v);
        if (const Matrix* dy = y.differential(d))
            for (int r = 0; r < dy->rows(); ++r)
                for (const auto& [cc, v] : dy->row(r)) m.add(xr + r, xc + cc, v);
        auto it = f.find(d - 1);
        if (it != f.end())
            for (int r = 0; r < it->second.rows(); ++r)
                for (const auto& [cc, v] : it->second.row(r)) m.add(xr + r, cc, -v);
        cone.diff[d] = std::move(m);
    }
    return cone;
}

bool is_quasi_isomorphism(const ChainComplexData& x, const ChainComplexData& y,
                          const std::map<int, Matrix>& f) {
    HomologyReport h = homology(mapping_cone(x, y, f));
    return h.total() == 0;
}

} // namespace koszul

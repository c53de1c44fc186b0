#include "koszul/subspace.hpp"

namespace koszul {

Subspace Subspace::span(const Matrix& generators) {
    Subspace s(generators.cols());
    RrefResult r = rref(generators);
    s.basis_ = std::move(r.mat);
    s.pivots_ = std::move(r.pivots);
    return s;
}

Subspace Subspace::full(int ambient_dim) { return span(Matrix::identity(ambient_dim)); }

SparseVec Subspace::reduce(const SparseVec& v) const {
    SparseVec w = v;
    for (int i = 0; i < basis_.rows(); ++i) {
        auto it = w.find(pivots_[i]);
        if (it != w.end()) {
            Rat f = -it->second;
            vec_axpy(w, f, basis_.row(i));
        }
    }
    return w;
}

bool Subspace::contains(const SparseVec& v) const { return reduce(v).empty(); }

bool Subspace::contains(const Subspace& other) const {
    if (ambient_ != other.ambient_) fail(ErrorCode::dimension_mismatch, "ambient mismatch");
    for (int i = 0; i < other.basis_.rows(); ++i)
        if (!contains(other.basis_.row(i))) return false;
    return true;
}

bool Subspace::operator==(const Subspace& other) const {
    return ambient_ == other.ambient_ && basis_ == other.basis_;
}

std::optional<SparseVec> Subspace::coordinates(const SparseVec& v) const {
    // Echelon basis with unit pivots: candidate coordinates are the pivot entries.
    SparseVec coords;
    SparseVec w = v;
    for (int i = 0; i < basis_.rows(); ++i) {
        auto it = w.find(pivots_[i]);
        if (it != w.end()) {
            coords[i] = it->second;
            Rat f = -it->second;
            vec_axpy(w, f, basis_.row(i));
        }
    }
    if (!w.empty()) return std::nullopt;
    return coords;
}

Subspace Subspace::sum(const Subspace& other) const {
    if (ambient_ != other.ambient_) fail(ErrorCode::dimension_mismatch, "ambient mismatch");
    return span(basis_.vstack(other.basis_));
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim())
        fail(ErrorCode::dimension_mismatch, "subspace_intersect: ambient mismatch");
    // x in both spans: x = A^T u = B^T v. Solve [A^T | -B^T] (u,v) = 0, map u back through A.
    int n = a.ambient_dim();
    int da = a.dim(), db = b.dim();
    Matrix joint(n, da + db);
    for (int i = 0; i < da; ++i)
        for (const auto& [c, val] : a.basis().row(i)) joint.add(c, i, val);
    for (int i = 0; i < db; ++i)
        for (const auto& [c, val] : b.basis().row(i)) joint.add(c, da + i, -val);
    RankKernelImage rki = rank_kernel_image(joint);
    Matrix gens(rki.kernel.rows(), n);
    for (int r = 0; r < rki.kernel.rows(); ++r) {
        SparseVec x;
        for (const auto& [c, val] : rki.kernel.row(r))
            if (c < da) vec_axpy(x, val, a.basis().row(c));
        gens.row(r) = std::move(x);
    }
    return Subspace::span(gens);
}

QuotientMap quotient_by(const Subspace& sub, int ambient_dim) {
    if (sub.ambient_dim() != ambient_dim)
        fail(ErrorCode::dimension_mismatch, "quotient: ambient mismatch");
    std::vector<bool> is_pivot(ambient_dim, false);
    for (int p : sub.pivots()) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < ambient_dim; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    QuotientMap q;
    q.quotient_dim = static_cast<int>(free_cols.size());
    q.projection = Matrix(q.quotient_dim, ambient_dim);
    q.section = Matrix(ambient_dim, q.quotient_dim);
    for (int i = 0; i < q.quotient_dim; ++i) {
        int f = free_cols[i];
        // projection row i: e_f reduced contribution; reduce(v) then read coordinate f.
        // reduce(v)[f] = v[f] - sum_j v[p_j]*basis[j][f]
        q.projection.set(i, f, 1);
        for (int j = 0; j < sub.dim(); ++j) {
            Rat v = sub.basis().get(j, f);
            if (!is_zero(v)) q.projection.set(i, sub.pivots()[j], -v);
        }
        q.section.set(f, i, 1);
    }
    return q;
}

QuotientMap subspace_quotient(const Subspace& ambient, const Subspace& sub) {
    if (!ambient.contains(sub))
        fail(ErrorCode::containment, "subspace_quotient: sub not contained in ambient");
    // Express sub in ambient coordinates, then quotient the coordinate space.
    Matrix sub_in_coords(sub.dim(), ambient.dim());
    for (int i = 0; i < sub.dim(); ++i) {
        auto c = ambient.coordinates(sub.basis().row(i));
        sub_in_coords.row(i) = std::move(*c);
    }
    return quotient_by(Subspace::span(sub_in_coords), ambient.dim());
}

AnnihilatorResult annihilator(const Subspace& s, const Matrix& pairing) {
    // pairing: dual_dim x ambient. Condition matrix M[k][i] = sum_j pairing[i][j]*S[k][j].
    if (pairing.cols() != s.ambient_dim())
        fail(ErrorCode::dimension_mismatch, "annihilator: pairing shape mismatch");
    AnnihilatorResult out;
    int full_rank = std::min(pairing.rows(), pairing.cols());
    int prank = rank_of(pairing);
    if (prank < full_rank) {
        out.degenerate = true;
        out.corank = full_rank - prank;
    }
    Matrix m = s.basis() * pairing.transpose();
    out.annihilator = Subspace::span(rank_kernel_image(m).kernel);
    return out;
}

namespace {

void express_rec(const SparseVec& v, const std::vector<const Subspace*>& factors,
                 const std::vector<int>& strides, size_t level, std::vector<int>& prefix,
                 std::map<std::vector<int>, Rat>& out) {
    const Subspace& u = *factors[level];
    if (level + 1 == factors.size()) {
        auto coords = u.coordinates(v);
        if (!coords)
            fail(ErrorCode::internal_consistency,
                 "vector does not lie in the expected tensor of subspaces");
        for (const auto& [i, c] : *coords) {
            prefix.push_back(i);
            out[prefix] = c;
            prefix.pop_back();
        }
        return;
    }
    int stride = strides[level];
    // slices along the pivot rows give the coordinates in this factor
    std::map<int, SparseVec> slices;
    for (int r = 0; r < u.dim(); ++r) {
        int p = u.pivots()[r];
        for (const auto& [flat, c] : v) {
            if (flat / stride == p) slices[r][flat % stride] = c;
        }
    }
    // verify the reconstruction to certify membership in U (x) rest
    SparseVec rebuilt;
    for (const auto& [r, slice] : slices)
        for (const auto& [col, bc] : u.basis().row(r))
            for (const auto& [rest, c] : slice) {
                Rat val = bc * c;
                if (is_zero(val)) continue;
                auto key = col * stride + rest;
                auto it = rebuilt.find(key);
                if (it == rebuilt.end()) rebuilt.emplace(key, val);
                else {
                    it->second += val;
                    if (is_zero(it->second)) rebuilt.erase(it);
                }
            }
    if (!(rebuilt == v))
        fail(ErrorCode::internal_consistency,
             "vector does not lie in the expected tensor of subspaces");
    for (auto& [r, slice] : slices) {
        prefix.push_back(r);
        express_rec(slice, factors, strides, level + 1, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

std::map<std::vector<int>, Rat> express_in_tensor(const SparseVec& v,
                                                  const std::vector<const Subspace*>& factors,
                                                  const std::vector<int>& dims) {
    std::map<std::vector<int>, Rat> out;
    if (v.empty()) return out;
    std::vector<int> strides(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
        strides[i] = strides[i + 1] * dims[i + 1];
    std::vector<int> prefix;
    express_rec(v, factors, strides, 0, prefix, out);
    return out;
}

} // namespace koszul

#include "koszul/barcobar.hpp"

#include <functional>
#include <sstream>

namespace koszul {

BarComplex::BarComplex(std::shared_ptr<const MonogeneAlgebra> a,
                       std::shared_ptr<const KoszulDualCoalgebra> c, const TwistFaults& faults)
    : a_(std::move(a)), c_(std::move(c)) {
    int w_max = a_->max_weight();
    const SModule& se = c_->sgens();
    // plain cooperad tower over the algebra entry table (weight-0 entries first,
    // matching the generator table so the dual coalgebra embeds coordinatewise)
    tower_ = std::make_unique<AppliedTower>(
        se, a_->aentries(), a_->pres().operad,
        std::shared_ptr<const TruncatedCooperad>(c_, &c_->abstract_cooperad()), w_max, w_max,
        w_max, nullptr);

    const LTable& at = tower_->entries();
    for (int w = 1; w <= w_max; ++w) {
        for (int omega = 0; omega < w; ++omega) {
            int tw = w - omega;
            if (tower_->dim(tw, omega) == 0) continue;
            int target_dim = tower_->dim(tw - 1, omega + 1);
            Matrix d(target_dim, tower_->dim(tw, omega));
            for (int col = 0; col < tower_->dim(tw, omega); ++col) {
                LElement x = tower_->rep1(tw, omega, col);
                SparseVec image; // in the free coordinates of (tw-1, omega+1)
                for (const auto& [t, coef] : x.terms()) {
                    if (t.weight() == 1) {
                        // contract the root corolla through the algebra product
                        const LNode& v = t.root();
                        std::vector<std::pair<int, SparseVec>> args;
                        for (const auto& ch : v.children) {
                            auto [aw, ai] = a_->aentry_info(ch.entry);
                            SparseVec unit;
                            unit[ai] = 1;
                            args.emplace_back(aw, unit);
                        }
                        SparseVec prod = a_->apply_corolla(v.gen, v.basis, args);
                        int res_w = 1 + t.entry_weight();
                        for (const auto& [ai, av] : prod) {
                            LTree leaf(se, at, LNode::leaf(a_->aentry_id(res_w, ai)));
                            int fi = tower_->free_basis(0, omega + 1).find(leaf);
                            auto it = image.find(fi);
                            Rat val = coef * av;
                            if (it == image.end()) image.emplace(fi, val);
                            else {
                                it->second += val;
                                if (is_zero(it->second)) image.erase(it);
                            }
                        }
                        continue;
                    }
                    for (const auto& ss : lsubtree_splits(se, at, t)) {
                        LTree piece(se, at, ss.piece);
                        if (piece.weight() != 1) continue;
                        // contract the bottom operation through the algebra product
                        const LNode& v = ss.piece;
                        std::vector<std::pair<int, SparseVec>> args;
                        for (const auto& ch : v.children) {
                            auto [aw, ai] = a_->aentry_info(ch.entry);
                            SparseVec unit;
                            unit[ai] = 1;
                            args.emplace_back(aw, unit);
                        }
                        SparseVec prod = a_->apply_corolla(v.gen, v.basis, args);
                        int res_w = 1 + piece.entry_weight();
                        int sign = ss.sign;
                        if (faults.flip_bar_sign) sign = 1;
                        for (const auto& [ai, av] : prod) {
                            LNode upper = ss.upper;
                            int new_entry = a_->aentry_id(res_w, ai);
                            std::function<void(LNode&)> fill = [&](LNode& n) {
                                if (n.is_leaf()) {
                                    if (n.entry < -1) n.entry = new_entry;
                                    return;
                                }
                                for (auto& ch : n.children) fill(ch);
                            };
                            fill(upper);
                            LElement out = lcanonicalize(se, at, upper, coef * av * sign);
                            for (const auto& [ot, oc] : out.terms()) {
                                int fi = tower_->free_basis(tw - 1, omega + 1).find(ot);
                                auto it = image.find(fi);
                                if (it == image.end()) image.emplace(fi, oc);
                                else {
                                    it->second += oc;
                                    if (is_zero(it->second)) image.erase(it);
                                }
                            }
                        }
                    }
                }
                SparseVec coords = tower_->to_coords(tw - 1, omega + 1, image);
                for (const auto& [r, v] : coords) d.add(r, col, v);
            }
            diff_[{w, omega}] = std::move(d);
        }
    }
}

int BarComplex::dim(int w, int omega) const {
    if (omega < 0 || omega > w) return 0;
    return tower_->dim(w - omega, omega);
}

const Matrix& BarComplex::differential(int w, int omega) const {
    auto it = diff_.find({w, omega});
    if (it == diff_.end()) fail(ErrorCode::truncation, "bar differential outside truncation");
    return it->second;
}

ChainComplexData BarComplex::weight_complex(int w) const {
    // chain degree = tree weight = w - omega; the differential lowers it by one
    ChainComplexData cc;
    for (int omega = 0; omega <= w; ++omega) {
        int n = dim(w, omega);
        if (n || omega == 0) cc.dims[w - omega] = n;
    }
    for (int omega = 0; omega < w; ++omega) {
        auto it = diff_.find({w, omega});
        if (it != diff_.end()) cc.diff[w - omega] = it->second;
        else if (cc.dims.count(w - omega) && cc.dims.count(w - omega - 1))
            cc.diff[w - omega] = Matrix(dim(w, omega + 1), dim(w, omega));
    }
    return cc;
}

std::vector<std::string> BarComplex::labels(int w, int omega) const {
    std::vector<std::string> out;
    const LTable& at = tower_->entries();
    for (int i = 0; i < dim(w, omega); ++i) {
        LElement r = tower_->rep1(w - omega, omega, i);
        std::string s;
        for (const auto& [t, c] : r.terms()) {
            if (!s.empty()) s += " + ";
            std::function<std::string(const LNode&)> render = [&](const LNode& n) -> std::string {
                if (n.is_leaf()) return at[n.entry].name;
                std::string os = c_->sgens()[n.gen].name;
                if (n.basis > 0) os += "#" + std::to_string(n.basis);
                os += "(";
                for (size_t j = 0; j < n.children.size(); ++j) {
                    if (j) os += ", ";
                    os += render(n.children[j]);
                }
                os += ")";
                return os;
            };
            if (!(c == 1)) s += "(" + rat_str(c) + ")*";
            s += render(t.root());
        }
        out.push_back(s);
    }
    return out;
}

H0Report bar_h0_check(const BarComplex& bar) {
    H0Report rep;
    const MonogeneAlgebra& a = bar.algebra();
    const KoszulDualCoalgebra& c = bar.dual();
    for (int w = 0; w <= a.max_weight(); ++w) {
        Subspace kernel(0);
        if (w == 0) {
            kernel = Subspace::full(bar.tower().dim(0, 0));
        } else {
            const Matrix& d = bar.differential(w, 0);
            // kernel inside the weight-degree-0 stratum, expressed in the free
            // coordinates of the stratum (which match the coalgebra's free basis)
            RankKernelImage rki = rank_kernel_image(d);
            Matrix gens(rki.kernel.rows(), bar.tower().free_basis(w, 0).dim());
            for (int i = 0; i < rki.kernel.rows(); ++i) {
                SparseVec free_vec = bar.tower().rep_free(w, 0, rki.kernel.row(i));
                gens.row(i) = std::move(free_vec);
            }
            kernel = Subspace::span(gens);
        }
        // translate the coalgebra component into the bar coordinates (the bases
        // agree because weight-zero algebra entries coincide with the generators)
        const Subspace& amc = c.component(w);
        Subspace amc_in_bar(kernel.ambient_dim());
        {
            Matrix rows(amc.dim(), bar.tower().free_basis(w, 0).dim());
            for (int i = 0; i < amc.dim(); ++i) {
                for (const auto& [j, v] : amc.basis().row(i)) {
                    const std::string& key = c.free_basis(w).elems[j].key();
                    rows.add(i, bar.tower().free_basis(w, 0).find_key(key), v);
                }
            }
            amc_in_bar = Subspace::span(rows);
        }
        rep.h0_dims.push_back(kernel.dim());
        rep.coalgebra_dims.push_back(amc_in_bar.dim());
        if (!(kernel == amc_in_bar)) {
            rep.ok = false;
            if (rep.counterexample.empty()) {
                for (int i = 0; i < kernel.dim(); ++i)
                    if (!amc_in_bar.contains(kernel.basis().row(i))) {
                        rep.counterexample = "weight " + std::to_string(w) +
                                             " kernel vector outside the coalgebra";
                        break;
                    }
                if (rep.counterexample.empty())
                    rep.counterexample =
                        "weight " + std::to_string(w) + " coalgebra vector not in the kernel";
            }
        }
    }
    return rep;
}

BarHomologyReport bar_homology(const BarComplex& bar) {
    BarHomologyReport rep;
    const KoszulDualCoalgebra& c = bar.dual();
    for (int w = 1; w <= bar.max_weight(); ++w) {
        HomologyReport h = homology(bar.weight_complex(w));
        // re-key by weight-degree omega = w - chain degree
        HomologyReport by_omega;
        for (const auto& [d, b] : h.betti) by_omega.betti[w - d] = b;
        bool ok = true;
        for (const auto& [omega, b] : by_omega.betti) {
            int expect = (omega == 0) ? c.dim(w) : 0;
            if (b != expect) ok = false;
        }
        if (!ok && rep.koszul) {
            rep.koszul = false;
            rep.first_failure_weight = w;
        }
        rep.by_weight[w] = std::move(by_omega);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Cobar
// ---------------------------------------------------------------------------

CobarComplex::CobarComplex(std::shared_ptr<const MonogeneAlgebra> a,
                           std::shared_ptr<const KoszulDualCoalgebra> c,
                           const TwistFaults& faults)
    : a_(std::move(a)), c_(std::move(c)) {
    int w_max = a_->max_weight();
    const SModule& e = a_->egens();
    const SModule& se = c_->sgens();
    const LTable& ct = c_->centries();

    // free algebra on the coalgebra entries modulo the operadic relations; the
    // total weight of an element is tree weight + entry weights, the homological
    // degree is the sum of the entry degrees (= entry weights here)
    quotient_ = std::make_unique<AppliedQuotient>(e, ct, a_->pres().operad, w_max, w_max, w_max,
                                                  nullptr);

    for (int w = 1; w <= w_max; ++w) {
        for (int deg = 1; deg <= w; ++deg) {
            int tw = w - deg, ew = deg;
            if (!quotient_->has(tw, ew) || quotient_->dim(tw, ew) == 0) continue;
            int tdim = quotient_->has(tw + 1, ew - 1) ? quotient_->dim(tw + 1, ew - 1) : 0;
            Matrix d(tdim, quotient_->dim(tw, ew));
            for (int col = 0; col < quotient_->dim(tw, ew); ++col) {
                LElement x = quotient_->rep1(tw, ew, col);
                SparseVec image; // free coords of (tw+1, ew-1)
                for (const auto& [t, coef] : x.terms()) {
                    // expand each positive-weight coalgebra entry through its root
                    std::vector<std::vector<int>> paths;
                    std::function<void(const LNode&, std::vector<int>&)> lp =
                        [&](const LNode& n, std::vector<int>& path) {
                            if (n.is_leaf()) {
                                paths.push_back(path);
                                return;
                            }
                            for (size_t i = 0; i < n.children.size(); ++i) {
                                path.push_back(static_cast<int>(i));
                                lp(n.children[i], path);
                                path.pop_back();
                            }
                        };
                    std::vector<int> path;
                    lp(t.root(), path);
                    // prefix degrees per leaf in DFS order
                    int prefix = 0;
                    for (const auto& p : paths) {
                        const LNode* leaf = &t.root();
                        for (int i : p) leaf = &leaf->children[i];
                        auto [cw, ci] = c_->centry_info(leaf->entry);
                        int leaf_deg = ct[leaf->entry].degree;
                        if (cw < 1) {
                            prefix += leaf_deg;
                            continue;
                        }
                        int presign = (prefix % 2) ? -1 : 1;
                        prefix += leaf_deg;
                        // root decomposition of the entry's representative, with the
                        // pieces expressed collectively in the coalgebra components
                        LElement crep = c_->rep1(cw, ci);
                        struct Bucket {
                            int gen = -1;
                            std::vector<int> pw; // piece tree weights
                            std::vector<int> pe; // piece entry weights
                            SparseVec vec;       // flat (basis, piece free idxs)
                            std::vector<int> dims;
                        };
                        std::map<std::string, Bucket> buckets;
                        for (const auto& [st, scoef] : crep.terms()) {
                            const LNode& root = st.root();
                            std::ostringstream key;
                            key << root.gen;
                            std::vector<LTree> pieces;
                            for (const auto& ch : root.children) {
                                pieces.emplace_back(se, a_->ventries(), ch);
                                key << '|' << pieces.back().weight() << '.'
                                    << pieces.back().entry_weight();
                            }
                            Bucket& bk = buckets[key.str()];
                            if (bk.dims.empty()) {
                                bk.gen = root.gen;
                                bk.dims.push_back(se[root.gen].dim);
                                for (const auto& pc : pieces) {
                                    bk.pw.push_back(pc.weight());
                                    bk.pe.push_back(pc.entry_weight());
                                    bk.dims.push_back(c_->free_basis(pc.weight()).dim());
                                }
                            }
                            long flat = root.basis;
                            for (size_t pi = 0; pi < pieces.size(); ++pi)
                                flat = flat * bk.dims[1 + pi] +
                                       c_->free_basis(bk.pw[pi]).find(pieces[pi]);
                            auto it = bk.vec.find(static_cast<int>(flat));
                            if (it == bk.vec.end()) bk.vec.emplace(static_cast<int>(flat), scoef);
                            else {
                                it->second += scoef;
                                if (is_zero(it->second)) bk.vec.erase(it);
                            }
                        }
                        for (auto& [bkey, bk] : buckets) {
                            if (bk.vec.empty()) continue;
                            Subspace genfull = Subspace::full(se[bk.gen].dim);
                            std::vector<const Subspace*> facs{&genfull};
                            for (int pw : bk.pw) facs.push_back(&c_->component(pw));
                            auto expansion = express_in_tensor(bk.vec, facs, bk.dims);
                            for (const auto& [multi, ecoef] : expansion) {
                                // splice the generator corolla with coalgebra entries
                                std::vector<LNode> ch;
                                for (size_t pi = 0; pi < bk.pw.size(); ++pi)
                                    ch.push_back(
                                        LNode::leaf(c_->centry_id(bk.pw[pi], multi[1 + pi])));
                                LNode repl = LNode::vertex(bk.gen, multi[0], std::move(ch));
                                std::function<LNode(const LNode&, size_t)> splice =
                                    [&](const LNode& n, size_t depth) -> LNode {
                                    if (depth == p.size()) return repl;
                                    LNode v = n;
                                    v.children[p[depth]] = splice(n.children[p[depth]], depth + 1);
                                    return v;
                                };
                                LElement out = lcanonicalize(e, ct, splice(t.root(), 0),
                                                             coef * ecoef * presign);
                                for (const auto& [ot, oc] : out.terms()) {
                                    int fi = quotient_->free_basis(tw + 1, ew - 1).find(ot);
                                    auto it2 = image.find(fi);
                                    if (it2 == image.end()) image.emplace(fi, oc);
                                    else {
                                        it2->second += oc;
                                        if (is_zero(it2->second)) image.erase(it2);
                                    }
                                }
                            }
                        }
                    }
                }
                SparseVec coords = quotient_->reduce(tw + 1, ew - 1, image);
                for (const auto& [r, v] : coords) d.add(r, col, v);
            }
            diff_[{w, deg}] = std::move(d);
        }
        // projection onto the algebra in degree zero: weight-zero entries are the
        // generators, so the tree translates directly into algebra coordinates
        {
            int tw = w, ew = 0;
            int n = quotient_->has(tw, ew) ? quotient_->dim(tw, ew) : 0;
            Matrix f(a_->dim(w), n);
            for (int col = 0; col < n; ++col) {
                LElement x = quotient_->rep1(tw, ew, col);
                SparseVec free_vec;
                for (const auto& [t, cf] : x.terms()) {
                    // entries of weight zero are sV = V with matching ids
                    free_vec[a_->free_basis(w).find_key(t.key())] = cf;
                }
                SparseVec red = a_->reduce(w, free_vec);
                for (const auto& [r, v] : red) f.add(r, col, v);
            }
            proj_[w] = std::move(f);
        }
    }
    (void)faults;
}

int CobarComplex::dim(int w, int degree) const {
    if (degree < 0 || degree > w) return 0;
    return quotient_->has(w - degree, degree) ? quotient_->dim(w - degree, degree) : 0;
}

const Matrix& CobarComplex::differential(int w, int degree) const {
    auto it = diff_.find({w, degree});
    if (it == diff_.end()) fail(ErrorCode::truncation, "cobar differential outside truncation");
    return it->second;
}

ChainComplexData CobarComplex::weight_complex(int w) const {
    ChainComplexData cc;
    for (int deg = 0; deg <= w; ++deg) cc.dims[deg] = dim(w, deg);
    for (int deg = 1; deg <= w; ++deg) {
        auto it = diff_.find({w, deg});
        if (it != diff_.end()) cc.diff[deg] = it->second;
        else cc.diff[deg] = Matrix(dim(w, deg - 1), dim(w, deg));
    }
    return cc;
}

const Matrix& CobarComplex::projection_to_algebra(int w) const {
    auto it = proj_.find(w);
    if (it == proj_.end()) fail(ErrorCode::truncation, "cobar projection outside truncation");
    return it->second;
}

CobarReport build_cobar_and_check(const CobarComplex& cobar) {
    CobarReport rep;
    const MonogeneAlgebra& a = cobar.algebra();
    for (int w = 1; w <= cobar.max_weight(); ++w) {
        ChainComplexData cc = cobar.weight_complex(w);
        // f is a chain map onto A concentrated in degree zero
        const Matrix& f = cobar.projection_to_algebra(w);
        if (cobar.dim(w, 1) > 0 && !(f * cobar.differential(w, 1)).zero())
            fail(ErrorCode::internal_consistency, "cobar projection is not a chain map");
        ChainComplexData target;
        target.dims[0] = a.dim(w);
        std::map<int, Matrix> fmap;
        fmap[0] = f;
        bool qiso = is_quasi_isomorphism(cc, target, fmap);
        rep.by_weight[w] = homology(cc);
        if (!qiso && rep.quasi_iso) {
            rep.quasi_iso = false;
            rep.first_failure_weight = w;
        }
    }
    return rep;
}

} // namespace koszul

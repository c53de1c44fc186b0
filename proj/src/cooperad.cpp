#include "koszul/cooperad.hpp"

#include <algorithm>
#include <sstream>

namespace koszul {

TruncatedCooperad::TruncatedCooperad(std::shared_ptr<const TruncatedOperad> p)
    : p_(std::move(p)), se_(suspend(p_->gens())) {
    int max_n = p_->max_arity();
    int max_w = p_->max_weight();

    for (int w = 0; w <= max_w; ++w) {
        for (int n = 1; n <= max_n; ++n) {
            FreeBasis fb = make_free_basis(se_, n, w);
            if (fb.dim() == 0 && !(n == 1 && w == 0)) continue;
            Component c;
            c.free = std::move(fb);
            int fdim = c.free.dim();
            if (w <= 1) {
                // the unit and all of sE
                c.space = Subspace::full(fdim);
            } else if (w == 2) {
                // s^2 R: the symmetric closure of the relations, which is exactly the
                // weight-2 part of the ideal; tree keys agree between E and sE, so the
                // transport is the identity on coordinates.
                Matrix rows(0, fdim);
                if (p_->dim(n, 2) >= 0) {
                    const Subspace& ideal2 = p_->ideal(n, 2);
                    rows = ideal2.basis();
                }
                c.space = Subspace::span(rows);
            } else {
                // kernel of the split conditions: every infinitesimal decomposition of
                // a member lies in C(a) (x) C(b), collected per split datum.
                struct Bucket {
                    int n_up, w_up, m_low, w_low;
                    std::map<std::pair<int, int>, SparseVec> entries; // (up,low) -> column vec
                };
                std::map<std::string, Bucket> buckets;
                for (int col = 0; col < fdim; ++col) {
                    const TreeMonomial& t = c.free.elems[col];
                    for (const auto& s : subtree_splits(se_, t)) {
                        std::ostringstream key;
                        key << s.upper.arity() << '.' << s.upper.weight() << '.'
                            << s.lower.arity() << '.' << s.lower.weight();
                        for (int l : s.leaves) key << ',' << l;
                        Bucket& b = buckets[key.str()];
                        b.n_up = s.upper.arity();
                        b.w_up = s.upper.weight();
                        b.m_low = s.lower.arity();
                        b.w_low = s.lower.weight();
                        const FreeBasis& ufb = comp(b.n_up, b.w_up).free;
                        const FreeBasis& lfb = comp(b.m_low, b.w_low).free;
                        int ui = ufb.find(s.upper);
                        int li = lfb.find(s.lower);
                        auto& cell = b.entries[{ui, li}];
                        auto it = cell.find(col);
                        if (it == cell.end()) cell.emplace(col, s.sign);
                        else {
                            it->second += s.sign;
                            if (is_zero(it->second)) cell.erase(it);
                        }
                    }
                }
                std::vector<SparseVec> constraint_rows;
                for (auto& [key, b] : buckets) {
                    const Component& up = comp(b.n_up, b.w_up);
                    const Component& low = comp(b.m_low, b.w_low);
                    int dl = low.free.dim();
                    // (q_up (x) id) rows
                    for (int r = 0; r < up.complement_proj.rows(); ++r) {
                        std::map<int, SparseVec> rows_by_low;
                        for (const auto& [ul, colvec] : b.entries) {
                            Rat coeff = up.complement_proj.get(r, ul.first);
                            if (is_zero(coeff)) continue;
                            vec_axpy(rows_by_low[ul.second], coeff, colvec);
                        }
                        for (auto& [li, row] : rows_by_low)
                            if (!row.empty()) constraint_rows.push_back(std::move(row));
                    }
                    // (id (x) q_low) rows
                    for (int r = 0; r < low.complement_proj.rows(); ++r) {
                        std::map<int, SparseVec> rows_by_up;
                        for (const auto& [ul, colvec] : b.entries) {
                            Rat coeff = low.complement_proj.get(r, ul.second);
                            if (is_zero(coeff)) continue;
                            vec_axpy(rows_by_up[ul.first], coeff, colvec);
                        }
                        for (auto& [ui, row] : rows_by_up)
                            if (!row.empty()) constraint_rows.push_back(std::move(row));
                    }
                    (void)dl;
                }
                Matrix cm(static_cast<int>(constraint_rows.size()), fdim);
                for (size_t i = 0; i < constraint_rows.size(); ++i)
                    cm.row(static_cast<int>(i)) = std::move(constraint_rows[i]);
                c.space = Subspace::span(rank_kernel_image(cm).kernel);
            }
            c.complement_proj = quotient_by(c.space, fdim).projection;
            if (c.space.dim() > 0 || (n == 1 && w == 0)) comps_[{n, w}] = std::move(c);
        }
    }
}

const TruncatedCooperad::Component& TruncatedCooperad::comp(int arity, int weight) const {
    auto it = comps_.find({arity, weight});
    if (it == comps_.end()) {
        p_->check_truncation(arity, weight);
        fail(ErrorCode::structural, "empty cooperad component requested");
    }
    return it->second;
}

std::vector<int> TruncatedCooperad::weights(int arity) const {
    std::vector<int> ws;
    for (const auto& [key, c] : comps_)
        if (key.first == arity && c.space.dim() > 0) ws.push_back(key.second);
    return ws;
}

int TruncatedCooperad::dim(int arity, int weight) const {
    auto it = comps_.find({arity, weight});
    return it == comps_.end() ? 0 : it->second.space.dim();
}

int TruncatedCooperad::total_dim(int arity) const {
    int t = 0;
    for (int w : weights(arity)) t += dim(arity, w);
    return t;
}

const FreeBasis& TruncatedCooperad::free_basis(int arity, int weight) const {
    return comp(arity, weight).free;
}

const Subspace& TruncatedCooperad::component(int arity, int weight) const {
    return comp(arity, weight).space;
}

const Matrix& TruncatedCooperad::complement_projection(int arity, int weight) const {
    return comp(arity, weight).complement_proj;
}

SparseVec TruncatedCooperad::to_coords(int arity, int weight, const SparseVec& free_vec) const {
    auto coords = comp(arity, weight).space.coordinates(free_vec);
    if (!coords)
        fail(ErrorCode::internal_consistency,
             "vector is not a member of the cooperad component (" + std::to_string(arity) +
                 ", " + std::to_string(weight) + ")");
    return *coords;
}

SparseVec TruncatedCooperad::rep_free(int arity, int weight, const SparseVec& coords) const {
    SparseVec out;
    const Component& c = comp(arity, weight);
    for (const auto& [i, v] : coords) vec_axpy(out, v, c.space.basis().row(i));
    return out;
}

OperadElement TruncatedCooperad::rep(int arity, int weight, int idx) const {
    SparseVec coords;
    coords[idx] = 1;
    return comp(arity, weight).free.from_vec(rep_free(arity, weight, coords));
}

std::string TruncatedCooperad::basis_label(int arity, int weight, int idx) const {
    OperadElement r = rep(arity, weight, idx);
    std::string s;
    for (const auto& [t, cval] : r.terms()) {
        if (!s.empty()) s += " + ";
        if (cval == 1) s += tree_text(se_, t);
        else s += "(" + rat_str(cval) + ")*" + tree_text(se_, t);
    }
    return s;
}

const Matrix& TruncatedCooperad::kappa_matrix(int arity) const {
    auto it = kappa_memo_.find(arity);
    if (it != kappa_memo_.end()) return it->second;
    // C(n,1) is the full corolla space; transport each corolla to the operad side
    const Component& c = comp(arity, 1);
    const FreeBasis& pf = p_->free_basis(arity, 1);
    Matrix m(p_->dim(arity, 1), c.space.dim());
    for (int j = 0; j < c.space.dim(); ++j) {
        SparseVec fv = rep_free(arity, 1, SparseVec{{j, Rat(1)}});
        // identical tree keys on both sides
        SparseVec transported;
        for (const auto& [i, v] : fv) {
            int pi = pf.index.at(c.free.elems[i].key());
            transported[pi] = v;
        }
        SparseVec red = p_->reduce_free_vec(arity, 1, transported);
        for (const auto& [r, v] : red) m.add(r, j, v);
    }
    return kappa_memo_.emplace(arity, std::move(m)).first->second;
}

const Matrix& TruncatedCooperad::adjacent_action(int arity, int weight, int i) const {
    auto key = std::make_tuple(arity, weight, i);
    auto it = action_memo_.find(key);
    if (it != action_memo_.end()) return it->second;
    const Component& c = comp(arity, weight);
    int d = c.space.dim();
    Matrix m(d, d);
    Perm s = perm_transposition(arity, i, i + 1);
    for (int a = 0; a < d; ++a) {
        OperadElement img = apply_permutation(se_, c.free.from_vec(rep_free(arity, weight, SparseVec{{a, Rat(1)}})), s);
        SparseVec col = to_coords(arity, weight, c.free.to_vec(img));
        for (const auto& [r, v] : col) m.add(r, a, v);
    }
    return action_memo_.emplace(key, std::move(m)).first->second;
}

SparseVec TruncatedCooperad::act(int arity, int weight, const Perm& sigma,
                                 const SparseVec& v) const {
    SparseVec out = v;
    // leaf relabeling is a left action: apply(apply(x, s), t) = apply(x, t o s),
    // so the adjacent word runs in reverse
    auto word = adjacent_word(sigma);
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        out = adjacent_action(arity, weight, *it).apply(out);
    return out;
}

McReport mc_check_kappa(const TruncatedOperad& p, const TruncatedCooperad& c,
                        const TwistFaults& faults) {
    McReport rep;
    const SModule& se = c.sgens();
    for (int n = 1; n <= c.max_arity(); ++n) {
        for (int w : c.weights(n)) {
            if (w == 0) continue;
            for (int idx = 0; idx < c.dim(n, w); ++idx) {
                // kappa * kappa: only (1,1)-splits survive, so only weight 2 matters;
                // the boundary term vanishes (all internal differentials are zero).
                SparseVec acc; // in P(n, 2) coordinates
                OperadElement x = c.rep(n, w, idx);
                for (const auto& [t, coef] : x.terms()) {
                    if (t.weight() != 2) break;
                    for (const auto& s : subtree_splits(se, t)) {
                        if (s.lower.weight() != 1 || s.upper.weight() != 1) continue;
                        int sign = s.sign;
                        if (faults.mc_flip_shape_sign) {
                            auto itl = s.leaves.begin();
                            int first = *itl;
                            int second = *std::next(itl);
                            if (!(first == 1 && second == 2)) sign = -sign;
                        }
                        const TreeNode& ur = s.upper.root();
                        const TreeNode& lr = s.lower.root();
                        // corolla classes in P
                        auto corolla_class = [&](int gen, int basis, int ar) {
                            std::vector<TreeNode> ch;
                            for (int l = 1; l <= ar; ++l) ch.push_back(TreeNode::leaf_node(l));
                            OperadElement el(ar);
                            el.add_term(TreeMonomial(p.gens(), TreeNode::vertex(gen, basis, ch)),
                                        1);
                            return p.reduce(ar, 1, el);
                        };
                        SparseVec up = corolla_class(ur.gen, ur.basis, s.upper.arity());
                        SparseVec low = corolla_class(lr.gen, lr.basis, s.lower.arity());
                        SparseVec composed =
                            p.compose(s.upper.arity(), 1, up, s.slot, s.lower.arity(), 1, low);
                        // shuffle the consecutive block back to the original leaf set
                        std::vector<int> lower_sorted(s.leaves.begin(), s.leaves.end());
                        int m = static_cast<int>(lower_sorted.size());
                        std::vector<int> rest;
                        for (int l = 1; l <= n; ++l)
                            if (!s.leaves.count(l)) rest.push_back(l);
                        Perm sigma(n);
                        for (int pos = 1; pos <= n; ++pos) {
                            int target;
                            if (pos < s.slot) target = rest[pos - 1];
                            else if (pos < s.slot + m) target = lower_sorted[pos - s.slot];
                            else target = rest[pos - m - 1];
                            sigma[pos - 1] = target - 1;
                        }
                        composed = p.act(n, 2, sigma, composed);
                        vec_axpy(acc, Rat(sign) * coef, composed);
                    }
                }
                if (!acc.empty()) {
                    rep.ok = false;
                    rep.detail = "kappa*kappa nonzero on " + c.basis_label(n, w, idx) +
                                 " (arity " + std::to_string(n) + ")";
                    return rep;
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Twisted composite products P o_k C and C o_k P
// ---------------------------------------------------------------------------

namespace {

struct BlockElem {
    int k = 0;    // outer arity
    int wo = 0;   // outer weight
    int oi = 0;   // outer basis index
    std::vector<std::array<int, 3>> factors;  // (arity, weight, index) per block
    std::vector<std::vector<int>> blocks;     // ordered by minima

    std::string key() const {
        std::ostringstream os;
        os << k << '.' << wo << '.' << oi << '|';
        for (const auto& f : factors) os << f[0] << ',' << f[1] << ',' << f[2] << ';';
        os << '|';
        for (const auto& b : blocks) {
            for (int l : b) os << l << ',';
            os << ';';
        }
        return os.str();
    }
};

struct BlockSpace {
    std::vector<BlockElem> elems;
    std::map<std::string, int> index;

    int add(const BlockElem& e) {
        auto [it, fresh] = index.emplace(e.key(), static_cast<int>(elems.size()));
        if (fresh) elems.push_back(e);
        return it->second;
    }
    int find(const BlockElem& e) const {
        auto it = index.find(e.key());
        if (it == index.end()) fail(ErrorCode::internal_consistency, "block element not in basis");
        return it->second;
    }
};

// dims/weights provider abstraction over "operad or cooperad side"
struct SideInfo {
    std::function<std::vector<int>(int)> weights;
    std::function<int(int, int)> dim;
};

// enumerate all block elements of the composite at a given arity, outer side `out`,
// factor side `fac`
std::map<int, BlockSpace> enumerate_blocks(const SideInfo& out, const SideInfo& fac, int arity,
                                           bool degree_from_factors, int max_total_weight) {
    std::map<int, BlockSpace> by_degree;
    std::vector<int> labels(arity);
    for (int i = 0; i < arity; ++i) labels[i] = i + 1;
    for (int k = 1; k <= arity; ++k) {
        for (const auto& blocks : ordered_set_partitions(labels, k)) {
            for (int wo : out.weights(k)) {
                int od = out.dim(k, wo);
                if (od == 0) continue;
                // factor choices per block
                std::vector<std::vector<std::array<int, 3>>> options(k);
                bool viable = true;
                for (int b = 0; b < k && viable; ++b) {
                    int m = static_cast<int>(blocks[b].size());
                    for (int wf : fac.weights(m))
                        for (int idx = 0; idx < fac.dim(m, wf); ++idx)
                            options[b].push_back({m, wf, idx});
                    if (options[b].empty()) viable = false;
                }
                if (!viable) continue;
                std::vector<size_t> pick(k, 0);
                while (true) {
                    BlockElem e;
                    e.k = k;
                    e.wo = wo;
                    e.blocks = blocks;
                    int wfac = 0;
                    for (int b = 0; b < k; ++b) {
                        e.factors.push_back(options[b][pick[b]]);
                        wfac += options[b][pick[b]][1];
                    }
                    int degree = degree_from_factors ? wfac : wo;
                    if (wo + wfac > max_total_weight) degree = -1;
                    for (int oi = 0; degree >= 0 && oi < od; ++oi) {
                        e.oi = oi;
                        by_degree[degree].add(e);
                    }
                    int b = 0;
                    for (; b < k; ++b) {
                        if (++pick[b] < options[b].size()) break;
                        pick[b] = 0;
                    }
                    if (b == k) break;
                }
            }
        }
    }
    return by_degree;
}

} // namespace

ChainComplexData operadic_koszul_complex(const TruncatedOperad& p, const TruncatedCooperad& c,
                                         KoszulSide side, int arity, const TwistFaults& faults,
                                         std::map<int, std::vector<std::string>>* labels) {
    const SModule& se = c.sgens();
    SideInfo pinfo{[&](int n) { return p.weights(n); }, [&](int n, int w) { return p.dim(n, w); }};
    SideInfo cinfo{[&](int n) { return c.weights(n); }, [&](int n, int w) { return c.dim(n, w); }};

    for (const auto& g : p.gens())
        if (g.degree != 0)
            fail(ErrorCode::unsupported_presentation,
                 "twisted composite products require degree-zero generators");

    std::map<int, BlockSpace> spaces =
        side == KoszulSide::left ? enumerate_blocks(pinfo, cinfo, arity, true, p.max_weight())
                                 : enumerate_blocks(cinfo, pinfo, arity, false, p.max_weight());

    // corolla classes on the operad side
    auto corolla_class = [&](int gen, int basis, int ar) {
        std::vector<TreeNode> ch;
        for (int l = 1; l <= ar; ++l) ch.push_back(TreeNode::leaf_node(l));
        OperadElement el(ar);
        el.add_term(TreeMonomial(p.gens(), TreeNode::vertex(gen, basis, ch)), 1);
        return p.reduce(ar, 1, el);
    };

    ChainComplexData complex;
    for (const auto& [d, sp] : spaces) complex.dims[d] = static_cast<int>(sp.elems.size());

    for (const auto& [d, sp] : spaces) {
        auto target_it = spaces.find(d - 1);
        if (target_it == spaces.end()) {
            if (d > 0 && !sp.elems.empty())
                complex.diff[d] = Matrix(0, static_cast<int>(sp.elems.size()));
            continue;
        }
        const BlockSpace& target = target_it->second;
        Matrix diff(static_cast<int>(target.elems.size()), static_cast<int>(sp.elems.size()));

        for (int col = 0; col < static_cast<int>(sp.elems.size()); ++col) {
            const BlockElem& e = sp.elems[col];
            if (side == KoszulSide::left) {
                // split the root corolla off one cooperad factor and compose it into
                // the outer operad element
                int prefix = 0;
                for (int j = 0; j < e.k; ++j) {
                    auto [m, wf, ci] = e.factors[j];
                    if (wf == 0) continue;
                    int presign = prefix % 2 ? -1 : 1;
                    if (faults.complex_flip_block2 && j == 1) presign = -presign;

                    // collective root splits of the factor, bucketed per child-leaf
                    // partition and root generator with expression in C-bases
                    OperadElement x = c.rep(m, wf, ci);
                    struct RKey {
                        std::string part;
                        int gen;
                        std::vector<int> pw; // piece weights
                        bool operator<(const RKey& o) const {
                            return std::tie(part, gen, pw) < std::tie(o.part, o.gen, o.pw);
                        }
                    };
                    std::map<RKey, SparseVec> buckets; // flat (basis, piece idxs) -> coef
                    for (const auto& [t, coef] : x.terms()) {
                        RootSplit rs = root_decompose(se, t);
                        RKey key;
                        key.gen = rs.gen;
                        std::ostringstream ps;
                        for (const auto& ls : rs.piece_leaves) {
                            for (int l : ls) ps << l << ',';
                            ps << ';';
                        }
                        key.part = ps.str();
                        for (const auto& piece : rs.pieces) key.pw.push_back(piece.weight());
                        // flat index: basis index, then piece free indices (last fastest)
                        long flat = rs.basis;
                        for (size_t pi = 0; pi < rs.pieces.size(); ++pi) {
                            const FreeBasis& pf =
                                c.free_basis(rs.pieces[pi].arity(), rs.pieces[pi].weight());
                            flat = flat * pf.dim() + pf.find(rs.pieces[pi]);
                        }
                        auto& cell = buckets[key];
                        auto itc = cell.find(static_cast<int>(flat));
                        if (itc == cell.end()) cell.emplace(static_cast<int>(flat), coef);
                        else {
                            itc->second += coef;
                            if (is_zero(itc->second)) cell.erase(itc);
                        }
                    }
                    for (auto& [key, vec] : buckets) {
                        if (vec.empty()) continue;
                        // factors: free generator slot (full), then C components
                        std::vector<const Subspace*> facs;
                        std::vector<int> dims;
                        Subspace genfull = Subspace::full(se[key.gen].dim);
                        dims.push_back(se[key.gen].dim);
                        // reconstruct piece aritys from the partition string
                        std::vector<std::vector<int>> piece_leaves;
                        {
                            std::vector<int> cur;
                            std::vector<std::vector<int>> all;
                            std::string num;
                            for (char ch : key.part) {
                                if (ch == ',') {
                                    cur.push_back(std::stoi(num));
                                    num.clear();
                                } else if (ch == ';') {
                                    all.push_back(cur);
                                    cur.clear();
                                } else
                                    num += ch;
                            }
                            piece_leaves = std::move(all);
                        }
                        for (size_t pi = 0; pi < key.pw.size(); ++pi) {
                            int pm = static_cast<int>(piece_leaves[pi].size());
                            facs.push_back(&c.component(pm, key.pw[pi]));
                            dims.push_back(c.free_basis(pm, key.pw[pi]).dim());
                        }
                        facs.insert(facs.begin(), &genfull);
                        auto expansion = express_in_tensor(vec, facs, dims);
                        int r = static_cast<int>(key.pw.size());
                        for (const auto& [multi, coef2] : expansion) {
                            int basis = multi[0];
                            // compose the corolla into the outer element
                            SparseVec evec = corolla_class(key.gen, basis, r);
                            SparseVec outer;
                            outer[e.oi] = 1;
                            SparseVec newouter =
                                p.compose(e.k, e.wo, outer, j + 1, r, 1, evec);
                            // assemble the new factor list and blocks
                            BlockElem ne;
                            ne.k = e.k + r - 1;
                            ne.wo = e.wo + 1;
                            std::vector<int> degs;
                            for (int l = 0; l < e.k; ++l) {
                                if (l == j) {
                                    for (int pi = 0; pi < r; ++pi) {
                                        ne.factors.push_back(
                                            {static_cast<int>(piece_leaves[pi].size()),
                                             key.pw[pi], multi[1 + pi]});
                                        std::vector<int> global;
                                        for (int ll : piece_leaves[pi])
                                            global.push_back(e.blocks[j][ll - 1]);
                                        ne.blocks.push_back(global);
                                        degs.push_back(key.pw[pi]);
                                    }
                                } else {
                                    ne.factors.push_back(e.factors[l]);
                                    ne.blocks.push_back(e.blocks[l]);
                                    degs.push_back(e.factors[l][1]);
                                }
                            }
                            // sort blocks by minima
                            std::vector<int> keys;
                            for (const auto& b : ne.blocks) keys.push_back(b.front());
                            Perm sigma = sorting_perm(keys);
                            int sgn = presign * koszul_sign(degs, sigma);
                            if (!perm_is_identity(sigma)) {
                                std::vector<std::array<int, 3>> sf(ne.factors.size());
                                std::vector<std::vector<int>> sb(ne.blocks.size());
                                for (size_t l = 0; l < ne.factors.size(); ++l) {
                                    sf[sigma[l]] = ne.factors[l];
                                    sb[sigma[l]] = ne.blocks[l];
                                }
                                ne.factors = std::move(sf);
                                ne.blocks = std::move(sb);
                                newouter = p.act(ne.k, ne.wo, sigma, newouter);
                            }
                            for (const auto& [noi, ov] : newouter) {
                                ne.oi = noi;
                                int row = target.find(ne);
                                diff.add(row, col, Rat(sgn) * coef2 * ov);
                            }
                        }
                    }
                    prefix += wf;
                }
            } else {
                // right side: split a weight-1 cluster off the outer cooperad element
                // and compose it with the operad factors below it
                OperadElement x = c.rep(e.k, e.wo, e.oi);
                int presign = (e.wo - 1) % 2 ? -1 : 1;

                struct SKey {
                    std::vector<int> leaves;
                    int gen;
                    bool operator<(const SKey& o) const {
                        return std::tie(leaves, gen) < std::tie(o.leaves, o.gen);
                    }
                };
                std::map<SKey, SparseVec> buckets; // flat (upper free idx, basis) -> coef
                for (const auto& [t, coef] : x.terms()) {
                    if (e.wo == 1) {
                        // trivial split: the whole corolla is the lower piece
                        SKey key;
                        for (int l = 1; l <= e.k; ++l) key.leaves.push_back(l);
                        key.gen = t.root().gen;
                        auto& cell = buckets[key];
                        int flat = t.root().basis; // upper is the unit (dim 1)
                        auto itc = cell.find(flat);
                        if (itc == cell.end()) cell.emplace(flat, coef);
                        else {
                            itc->second += coef;
                            if (is_zero(itc->second)) cell.erase(itc);
                        }
                        continue;
                    }
                    for (const auto& s : subtree_splits(se, t)) {
                        if (s.lower.weight() != 1) continue;
                        SKey key;
                        key.leaves.assign(s.leaves.begin(), s.leaves.end());
                        key.gen = s.lower.root().gen;
                        const FreeBasis& ufb = c.free_basis(s.upper.arity(), s.upper.weight());
                        int flat = ufb.find(s.upper) * se[key.gen].dim + s.lower.root().basis;
                        auto& cell = buckets[key];
                        auto itc = cell.find(flat);
                        if (itc == cell.end()) cell.emplace(flat, Rat(s.sign) * coef);
                        else {
                            itc->second += Rat(s.sign) * coef;
                            if (is_zero(itc->second)) cell.erase(itc);
                        }
                    }
                }
                for (auto& [key, vec] : buckets) {
                    if (vec.empty()) continue;
                    int m = static_cast<int>(key.leaves.size());
                    int ua = e.k - m + 1;
                    int uw = e.wo - 1;
                    Subspace genfull = Subspace::full(se[key.gen].dim);
                    std::vector<const Subspace*> facs{&c.component(ua, uw), &genfull};
                    std::vector<int> dims{c.free_basis(ua, uw).dim(), se[key.gen].dim};
                    auto expansion = express_in_tensor(vec, facs, dims);
                    for (const auto& [multi, coef2] : expansion) {
                        int upper_ci = multi[0];
                        int basis = multi[1];
                        // gamma(e; factors at the covered leaves), composed last-to-first
                        SparseVec cur = corolla_class(key.gen, basis, m);
                        int cur_ar = m, cur_w = 1;
                        for (int t2 = m - 1; t2 >= 0; --t2) {
                            auto [fa, fw, fi] = e.factors[key.leaves[t2] - 1];
                            SparseVec fv;
                            fv[fi] = 1;
                            cur = p.compose(cur_ar, cur_w, cur, t2 + 1, fa, fw, fv);
                            cur_ar += fa - 1;
                            cur_w += fw;
                        }
                        // structural slot t of `cur` carries the t-th leaf of the
                        // concatenated covered blocks; reshuffle to the sorted union
                        std::vector<int> conc, merged;
                        for (int l : key.leaves)
                            for (int g : e.blocks[l - 1]) conc.push_back(g);
                        merged = conc;
                        std::sort(merged.begin(), merged.end());
                        if (conc != merged) {
                            Perm shuffle(cur_ar);
                            for (int t2 = 0; t2 < cur_ar; ++t2) {
                                int rank = static_cast<int>(
                                    std::lower_bound(merged.begin(), merged.end(), conc[t2]) -
                                    merged.begin());
                                shuffle[t2] = rank;
                            }
                            cur = p.act(cur_ar, cur_w, shuffle, cur);
                        }
                        // merged block and new factor list
                        BlockElem ne;
                        ne.k = ua;
                        ne.wo = uw;
                        int slot = 0;
                        {
                            // position of the merged factor: rank of min among kept blocks
                            std::vector<std::pair<int, int>> mins; // (min, old index or -1)
                            for (int l = 0; l < e.k; ++l) {
                                if (std::find(key.leaves.begin(), key.leaves.end(), l + 1) !=
                                    key.leaves.end())
                                    continue;
                                mins.emplace_back(e.blocks[l].front(), l);
                            }
                            mins.emplace_back(merged.front(), -1);
                            std::sort(mins.begin(), mins.end());
                            for (size_t i2 = 0; i2 < mins.size(); ++i2) {
                                if (mins[i2].second == -1) {
                                    slot = static_cast<int>(i2);
                                    ne.factors.push_back({cur_ar, cur_w, 0});
                                    ne.blocks.push_back(merged);
                                } else {
                                    ne.factors.push_back(e.factors[mins[i2].second]);
                                    ne.blocks.push_back(e.blocks[mins[i2].second]);
                                }
                            }
                        }
                        ne.oi = upper_ci;
                        for (const auto& [pi2, pv] : cur) {
                            ne.factors[slot][2] = pi2;
                            int row = target.find(ne);
                            diff.add(row, col, Rat(presign) * coef2 * pv);
                        }
                    }
                }
            }
        }
        complex.diff[d] = std::move(diff);
    }

    if (labels) {
        for (const auto& [d, sp] : spaces) {
            std::vector<std::string> ls;
            for (const auto& e : sp.elems) ls.push_back(e.key());
            (*labels)[d] = std::move(ls);
        }
    }
    return complex;
}

HomologyReport operadic_koszul_homology(const TruncatedOperad& p, const TruncatedCooperad& c,
                                        KoszulSide side, int arity, const TwistFaults& faults) {
    return homology(operadic_koszul_complex(p, c, side, arity, faults));
}

OperadKoszulVerdict operadic_koszul_verdict(const TruncatedOperad& p, const TruncatedCooperad& c,
                                            int up_to_arity) {
    OperadKoszulVerdict v;
    v.checked_up_to = up_to_arity;
    for (int n = 1; n <= up_to_arity; ++n) {
        v.left[n] = operadic_koszul_homology(p, c, KoszulSide::left, n);
        v.right[n] = operadic_koszul_homology(p, c, KoszulSide::right, n);
        bool ok;
        if (n == 1) {
            ok = v.left[n].total() == 1 && v.left[n].betti.count(0) &&
                 v.left[n].betti.at(0) == 1 && v.right[n].total() == 1 &&
                 v.right[n].betti.at(0) == 1;
        } else {
            ok = v.left[n].total() == 0 && v.right[n].total() == 0;
        }
        if (!ok && v.koszul) {
            v.koszul = false;
            v.first_failing_arity = n;
        }
    }
    return v;
}

} // namespace koszul

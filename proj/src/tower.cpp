#include "koszul/tower.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace koszul {

namespace {

std::set<int> tower_leaf_counts(const SModule& e, int w) {
    std::set<int> cur{1};
    for (int step = 0; step < w; ++step) {
        std::set<int> next;
        for (int l : cur)
            for (const auto& g : e) next.insert(l + g.arity - 1);
        cur = std::move(next);
    }
    return cur;
}

void tower_multisets(const LTable& t, int n_real, int size, int target_weight,
                     std::vector<int>& cur, std::vector<std::vector<int>>& out, int start = 0) {
    if (size == 0) {
        if (target_weight == 0) out.push_back(cur);
        return;
    }
    for (int ei = start; ei < n_real; ++ei) {
        if (t[ei].weight > target_weight) continue;
        cur.push_back(ei);
        tower_multisets(t, n_real, size - 1, target_weight - t[ei].weight, cur, out, ei);
        cur.pop_back();
    }
}

} // namespace

AppliedTower::AppliedTower(SModule se, LTable entries, const OperadPresentation& pres,
                           std::shared_ptr<const TruncatedCooperad> cabs, int max_tree_weight,
                           int max_entry_weight, int max_total_weight,
                           const std::map<int, Subspace>* weight1_override)
    : se_(std::move(se)), entries_(std::move(entries)), max_tw_(max_tree_weight),
      max_ew_(max_entry_weight), max_total_(max_total_weight), cabs_(std::move(cabs)) {
    n_real_entries_ = static_cast<int>(entries_.size());
    // synthetic hole entries for one-hole upper classes (by degree parity)
    for (int par = 0; par <= 1; ++par) {
        LEntry hole;
        hole.weight = 0;
        hole.degree = par;
        hole.name = "(hole" + std::to_string(par) + ")";
        entries_.push_back(hole);
    }

    for (int tw = 0; tw <= max_tw_; ++tw) {
        for (int ew = 0; ew <= max_ew_; ++ew) {
            if (max_total_ >= 0 && tw + ew > max_total_) continue;
            Component c;
            {
                std::vector<LTree> all;
                for (int s : tower_leaf_counts(se_, tw)) {
                    std::vector<std::vector<int>> multis;
                    std::vector<int> cur;
                    tower_multisets(entries_, n_real_entries_, s, ew, cur, multis);
                    for (const auto& ms : multis) {
                        auto trees = enumerate_ltrees(se_, entries_, tw, ms);
                        all.insert(all.end(), trees.begin(), trees.end());
                    }
                }
                c.free = make_lbasis(std::move(all));
            }
            int fdim = c.free.dim();
            if (fdim == 0) {
                comps_[{tw, ew}] = std::move(c);
                comps_[{tw, ew}].space = Subspace(0);
                continue;
            }

            if (tw == 0) {
                c.space = Subspace::full(fdim);
            } else if (tw == 1) {
                if (weight1_override && weight1_override->count(ew))
                    c.space = weight1_override->at(ew);
                else
                    c.space = Subspace::full(fdim);
            } else {
                // suspended relation span at weight two (the base of the windows)
                Subspace base = Subspace::full(fdim);
                if (tw == 2) {
                    std::vector<SparseVec> rows;
                    for (const auto& [arity, rels] : pres.relations) {
                        for (const auto& r : rels) {
                            if (r.zero()) continue;
                            std::vector<std::vector<int>> assigns;
                            std::vector<int> curv(arity, 0);
                            std::function<void(int, int)> rec = [&](int pos, int wleft) {
                                if (pos == arity) {
                                    if (wleft == 0) assigns.push_back(curv);
                                    return;
                                }
                                for (int v = 0; v < n_real_entries_; ++v) {
                                    if (entries_[v].weight > wleft) continue;
                                    curv[pos] = v;
                                    rec(pos + 1, wleft - entries_[v].weight);
                                }
                            };
                            rec(0, ew);
                            for (const auto& as : assigns) {
                                LElement el;
                                for (const auto& [tm, cc] : r.terms()) {
                                    std::function<LNode(const TreeNode&)> conv =
                                        [&](const TreeNode& n) -> LNode {
                                        if (n.is_leaf()) return LNode::leaf(as[n.leaf - 1]);
                                        LNode v;
                                        v.gen = n.gen;
                                        v.basis = n.basis;
                                        for (const auto& cn : n.children)
                                            v.children.push_back(conv(cn));
                                        return v;
                                    };
                                    el += lcanonicalize(se_, entries_, conv(tm.root()), cc);
                                }
                                if (!el.zero()) rows.push_back(c.free.to_vec(el));
                            }
                        }
                    }
                    Matrix gen(static_cast<int>(rows.size()), fdim);
                    for (size_t i = 0; i < rows.size(); ++i)
                        gen.row(static_cast<int>(i)) = std::move(rows[i]);
                    base = Subspace::span(gen);
                }

                std::vector<SparseVec> constraints;

                // (A) symmetrized cluster conditions against the abstract cooperad
                struct ABucket {
                    int r = 0, a = 0;
                    std::map<int, SparseVec> rows; // numbered free idx -> col vec
                };
                std::map<std::string, ABucket> bucketsA;
                // (B) piece conditions sliced per one-hole upper class
                struct BBucket {
                    int b = 0, bew = 0;
                    std::map<int, SparseVec> rows; // piece free idx -> col vec
                };
                std::map<std::string, BBucket> bucketsB;

                for (int col = 0; col < fdim; ++col) {
                    const LTree& t = c.free.elems[col];

                    for (const auto& cs : lcluster_splits(se_, entries_, t)) {
                        int a = cs.cluster_weight;
                        int r = static_cast<int>(cs.pieces.size());
                        if (a < 2 || a >= tw) continue;
                        if (r > cabs_->max_arity()) continue;
                        std::vector<LTree> pieces;
                        std::vector<int> degs;
                        std::vector<int> sortkeys;
                        for (const auto& p : cs.pieces) {
                            pieces.emplace_back(se_, entries_, p);
                            degs.push_back(pieces.back().degree());
                        }
                        // sort pieces by key
                        std::vector<int> order(r);
                        for (int i = 0; i < r; ++i) order[i] = i;
                        std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
                            return pieces[x].key() < pieces[y].key();
                        });
                        Perm sigma(r);
                        for (int rank = 0; rank < r; ++rank) sigma[order[rank]] = rank;
                        int ksign = koszul_sign(degs, sigma);
                        // relabel holes by sigma and build the numbered cluster
                        LNode relab = cs.cluster;
                        std::function<void(LNode&)> ren = [&](LNode& n) {
                            if (n.is_leaf()) {
                                if (n.entry < -1) n.entry = -2 - sigma[-2 - n.entry];
                                return;
                            }
                            for (auto& ch : n.children) ren(ch);
                        };
                        ren(relab);
                        OperadElement basenum = canonicalize(se_, cluster_to_numbered(relab));
                        // stabilizer of equal sorted pieces
                        std::vector<std::string> skeys(r);
                        std::vector<int> sdegs(r);
                        for (int i = 0; i < r; ++i) {
                            skeys[sigma[i]] = pieces[i].key();
                            sdegs[sigma[i]] = degs[i];
                        }
                        OperadElement symm(r ? basenum.arity() : 1);
                        int stab_count = 0;
                        for (const auto& tau : all_perms(r)) {
                            bool stab = true;
                            for (int i = 0; i < r && stab; ++i)
                                if (skeys[tau[i]] != skeys[i]) stab = false;
                            if (!stab) continue;
                            ++stab_count;
                            OperadElement img = perm_is_identity(tau)
                                                    ? basenum
                                                    : apply_permutation(se_, basenum, tau);
                            symm += img.scaled(koszul_sign(sdegs, tau));
                        }
                        std::ostringstream key;
                        key << a << '|' << r;
                        for (int i = 0; i < r; ++i) key << '|' << skeys[i];
                        ABucket& bk = bucketsA[key.str()];
                        bk.r = r;
                        bk.a = a;
                        const FreeBasis& nfb = cabs_->free_basis(r, a);
                        Rat scale = Rat(cs.sign * ksign) / stab_count;
                        for (const auto& [mono, mc] : symm.terms()) {
                            auto& cell = bk.rows[nfb.find(mono)];
                            auto it = cell.find(col);
                            Rat val = mc * scale;
                            if (it == cell.end()) cell.emplace(col, val);
                            else {
                                it->second += val;
                                if (is_zero(it->second)) cell.erase(it);
                            }
                        }
                    }

                    for (const auto& ss : lsubtree_splits(se_, entries_, t)) {
                        LTree piece(se_, entries_, ss.piece);
                        int b = piece.weight();
                        if (b < 1 || b >= tw) continue;
                        int bew = piece.entry_weight();
                        // canonicalize the upper with the hole as a parity entry
                        int hole_entry = n_real_entries_ + (piece.degree() % 2);
                        LNode upper = ss.upper;
                        std::function<void(LNode&)> fill = [&](LNode& n) {
                            if (n.is_leaf()) {
                                if (n.entry < -1) n.entry = hole_entry;
                                return;
                            }
                            for (auto& ch : n.children) fill(ch);
                        };
                        fill(upper);
                        LElement ucanon = lcanonicalize(se_, entries_, upper);
                        for (const auto& [ut, uc] : ucanon.terms()) {
                            BBucket& bk = bucketsB["B|" + std::to_string(b) + "|" +
                                                   std::to_string(bew) + "|" + ut.key()];
                            bk.b = b;
                            bk.bew = bew;
                            int row = comps_.at({b, bew}).free.find(piece);
                            auto& cell = bk.rows[row];
                            auto it = cell.find(col);
                            Rat val = uc * ss.sign;
                            if (it == cell.end()) cell.emplace(col, val);
                            else {
                                it->second += val;
                                if (is_zero(it->second)) cell.erase(it);
                            }
                        }
                    }
                }

                for (auto& [key, bk] : bucketsA) {
                    const Matrix& q = cabs_->complement_projection(bk.r, bk.a);
                    for (int qr = 0; qr < q.rows(); ++qr) {
                        SparseVec rowvec;
                        for (const auto& [row, colvec] : bk.rows) {
                            Rat coeff = q.get(qr, row);
                            if (!is_zero(coeff)) vec_axpy(rowvec, coeff, colvec);
                        }
                        if (!rowvec.empty()) constraints.push_back(std::move(rowvec));
                    }
                }
                for (auto& [key, bk] : bucketsB) {
                    const Matrix& q = comps_.at({bk.b, bk.bew}).complement_proj;
                    for (int qr = 0; qr < q.rows(); ++qr) {
                        SparseVec rowvec;
                        for (const auto& [row, colvec] : bk.rows) {
                            Rat coeff = q.get(qr, row);
                            if (!is_zero(coeff)) vec_axpy(rowvec, coeff, colvec);
                        }
                        if (!rowvec.empty()) constraints.push_back(std::move(rowvec));
                    }
                }

                Matrix cm(static_cast<int>(constraints.size()), fdim);
                for (size_t i = 0; i < constraints.size(); ++i)
                    cm.row(static_cast<int>(i)) = std::move(constraints[i]);
                Subspace ker = Subspace::span(rank_kernel_image(cm).kernel);
                c.space = (tw == 2) ? subspace_intersect(ker, base) : ker;
            }
            c.complement_proj = quotient_by(c.space, fdim).projection;
            comps_[{tw, ew}] = std::move(c);
        }
    }
}

bool AppliedTower::has(int tw, int ew) const { return comps_.count({tw, ew}) > 0; }

const AppliedTower::Component& AppliedTower::comp(int tw, int ew) const {
    auto it = comps_.find({tw, ew});
    if (it == comps_.end())
        fail(ErrorCode::truncation,
             "tower component (" + std::to_string(tw) + ", " + std::to_string(ew) +
                 ") outside truncation");
    return it->second;
}

const LBasis& AppliedTower::free_basis(int tw, int ew) const { return comp(tw, ew).free; }
const Subspace& AppliedTower::component(int tw, int ew) const { return comp(tw, ew).space; }
const Matrix& AppliedTower::complement_projection(int tw, int ew) const {
    return comp(tw, ew).complement_proj;
}
int AppliedTower::dim(int tw, int ew) const {
    auto it = comps_.find({tw, ew});
    return it == comps_.end() ? 0 : it->second.space.dim();
}

SparseVec AppliedTower::to_coords(int tw, int ew, const SparseVec& free_vec) const {
    auto coords = comp(tw, ew).space.coordinates(free_vec);
    if (!coords)
        fail(ErrorCode::internal_consistency, "vector is not in the tower component");
    return *coords;
}

SparseVec AppliedTower::rep_free(int tw, int ew, const SparseVec& coords) const {
    SparseVec out;
    const Component& c = comp(tw, ew);
    for (const auto& [i, v] : coords) vec_axpy(out, v, c.space.basis().row(i));
    return out;
}

LElement AppliedTower::rep1(int tw, int ew, int idx) const {
    SparseVec c;
    c[idx] = 1;
    return comp(tw, ew).free.from_vec(rep_free(tw, ew, c));
}

} // namespace koszul

namespace koszul {

AppliedQuotient::AppliedQuotient(SModule e, LTable entries, const OperadPresentation& pres,
                                 int max_tree_weight, int max_entry_weight, int max_total_weight,
                                 const std::vector<LElement>* extra_weight1_windows)
    : e_(std::move(e)), entries_(std::move(entries)), max_tw_(max_tree_weight),
      max_ew_(max_entry_weight), max_total_(max_total_weight) {
    int nent = static_cast<int>(entries_.size());

    // free components
    for (int tw = 0; tw <= max_tw_; ++tw) {
        for (int ew = 0; ew <= max_ew_; ++ew) {
            if (max_total_ >= 0 && tw + ew > max_total_) continue;
            std::vector<LTree> all;
            for (int s : [&] {
                     std::set<int> cur{1};
                     for (int step = 0; step < tw; ++step) {
                         std::set<int> next;
                         for (int l : cur)
                             for (const auto& g : e_) next.insert(l + g.arity - 1);
                         cur = std::move(next);
                     }
                     return cur;
                 }()) {
                std::vector<std::vector<int>> multis;
                std::function<void(int, int, int, std::vector<int>&)> rec =
                    [&](int size, int wleft, int start, std::vector<int>& cur) {
                        if (size == 0) {
                            if (wleft == 0) multis.push_back(cur);
                            return;
                        }
                        for (int ei = start; ei < nent; ++ei) {
                            if (entries_[ei].weight > wleft) continue;
                            cur.push_back(ei);
                            rec(size - 1, wleft - entries_[ei].weight, ei, cur);
                            cur.pop_back();
                        }
                    };
                std::vector<int> cur;
                rec(s, ew, 0, cur);
                for (const auto& ms : multis) {
                    auto trees = enumerate_ltrees(e_, entries_, tw, ms);
                    all.insert(all.end(), trees.begin(), trees.end());
                }
            }
            Component c;
            c.free = make_lbasis(std::move(all));
            comps_[{tw, ew}] = std::move(c);
        }
    }

    // operadic relation clusters with subtree fillings, bucketed by (tree w, entry w)
    std::map<std::pair<int, int>, std::vector<LElement>> op_clusters;
    for (const auto& [arity, rels] : pres.relations) {
        for (const auto& r : rels) {
            if (r.zero()) continue;
            // fillings drawn from the free bases already built
            std::function<void(int, int, int, std::vector<const LTree*>&)> rec =
                [&](int pos, int twleft, int ewleft, std::vector<const LTree*>& tup) {
                    if (pos == arity) {
                        if (twleft != 0 || ewleft != 0) return;
                        LElement el;
                        for (const auto& [tm, cc] : r.terms()) {
                            std::function<LNode(const TreeNode&)> conv =
                                [&](const TreeNode& n) -> LNode {
                                if (n.is_leaf()) return tup[n.leaf - 1]->root();
                                LNode v;
                                v.gen = n.gen;
                                v.basis = n.basis;
                                for (const auto& cn : n.children)
                                    v.children.push_back(conv(cn));
                                return v;
                            };
                            el += lcanonicalize(e_, entries_, conv(tm.root()), cc);
                        }
                        if (!el.zero()) {
                            const LTree& lead = el.terms().begin()->first;
                            op_clusters[{lead.weight(), lead.entry_weight()}].push_back(
                                std::move(el));
                        }
                        return;
                    }
                    for (int twp = 0; twp <= twleft; ++twp) {
                        for (int ewp = 0; ewp <= ewleft; ++ewp) {
                            auto it = comps_.find({twp, ewp});
                            if (it == comps_.end()) continue;
                            for (const auto& sub : it->second.free.elems) {
                                tup[pos] = &sub;
                                rec(pos + 1, twleft - twp, ewleft - ewp, tup);
                            }
                        }
                    }
                };
            for (int tw = 2; tw <= max_tw_; ++tw) {
                for (int ew = 0; ew <= max_ew_; ++ew) {
                    if (max_total_ >= 0 && tw + ew > max_total_) continue;
                    std::vector<const LTree*> tup(arity, nullptr);
                    rec(0, tw - 2, ew, tup);
                }
            }
        }
    }
    // deduplicate cluster elements per bucket
    for (auto& [key, vec] : op_clusters) {
        std::set<std::string> seen;
        std::vector<LElement> uniq;
        for (auto& el : vec) {
            std::ostringstream fp;
            for (const auto& [t, v] : el.terms()) fp << t.key() << ':' << rat_str(v) << ';';
            if (seen.insert(fp.str()).second) uniq.push_back(std::move(el));
        }
        vec = std::move(uniq);
    }

    // ideals: insert windows at every leaf of lower basis trees
    for (auto& [key, c] : comps_) {
        auto [tw, ew] = key;
        std::vector<SparseVec> rows;
        std::set<std::string> seen;
        auto insert_windows = [&](int host_tw, int host_ew, const std::vector<LElement>& windows,
                                  int win_ew) {
            (void)win_ew;
            auto hit = comps_.find({host_tw, host_ew});
            if (hit == comps_.end()) return;
            const LBasis& host = hit->second.free;
            for (const auto& u : host.elems) {
                std::vector<std::vector<std::vector<int>>> path_holder;
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
                lp(u.root(), path);
                for (const auto& p : paths) {
                    // the replaced leaf's entry weight must reconcile the grading
                    const LNode* leaf = &u.root();
                    for (int i : p) leaf = &leaf->children[i];
                    int lw = entries_[leaf->entry].weight;
                    if (host_ew - lw + win_ew != ew) continue;
                    for (const auto& win : windows) {
                        LElement out;
                        for (const auto& [twm, cc] : win.terms()) {
                            std::function<LNode(const LNode&, size_t)> splice =
                                [&](const LNode& n, size_t depth) -> LNode {
                                if (depth == p.size()) return twm.root();
                                LNode v = n;
                                v.children[p[depth]] = splice(n.children[p[depth]], depth + 1);
                                return v;
                            };
                            out += lcanonicalize(e_, entries_, splice(u.root(), 0), cc);
                        }
                        if (out.zero()) continue;
                        SparseVec v = c.free.to_vec(out);
                        std::ostringstream fp;
                        for (const auto& [i, val] : v) fp << i << ':' << rat_str(val) << ';';
                        if (seen.insert(fp.str()).second) rows.push_back(std::move(v));
                    }
                }
            }
        };
        for (const auto& [ckey, cvec] : op_clusters) {
            auto [ctw, cew] = ckey;
            if (ctw > tw) continue;
            for (int hew = 0; hew <= max_ew_; ++hew) insert_windows(tw - ctw, hew, cvec, cew);
        }
        if (extra_weight1_windows) {
            for (const auto& win : *extra_weight1_windows) {
                if (win.zero()) continue;
                int wtw = win.terms().begin()->first.weight();
                int wew = win.terms().begin()->first.entry_weight();
                std::vector<LElement> single{win};
                for (int hew = 0; hew <= max_ew_; ++hew)
                    insert_windows(tw - wtw, hew, single, wew);
            }
        }
        Matrix gen(static_cast<int>(rows.size()), c.free.dim());
        for (size_t i = 0; i < rows.size(); ++i) gen.row(static_cast<int>(i)) = rows[i];
        c.ideal = Subspace::span(gen);
        c.quot = quotient_by(c.ideal, c.free.dim());
    }
}

bool AppliedQuotient::has(int tw, int ew) const { return comps_.count({tw, ew}) > 0; }

const AppliedQuotient::Component& AppliedQuotient::comp(int tw, int ew) const {
    auto it = comps_.find({tw, ew});
    if (it == comps_.end())
        fail(ErrorCode::truncation, "applied quotient component outside truncation");
    return it->second;
}

const LBasis& AppliedQuotient::free_basis(int tw, int ew) const { return comp(tw, ew).free; }
const Subspace& AppliedQuotient::ideal(int tw, int ew) const { return comp(tw, ew).ideal; }
int AppliedQuotient::dim(int tw, int ew) const {
    auto it = comps_.find({tw, ew});
    return it == comps_.end() ? 0 : it->second.quot.quotient_dim;
}
SparseVec AppliedQuotient::reduce(int tw, int ew, const SparseVec& free_vec) const {
    return comp(tw, ew).quot.projection.apply(free_vec);
}
SparseVec AppliedQuotient::reduce_elem(int tw, int ew, const LElement& x) const {
    return reduce(tw, ew, comp(tw, ew).free.to_vec(x));
}
LElement AppliedQuotient::rep(int tw, int ew, const SparseVec& coords) const {
    return comp(tw, ew).free.from_vec(comp(tw, ew).quot.section.apply(coords));
}
LElement AppliedQuotient::rep1(int tw, int ew, int idx) const {
    SparseVec v;
    v[idx] = 1;
    return rep(tw, ew, v);
}

} // namespace koszul

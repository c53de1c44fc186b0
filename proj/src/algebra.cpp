#include "koszul/algebra.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace koszul {

void AlgebraPresentation::validate() const {
    operad.validate();
    if (gen_names.empty()) fail(ErrorCode::relation_space, "algebra needs at least one generator");
    if (!gen_degrees.empty() && gen_degrees.size() != gen_names.size())
        fail(ErrorCode::structural, "generator degree list length mismatch");
    if (max_weight < 1) fail(ErrorCode::truncation, "max_weight must be >= 1");
    for (const auto& rel : relations) {
        for (const auto& t : rel) {
            if (t.gen < 0 || t.gen >= static_cast<int>(operad.generators.size()))
                fail(ErrorCode::relation_space, "relation references unknown operation");
            const GeneratorSymbol& g = operad.generators[t.gen];
            if (t.basis < 0 || t.basis >= g.dim)
                fail(ErrorCode::relation_space, "relation references unknown basis vector");
            if (static_cast<int>(t.args.size()) != g.arity)
                fail(ErrorCode::relation_space,
                     "relation term arity mismatch (relations live in E(V))");
            for (int a : t.args)
                if (a < 0 || a >= static_cast<int>(gen_names.size()))
                    fail(ErrorCode::relation_space, "relation references unknown generator");
        }
    }
}

namespace {

// leaf counts reachable by trees of the given weight
std::set<int> leaf_counts(const SModule& e, int w) {
    std::set<int> cur{1};
    for (int step = 0; step < w; ++step) {
        std::set<int> next;
        for (int l : cur)
            for (const auto& g : e) next.insert(l + g.arity - 1);
        cur = std::move(next);
    }
    return cur;
}

void multisets_of(int nentries, int size, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out, int start = 0) {
    if (size == 0) {
        out.push_back(cur);
        return;
    }
    for (int ei = start; ei < nentries; ++ei) {
        cur.push_back(ei);
        multisets_of(nentries, size - 1, cur, out, ei);
        cur.pop_back();
    }
}

LBasis build_free_component(const SModule& e, const LTable& t, int w) {
    std::vector<LTree> all;
    for (int s : leaf_counts(e, w)) {
        std::vector<std::vector<int>> multis;
        std::vector<int> cur;
        multisets_of(static_cast<int>(t.size()), s, cur, multis);
        for (const auto& ms : multis) {
            auto trees = enumerate_ltrees(e, t, w, ms);
            all.insert(all.end(), trees.begin(), trees.end());
        }
    }
    return make_lbasis(std::move(all));
}

// replaces the leaf at `path` by `repl` (raw; caller canonicalizes)
LNode splice_at(const LNode& n, const std::vector<int>& path, size_t depth, const LNode& repl) {
    if (depth == path.size()) return repl;
    LNode v = n;
    v.children[path[depth]] = splice_at(n.children[path[depth]], path, depth + 1, repl);
    return v;
}

void leaf_paths(const LNode& n, std::vector<int>& path, std::vector<std::vector<int>>& out) {
    if (n.is_leaf()) {
        out.push_back(path);
        return;
    }
    for (size_t i = 0; i < n.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        leaf_paths(n.children[i], path, out);
        path.pop_back();
    }
}

} // namespace

MonogeneAlgebra::MonogeneAlgebra(AlgebraPresentation pres) : pres_(std::move(pres)) {
    pres_.validate();
    const SModule& e = pres_.operad.generators;
    int w_max = pres_.max_weight;

    for (size_t i = 0; i < pres_.gen_names.size(); ++i) {
        LEntry en;
        en.weight = 0;
        en.degree = pres_.gen_degrees.empty() ? 0 : pres_.gen_degrees[i];
        en.name = pres_.gen_names[i];
        ventries_.push_back(en);
    }

    comps_.resize(w_max + 1);
    for (int w = 0; w <= w_max; ++w) comps_[w].free = build_free_component(e, ventries_, w);

    // relation elements inside weight 1
    std::vector<LElement> rel_elems;
    for (const auto& rel : pres_.relations) {
        LElement el;
        for (const auto& t : rel) {
            std::vector<LNode> ch;
            for (int a : t.args) ch.push_back(LNode::leaf(a));
            el += lcanonicalize(e, ventries_, LNode::vertex(t.gen, t.basis, std::move(ch)),
                                t.coef);
        }
        if (!el.zero()) rel_elems.push_back(std::move(el));
    }
    {
        Matrix rows(static_cast<int>(rel_elems.size()), comps_[1].free.dim());
        for (size_t i = 0; i < rel_elems.size(); ++i)
            rows.row(static_cast<int>(i)) = comps_[1].free.to_vec(rel_elems[i]);
        relspace_ = Subspace::span(rows);
    }

    // operadic relation clusters gamma(r; T_1..T_m) with arbitrary labeled
    // subtrees substituted at the relation inputs, bucketed by total weight
    std::vector<std::vector<LElement>> op_clusters(w_max + 1); // index: total weight
    for (const auto& [arity, rels] : pres_.operad.relations) {
        for (const auto& r : rels) {
            if (r.zero()) continue;
            for (int total = 2; total <= w_max; ++total) {
                int fill = total - 2;
                // tuples of basis subtrees with the given total weight
                std::vector<std::vector<const LTree*>> tuples;
                std::vector<const LTree*> cur(arity, nullptr);
                std::function<void(int, int)> rec = [&](int pos, int left) {
                    if (pos == arity) {
                        if (left == 0) tuples.push_back(cur);
                        return;
                    }
                    for (int wv = 0; wv <= left; ++wv) {
                        for (const auto& sub : comps_[wv].free.elems) {
                            cur[pos] = &sub;
                            rec(pos + 1, left - wv);
                        }
                    }
                };
                rec(0, fill);
                for (const auto& tup : tuples) {
                    LElement el;
                    for (const auto& [tm, c] : r.terms()) {
                        std::function<LNode(const TreeNode&)> conv =
                            [&](const TreeNode& n) -> LNode {
                            if (n.is_leaf()) return tup[n.leaf - 1]->root();
                            LNode v;
                            v.gen = n.gen;
                            v.basis = n.basis;
                            for (const auto& cnode : n.children)
                                v.children.push_back(conv(cnode));
                            return v;
                        };
                        el += lcanonicalize(e, ventries_, conv(tm.root()), c);
                    }
                    if (!el.zero()) op_clusters[total].push_back(std::move(el));
                }
            }
        }
    }

    // ideals: relation clusters inserted at every leaf of every lower basis tree
    for (int w = 0; w <= w_max; ++w) {
        std::vector<SparseVec> rows;
        std::set<std::string> seen;
        auto insert_windows = [&](int host_w, const std::vector<LElement>& windows) {
            if (host_w < 0) return;
            const LBasis& host = comps_[host_w].free;
            for (const auto& u : host.elems) {
                std::vector<std::vector<int>> paths;
                std::vector<int> path;
                leaf_paths(u.root(), path, paths);
                for (const auto& p : paths) {
                    for (const auto& win : windows) {
                        LElement out;
                        for (const auto& [tw, c] : win.terms())
                            out += lcanonicalize(e, ventries_,
                                                 splice_at(u.root(), p, 0, tw.root()), c);
                        if (out.zero()) continue;
                        SparseVec v = comps_[w].free.to_vec(out);
                        std::ostringstream fp;
                        for (const auto& [i, val] : v) fp << i << ':' << rat_str(val) << ';';
                        if (seen.insert(fp.str()).second) rows.push_back(std::move(v));
                    }
                }
            }
        };
        for (int v = 2; v <= w; ++v) insert_windows(w - v, op_clusters[v]);
        insert_windows(w - 1, rel_elems);
        Matrix gen(static_cast<int>(rows.size()), comps_[w].free.dim());
        for (size_t i = 0; i < rows.size(); ++i) gen.row(static_cast<int>(i)) = rows[i];
        comps_[w].ideal = Subspace::span(gen);
        comps_[w].quot = quotient_by(comps_[w].ideal, comps_[w].free.dim());
    }

    // A entry table
    for (int w = 0; w <= w_max; ++w) {
        for (int i = 0; i < comps_[w].quot.quotient_dim; ++i) {
            LEntry en;
            en.weight = w;
            LElement r = rep1(w, i);
            en.degree = r.zero() ? 0 : r.terms().begin()->first.degree();
            en.name = basis_label(w, i);
            aid_[{w, i}] = static_cast<int>(aentries_.size());
            ainfo_.emplace_back(w, i);
            aentries_.push_back(en);
        }
    }
}

void MonogeneAlgebra::check_weight(int w) const {
    if (w < 0 || w > pres_.max_weight)
        fail(ErrorCode::truncation,
             "weight " + std::to_string(w) + " exceeds the bound " +
                 std::to_string(pres_.max_weight));
}

const MonogeneAlgebra::Component& MonogeneAlgebra::comp(int w) const {
    check_weight(w);
    return comps_[w];
}

int MonogeneAlgebra::dim(int w) const {
    if (w < 0 || w > pres_.max_weight) return 0;
    return comps_[w].quot.quotient_dim;
}

std::vector<int> MonogeneAlgebra::dims() const {
    std::vector<int> out;
    for (int w = 0; w <= pres_.max_weight; ++w) out.push_back(dim(w));
    return out;
}

const LBasis& MonogeneAlgebra::free_basis(int w) const { return comp(w).free; }
const Subspace& MonogeneAlgebra::ideal(int w) const { return comp(w).ideal; }

SparseVec MonogeneAlgebra::reduce(int w, const SparseVec& free_vec) const {
    return comp(w).quot.projection.apply(free_vec);
}

SparseVec MonogeneAlgebra::reduce_elem(int w, const LElement& x) const {
    return reduce(w, comp(w).free.to_vec(x));
}

LElement MonogeneAlgebra::rep(int w, const SparseVec& coords) const {
    return comp(w).free.from_vec(comp(w).quot.section.apply(coords));
}

LElement MonogeneAlgebra::rep1(int w, int idx) const {
    SparseVec v;
    v[idx] = 1;
    return rep(w, v);
}

std::string MonogeneAlgebra::basis_label(int w, int idx) const {
    LElement r = rep1(w, idx);
    std::string s;
    for (const auto& [t, c] : r.terms()) {
        if (!s.empty()) s += " + ";
        std::function<std::string(const LNode&)> render = [&](const LNode& n) -> std::string {
            if (n.is_leaf()) return ventries_[n.entry].name;
            std::string os = egens()[n.gen].name;
            if (n.basis > 0) os += "#" + std::to_string(n.basis);
            os += "(";
            for (size_t i = 0; i < n.children.size(); ++i) {
                if (i) os += ", ";
                os += render(n.children[i]);
            }
            os += ")";
            return os;
        };
        if (!(c == 1)) s += "(" + rat_str(c) + ")*";
        s += render(t.root());
    }
    return s.empty() ? "0" : s;
}

SparseVec MonogeneAlgebra::apply_corolla(int gen, int basis,
                                         const std::vector<std::pair<int, SparseVec>>& args) const {
    const SModule& e = egens();
    if (gen < 0 || gen >= static_cast<int>(e.size()))
        fail(ErrorCode::structural, "apply_corolla: unknown generator");
    if (static_cast<int>(args.size()) != e[gen].arity)
        fail(ErrorCode::arity_mismatch, "apply_corolla: argument count");
    int w = 1;
    for (const auto& [aw, av] : args) w += aw;
    check_weight(w);

    // expand representatives and multiply out
    std::vector<LElement> reps;
    for (const auto& [aw, av] : args) reps.push_back(rep(aw, av));
    LElement out;
    std::function<void(size_t, std::vector<LNode>&, const Rat&)> recur =
        [&](size_t i, std::vector<LNode>& ch, const Rat& c) {
            if (i == reps.size()) {
                out += lcanonicalize(e, ventries_, LNode::vertex(gen, basis, ch), c);
                return;
            }
            for (const auto& [t, tc] : reps[i].terms()) {
                ch.push_back(t.root());
                recur(i + 1, ch, c * tc);
                ch.pop_back();
            }
        };
    std::vector<LNode> ch;
    recur(0, ch, Rat(1));
    return reduce_elem(w, out);
}

int MonogeneAlgebra::aentry_id(int w, int idx) const {
    auto it = aid_.find({w, idx});
    if (it == aid_.end()) fail(ErrorCode::structural, "unknown algebra entry");
    return it->second;
}

// ---------------------------------------------------------------------------
// Koszul dual coalgebra
// ---------------------------------------------------------------------------

KoszulDualCoalgebra::KoszulDualCoalgebra(std::shared_ptr<const MonogeneAlgebra> a,
                                         std::shared_ptr<const TruncatedOperad> abstract_operad,
                                         std::shared_ptr<const TruncatedCooperad> abstract_cooperad)
    : a_(std::move(a)), pabs_(std::move(abstract_operad)), cabs_(std::move(abstract_cooperad)),
      se_(suspend(a_->egens())) {
    int w_max = a_->max_weight();
    const LTable& vt = a_->ventries();

    // transport the relation space to the suspended weight-one component
    std::map<int, Subspace> override1;
    {
        LBasis sfb = make_lbasis(
            [&] {
                std::vector<LTree> trees;
                for (const auto& t : a_->free_basis(1).elems) {
                    LElement c = lcanonicalize(se_, vt, t.root());
                    for (const auto& [tr, coef] : c.terms()) trees.push_back(tr);
                }
                return trees;
            }());
        const Subspace& s = a_->relation_space();
        Matrix rows(s.dim(), sfb.dim());
        const LBasis& efb = a_->free_basis(1);
        for (int i = 0; i < s.dim(); ++i)
            for (const auto& [j, v] : s.basis().row(i))
                rows.add(i, sfb.find_key(efb.elems[j].key()), v);
        override1[0] = Subspace::span(rows);
    }
    tower_ = std::make_unique<AppliedTower>(se_, vt, a_->pres().operad, cabs_, w_max, 0, -1,
                                            &override1);

    for (int w = 0; w <= w_max; ++w) {
        for (int i = 0; i < tower_->dim(w, 0); ++i) {
            LEntry en;
            en.weight = w;
            LElement r = rep1(w, i);
            en.degree = r.zero() ? w : r.terms().begin()->first.degree();
            en.name = basis_label(w, i);
            cid_[{w, i}] = static_cast<int>(centries_.size());
            cinfo_.emplace_back(w, i);
            centries_.push_back(en);
        }
    }
}

int KoszulDualCoalgebra::dim(int w) const {
    if (w < 0 || w > a_->max_weight()) return 0;
    return tower_->dim(w, 0);
}

std::vector<int> KoszulDualCoalgebra::dims() const {
    std::vector<int> out;
    for (int w = 0; w <= a_->max_weight(); ++w) out.push_back(dim(w));
    return out;
}

const LBasis& KoszulDualCoalgebra::free_basis(int w) const {
    a_->check_weight(w);
    return tower_->free_basis(w, 0);
}
const Subspace& KoszulDualCoalgebra::component(int w) const {
    a_->check_weight(w);
    return tower_->component(w, 0);
}
const Matrix& KoszulDualCoalgebra::complement_projection(int w) const {
    a_->check_weight(w);
    return tower_->complement_projection(w, 0);
}

SparseVec KoszulDualCoalgebra::to_coords(int w, const SparseVec& free_vec) const {
    a_->check_weight(w);
    return tower_->to_coords(w, 0, free_vec);
}

SparseVec KoszulDualCoalgebra::rep_free(int w, const SparseVec& coords) const {
    a_->check_weight(w);
    return tower_->rep_free(w, 0, coords);
}

LElement KoszulDualCoalgebra::rep1(int w, int idx) const {
    a_->check_weight(w);
    return tower_->rep1(w, 0, idx);
}

std::string KoszulDualCoalgebra::basis_label(int w, int idx) const {
    LElement r = rep1(w, idx);
    const LTable& vt = a_->ventries();
    std::string s;
    for (const auto& [t, c] : r.terms()) {
        if (!s.empty()) s += " + ";
        std::function<std::string(const LNode&)> render = [&](const LNode& n) -> std::string {
            if (n.is_leaf()) return vt[n.entry].name;
            std::string os = se_[n.gen].name;
            if (n.basis > 0) os += "#" + std::to_string(n.basis);
            os += "(";
            for (size_t i = 0; i < n.children.size(); ++i) {
                if (i) os += ", ";
                os += render(n.children[i]);
            }
            os += ")";
            return os;
        };
        if (!(c == 1)) s += "(" + rat_str(c) + ")*";
        s += render(t.root());
    }
    return s.empty() ? "0" : s;
}

int KoszulDualCoalgebra::centry_id(int w, int idx) const {
    auto it = cid_.find({w, idx});
    if (it == cid_.end()) fail(ErrorCode::structural, "unknown coalgebra entry");
    return it->second;
}

} // namespace koszul

namespace koszul {

// ---------------------------------------------------------------------------
// Invariant realization and coalgebra decomposition maps
// ---------------------------------------------------------------------------

InvariantSpace::InvariantSpace(const TruncatedCooperad& cabs, int arity, int cweight,
                               const LTable& entries, std::vector<std::vector<int>> tuples)
    : cabs_(&cabs), arity_(arity), cweight_(cweight), entries_(&entries) {
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    int d = cabs.dim(arity, cweight);
    for (auto& tup : tuples) {
        // averaging projector over the stabilizer, twisted by the Koszul signs
        std::vector<int> degs;
        for (int id : tup) degs.push_back(entries[id].degree);
        Matrix pi(d, d);
        int count = 0;
        for (const auto& sigma : all_perms(arity)) {
            bool stab = true;
            for (int i = 0; i < arity && stab; ++i)
                if (tup[sigma[i]] != tup[i]) stab = false;
            if (!stab) continue;
            ++count;
            int sgn = koszul_sign(degs, sigma);
            Matrix m(d, d);
            for (int j = 0; j < d; ++j) {
                SparseVec unit;
                unit[j] = 1;
                SparseVec img = cabs.act(arity, cweight, sigma, unit);
                for (const auto& [r, v] : img) m.add(r, j, v);
            }
            pi = pi + m.scaled(sgn);
        }
        pi = pi.scaled(Rat(1) / count);
        Subspace img = Subspace::span(rref(pi.transpose()).mat);
        if (img.dim() == 0) continue;
        keys_.push_back(tup);
        offsets_.push_back(total_);
        total_ += img.dim();
        images_.push_back(std::move(img));
        projectors_.push_back(std::move(pi));
    }
}

SparseVec InvariantSpace::normalize(const SparseVec& outer,
                                    const std::vector<int>& slot_entries) const {
    std::vector<int> keys = slot_entries;
    Perm sigma = sorting_perm(keys);
    std::vector<int> degs;
    for (int id : slot_entries) degs.push_back((*entries_)[id].degree);
    int sgn = koszul_sign(degs, sigma);
    std::vector<int> sorted(slot_entries.size());
    for (size_t i = 0; i < slot_entries.size(); ++i) sorted[sigma[i]] = slot_entries[i];

    SparseVec acted = cabs_->act(arity_, cweight_, sigma, outer);
    for (size_t comp = 0; comp < keys_.size(); ++comp) {
        if (keys_[comp] != sorted) continue;
        SparseVec projected = projectors_[comp].apply(acted);
        auto coords = images_[comp].coordinates(projected);
        if (!coords)
            fail(ErrorCode::internal_consistency, "invariant projection left its image");
        SparseVec out;
        for (const auto& [i, v] : *coords) out[offsets_[comp] + i] = v * sgn;
        return out;
    }
    // projector image was empty: the class vanishes
    return SparseVec{};
}

std::string InvariantSpace::label(int idx) const {
    for (size_t comp = 0; comp < keys_.size(); ++comp) {
        if (idx >= offsets_[comp] &&
            (comp + 1 == keys_.size() || idx < offsets_[comp + 1])) {
            std::string s = "inv[";
            for (size_t i = 0; i < keys_[comp].size(); ++i) {
                if (i) s += ",";
                s += (*entries_)[keys_[comp][i]].name;
            }
            s += "]#" + std::to_string(idx - offsets_[comp]);
            return s;
        }
    }
    return "inv#" + std::to_string(idx);
}

CoproductComponent coproduct_component(const KoszulDualCoalgebra& c, int arity, int w) {
    const MonogeneAlgebra& a = c.algebra();
    a.check_weight(w);
    if (arity < 1) fail(ErrorCode::index_out_of_range, "coproduct arity must be >= 1");
    CoproductComponent out;
    int dw = c.dim(w);
    if (arity == 1) {
        // counit part: the identity on the component
        out.matrix = Matrix::identity(dw);
        return out;
    }
    const TruncatedCooperad& cabs = c.abstract_cooperad();
    bool binary = c.algebra().pres().operad.binary();
    if (!binary) {
        out.matrix = Matrix(0, dw);
        return out; // unary operads have no arity >= 2 coproduct components
    }
    int cw = arity - 1;
    if (cabs.dim(arity, cw) == 0 || cw > w) {
        out.matrix = Matrix(0, dw);
        return out;
    }

    // collect all entry tuples reachable by weight: pieces of total weight w - cw
    std::vector<std::vector<int>> tuples;
    std::function<void(int, int, std::vector<int>&)> gen_tup = [&](int slots, int left,
                                                                   std::vector<int>& cur) {
        if (slots == 0) {
            if (left == 0) tuples.push_back(cur);
            return;
        }
        for (int id = 0; id < static_cast<int>(c.centries().size()); ++id) {
            int ww = c.centries()[id].weight;
            if (ww > left) continue;
            if (!cur.empty() && id < cur.back()) continue; // sorted tuples only
            cur.push_back(id);
            gen_tup(slots - 1, left - ww, cur);
            cur.pop_back();
        }
    };
    std::vector<int> cur;
    gen_tup(arity, w - cw, cur);
    out.target = InvariantSpace(cabs, arity, cw, c.centries(), tuples);
    out.matrix = Matrix(out.target.dim(), dw);

    const SModule& se = c.sgens();
    const LTable& vt = a.ventries();
    for (int col = 0; col < dw; ++col) {
        LElement x = c.rep1(w, col);
        // bucket splits with exactly `arity` pieces and cluster weight cw by the
        // piece weights; express collectively, then push into the invariant basis
        struct Bucket {
            std::vector<int> pw;
            SparseVec vec; // flat (numbered-cluster, piece indices...)
            std::vector<int> dims;
        };
        std::map<std::string, Bucket> buckets;
        for (const auto& [t, coef] : x.terms()) {
            for (const auto& cs : lcluster_splits(se, vt, t)) {
                if (cs.cluster_weight != cw ||
                    static_cast<int>(cs.pieces.size()) != arity)
                    continue;
                std::vector<LTree> pieces;
                std::vector<int> pw;
                for (const auto& p : cs.pieces) {
                    pieces.emplace_back(se, vt, p);
                    pw.push_back(pieces.back().weight());
                }
                std::ostringstream key;
                for (int b : pw) key << b << ',';
                Bucket& bk = buckets[key.str()];
                if (bk.dims.empty()) {
                    bk.pw = pw;
                    bk.dims.push_back(cabs.free_basis(arity, cw).dim());
                    for (int b : pw) bk.dims.push_back(c.free_basis(b).dim());
                }
                OperadElement num = canonicalize(se, cluster_to_numbered(cs.cluster));
                for (const auto& [mono, mc] : num.terms()) {
                    long flat = cabs.free_basis(arity, cw).find(mono);
                    for (int pi = 0; pi < arity; ++pi)
                        flat = flat * bk.dims[1 + pi] + c.free_basis(pw[pi]).find(pieces[pi]);
                    Rat val = coef * mc * cs.sign;
                    auto it = bk.vec.find(static_cast<int>(flat));
                    if (it == bk.vec.end()) bk.vec.emplace(static_cast<int>(flat), val);
                    else {
                        it->second += val;
                        if (is_zero(it->second)) bk.vec.erase(it);
                    }
                }
            }
        }
        for (auto& [key, bk] : buckets) {
            if (bk.vec.empty()) continue;
            std::vector<const Subspace*> facs{&cabs.component(arity, cw)};
            for (int b : bk.pw) facs.push_back(&c.component(b));
            auto expansion = express_in_tensor(bk.vec, facs, bk.dims);
            for (const auto& [multi, coef2] : expansion) {
                SparseVec outer;
                outer[multi[0]] = 1;
                std::vector<int> slot_entries;
                for (int pi = 0; pi < arity; ++pi)
                    slot_entries.push_back(c.centry_id(bk.pw[pi], multi[1 + pi]));
                SparseVec img = out.target.normalize(outer, slot_entries);
                for (const auto& [r, v] : img) out.matrix.add(r, col, v * coef2);
            }
        }
    }
    return out;
}

McReport mc_check_varkappa(const MonogeneAlgebra& a, const KoszulDualCoalgebra& c,
                           const TwistFaults& faults) {
    McReport rep;
    const SModule& se = c.sgens();
    const LTable& vt = a.ventries();
    for (int w = 1; w <= a.max_weight(); ++w) {
        for (int idx = 0; idx < c.dim(w); ++idx) {
            SparseVec acc; // in A(1) coordinates when w == 1, A(w) cannot receive otherwise
            LElement x = c.rep1(w, idx);
            for (const auto& [t, coef] : x.terms()) {
                for (const auto& cs : lcluster_splits(se, vt, t)) {
                    if (cs.cluster_weight != 1) continue;
                    bool all_bare = true;
                    for (const auto& p : cs.pieces)
                        if (!p.is_leaf()) all_bare = false;
                    if (!all_bare) continue;
                    const LNode& root = cs.cluster;
                    std::vector<std::pair<int, SparseVec>> args;
                    for (const auto& p : cs.pieces) {
                        SparseVec av = a.reduce_elem(0, lcanonicalize(a.egens(), vt, p));
                        args.emplace_back(0, av);
                    }
                    int sign = cs.sign;
                    if (faults.mc_flip_shape_sign && root.basis > 0) sign = -sign;
                    SparseVec res = a.apply_corolla(root.gen, root.basis, args);
                    vec_axpy(acc, Rat(sign) * coef, res);
                }
            }
            if (!acc.empty()) {
                rep.ok = false;
                rep.detail = "star_kappa(varkappa) nonzero on " + c.basis_label(w, idx) +
                             " (weight " + std::to_string(w) + ")";
                return rep;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Dual algebra presentation
// ---------------------------------------------------------------------------

AlgebraPresentation koszul_dual_algebra_presentation(const MonogeneAlgebra& a) {
    const AlgebraPresentation& pres = a.pres();
    if (!pres.operad.binary() && !pres.operad.unary_only())
        fail(ErrorCode::unsupported_presentation,
             "dual algebra requires a binary (or unary) operad");
    AlgebraPresentation dual;
    dual.operad = koszul_dual_operad(pres.operad);
    dual.name = pres.name + "!";
    dual.max_weight = pres.max_weight;
    for (const auto& n : pres.gen_names) dual.gen_names.push_back(n + "*");
    dual.gen_degrees = pres.gen_degrees;

    // evaluation pairing between the dual and primal weight-one components:
    // Theta(xi, eta) = sum over sigma of the raw evaluation of sigma.xi against eta
    const SModule& e = pres.operad.generators;
    const SModule& ed = dual.operad.generators;
    const LTable& vt = a.ventries();
    LTable vtd;
    for (size_t i = 0; i < vt.size(); ++i) {
        LEntry en = vt[i];
        en.name += "*";
        vtd.push_back(en);
    }
    LBasis dual_basis = build_free_component(ed, vtd, 1);
    const LBasis& primal_basis = a.free_basis(1);

    Matrix theta(dual_basis.dim(), primal_basis.dim());
    for (int r = 0; r < dual_basis.dim(); ++r) {
        const LNode& xi = dual_basis.elems[r].root();
        int k = static_cast<int>(xi.children.size());
        std::vector<int> args;
        for (const auto& ch : xi.children) args.push_back(ch.entry);
        for (const auto& sigma : all_perms(k)) {
            // sigma . (b; t) = koszul * (action(inv sigma) b; t permuted)
            Matrix m = ed[xi.gen].action(perm_inverse(sigma));
            int b2 = -1;
            Rat coef;
            for (int rr = 0; rr < m.rows(); ++rr) {
                Rat v = m.get(rr, xi.basis);
                if (!is_zero(v)) {
                    b2 = rr;
                    coef = v;
                }
            }
            if (b2 < 0) continue;
            std::vector<int> perm_args(k);
            for (int i = 0; i < k; ++i) perm_args[sigma[i]] = args[i];
            // evaluate against each primal basis tree
            for (int cidx = 0; cidx < primal_basis.dim(); ++cidx) {
                const LNode& eta = primal_basis.elems[cidx].root();
                if (eta.gen != xi.gen || eta.basis != b2) continue;
                bool match = true;
                for (int i = 0; i < k && match; ++i)
                    if (eta.children[i].entry != perm_args[i]) match = false;
                if (match) theta.add(r, cidx, coef);
            }
        }
    }

    AnnihilatorResult ann = annihilator(a.relation_space(), theta);
    for (int i = 0; i < ann.annihilator.dim(); ++i) {
        std::vector<AlgebraPresentation::RelTerm> rel;
        for (const auto& [j, v] : ann.annihilator.basis().row(i)) {
            const LNode& n = dual_basis.elems[j].root();
            AlgebraPresentation::RelTerm t;
            t.coef = v;
            t.gen = n.gen;
            t.basis = n.basis;
            for (const auto& ch : n.children) t.args.push_back(ch.entry);
            rel.push_back(std::move(t));
        }
        if (!rel.empty()) dual.relations.push_back(std::move(rel));
    }
    return dual;
}

AlgebraContext build_algebra_context(AlgebraPresentation pres) {
    pres.validate();
    AlgebraContext ctx;
    OperadPresentation op = pres.operad;
    // cluster conditions reach arity W for binary presentations
    if (op.binary()) {
        op.max_arity = std::max(2, pres.max_weight);
        op.max_weight = 0;
    } else {
        op.max_arity = 2;
        if (op.max_weight <= 0 || op.max_weight < pres.max_weight)
            op.max_weight = pres.max_weight;
    }
    ctx.op = std::make_shared<TruncatedOperad>(op);
    ctx.coop = std::make_shared<TruncatedCooperad>(ctx.op);
    ctx.algebra = std::make_shared<MonogeneAlgebra>(std::move(pres));
    ctx.dual_coalgebra = std::make_shared<KoszulDualCoalgebra>(ctx.algebra, ctx.op, ctx.coop);
    return ctx;
}

} // namespace koszul

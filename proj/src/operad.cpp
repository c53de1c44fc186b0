#include "koszul/operad.hpp"

#include <algorithm>

namespace koszul {

bool OperadPresentation::binary() const {
    for (const auto& g : generators)
        if (g.arity != 2) return false;
    return !generators.empty();
}

bool OperadPresentation::unary_only() const {
    for (const auto& g : generators)
        if (g.arity != 1) return false;
    return !generators.empty();
}

int OperadPresentation::resolved_max_weight() const {
    if (max_weight > 0) return max_weight;
    if (generators.empty()) return 1;
    int min_arity = 1 << 30;
    for (const auto& g : generators) min_arity = std::min(min_arity, g.arity);
    if (min_arity >= 2) return max_arity - 1; // a tree with w vertices has >= w+1 leaves
    fail(ErrorCode::truncation,
         "presentation with arity-1 generators needs an explicit max_weight");
}

void OperadPresentation::validate() const {
    if (max_arity < 2) fail(ErrorCode::truncation, "max_arity must be >= 2");
    for (const auto& g : generators) g.validate();
    for (const auto& [n, rels] : relations) {
        for (const auto& r : rels) {
            if (r.zero()) continue;
            if (r.arity() != n) fail(ErrorCode::arity_mismatch, "relation arity mismatch");
            for (const auto& [t, c] : r.terms())
                if (t.weight() != 2)
                    fail(ErrorCode::weight_homogeneity,
                         "relation term of weight " + std::to_string(t.weight()) +
                             " (relations must lie in weight 2)");
        }
    }
}

TruncatedOperad::TruncatedOperad(OperadPresentation pres) : pres_(std::move(pres)) {
    pres_.validate();
    const SModule& e = pres_.generators;
    int max_n = pres_.max_arity;
    int max_w = pres_.resolved_max_weight();

    // free bases for every component in range
    for (int n = 1; n <= max_n; ++n) {
        for (int w = 0; w <= max_w; ++w) {
            FreeBasis fb = make_free_basis(e, n, w);
            if (fb.dim() == 0 && !(n == 1 && w == 0)) continue;
            Component c;
            c.free = std::move(fb);
            comps_[{n, w}] = std::move(c);
        }
    }

    // ideal spans per weight; weight 2 is the symmetric closure of the relations
    std::map<std::pair<int, int>, std::vector<SparseVec>> spans;
    for (const auto& [n, rels] : pres_.relations) {
        if (n > max_n) continue;
        auto it = comps_.find({n, 2});
        if (it == comps_.end()) {
            if (!rels.empty()) fail(ErrorCode::relation_space, "relations outside truncation");
            continue;
        }
        const FreeBasis& fb = it->second.free;
        for (const auto& r : rels) {
            if (r.zero()) continue;
            for (const auto& sigma : all_perms(n)) {
                OperadElement img = apply_permutation(e, r, sigma);
                if (!img.zero()) spans[{n, 2}].push_back(fb.to_vec(img));
            }
        }
    }

    // spans of grafts are not symmetric-group closed on their own (grafting places
    // leaf blocks consecutively); close each span under the adjacent transpositions.
    auto close_under_action = [&](int n, const FreeBasis& fb, Subspace s) -> Subspace {
        bool grew = true;
        while (grew) {
            grew = false;
            for (int i = 0; i + 1 < n; ++i) {
                Perm t = perm_transposition(n, i, i + 1);
                Matrix gens(2 * s.dim(), fb.dim());
                for (int r = 0; r < s.dim(); ++r) {
                    gens.row(r) = s.basis().row(r);
                    OperadElement img =
                        apply_permutation(e, fb.from_vec(s.basis().row(r)), t);
                    gens.row(s.dim() + r) = fb.to_vec(img);
                }
                Subspace bigger = Subspace::span(gens);
                if (bigger.dim() > s.dim()) {
                    s = std::move(bigger);
                    grew = true;
                }
            }
        }
        return s;
    };

    auto ideal_of = [&](int n, int w) -> Subspace& { return comps_.at({n, w}).ideal; };

    for (auto& [key, c] : comps_) {
        c.ideal = Subspace(c.free.dim());
    }
    // weight-2 ideals
    for (auto& [key, vecs] : spans) {
        Matrix gen(static_cast<int>(vecs.size()), comps_.at(key).free.dim());
        for (size_t i = 0; i < vecs.size(); ++i) gen.row(static_cast<int>(i)) = vecs[i];
        ideal_of(key.first, key.second) = Subspace::span(gen);
    }

    // corollas: all single-vertex elements
    struct Corolla {
        int arity;
        OperadElement elem;
    };
    std::vector<Corolla> corollas;
    for (size_t gi = 0; gi < e.size(); ++gi) {
        for (int b = 0; b < e[gi].dim; ++b) {
            std::vector<TreeNode> ch;
            for (int l = 1; l <= e[gi].arity; ++l) ch.push_back(TreeNode::leaf_node(l));
            OperadElement el(e[gi].arity);
            el.add_term(TreeMonomial(e, TreeNode::vertex(static_cast<int>(gi), b, ch)), 1);
            corollas.push_back({e[gi].arity, std::move(el)});
        }
    }

    // higher weights: (R)^(w) = sum of grafts of (R)^(w-1) with corollas, both sides
    for (int w = 3; w <= max_w; ++w) {
        std::map<std::pair<int, int>, std::vector<SparseVec>> gens;
        for (auto& [key, c] : comps_) {
            auto [n1, w1] = key;
            if (w1 != w - 1 || c.ideal.dim() == 0) continue;
            for (int i = 0; i < c.ideal.dim(); ++i) {
                OperadElement x = c.free.from_vec(c.ideal.basis().row(i));
                for (const auto& cor : corollas) {
                    int n = n1 + cor.arity - 1;
                    if (n > max_n) continue;
                    auto target = comps_.find({n, w});
                    if (target == comps_.end()) continue;
                    for (int slot = 1; slot <= n1; ++slot) {
                        OperadElement g1 = graft(e, x, slot, cor.elem);
                        if (!g1.zero()) gens[{n, w}].push_back(target->second.free.to_vec(g1));
                    }
                    for (int slot = 1; slot <= cor.arity; ++slot) {
                        OperadElement g2 = graft(e, cor.elem, slot, x);
                        if (!g2.zero()) gens[{n, w}].push_back(target->second.free.to_vec(g2));
                    }
                }
            }
        }
        for (auto& [key, vecs] : gens) {
            Matrix gen(static_cast<int>(vecs.size()), comps_.at(key).free.dim());
            for (size_t i = 0; i < vecs.size(); ++i) gen.row(static_cast<int>(i)) = vecs[i];
            ideal_of(key.first, key.second) = close_under_action(
                key.first, comps_.at(key).free, Subspace::span(gen));
        }
    }

    // quotient maps
    for (auto& [key, c] : comps_) c.quot = quotient_by(c.ideal, c.free.dim());

    // drop empty quotient components except the unit slot
    for (auto it = comps_.begin(); it != comps_.end();) {
        if (it->second.quot.quotient_dim == 0 && it->first != std::make_pair(1, 0))
            it = comps_.erase(it);
        else
            ++it;
    }
}

const TruncatedOperad::Component& TruncatedOperad::comp(int arity, int weight) const {
    auto it = comps_.find({arity, weight});
    if (it == comps_.end()) check_truncation(arity, weight);
    if (it == comps_.end())
        fail(ErrorCode::structural, "empty operad component requested");
    return it->second;
}

void TruncatedOperad::check_truncation(int arity, int weight) const {
    if (arity > pres_.max_arity)
        fail(ErrorCode::truncation,
             "arity " + std::to_string(arity) + " exceeds truncation bound " +
                 std::to_string(pres_.max_arity));
    if (weight > pres_.resolved_max_weight())
        fail(ErrorCode::truncation,
             "weight " + std::to_string(weight) + " exceeds truncation bound " +
                 std::to_string(pres_.resolved_max_weight()));
}

std::vector<int> TruncatedOperad::weights(int arity) const {
    std::vector<int> ws;
    for (const auto& [key, c] : comps_)
        if (key.first == arity && c.quot.quotient_dim > 0) ws.push_back(key.second);
    return ws;
}

int TruncatedOperad::dim(int arity, int weight) const {
    auto it = comps_.find({arity, weight});
    return it == comps_.end() ? 0 : it->second.quot.quotient_dim;
}

int TruncatedOperad::total_dim(int arity) const {
    int t = 0;
    for (int w : weights(arity)) t += dim(arity, w);
    return t;
}

const FreeBasis& TruncatedOperad::free_basis(int arity, int weight) const {
    return comp(arity, weight).free;
}

const Subspace& TruncatedOperad::ideal(int arity, int weight) const {
    return comp(arity, weight).ideal;
}

SparseVec TruncatedOperad::reduce(int arity, int weight, const OperadElement& x) const {
    return reduce_free_vec(arity, weight, comp(arity, weight).free.to_vec(x));
}

SparseVec TruncatedOperad::reduce_free_vec(int arity, int weight,
                                           const SparseVec& free_coords) const {
    return comp(arity, weight).quot.projection.apply(free_coords);
}

OperadElement TruncatedOperad::representative(int arity, int weight,
                                              const SparseVec& coords) const {
    const Component& c = comp(arity, weight);
    return c.free.from_vec(c.quot.section.apply(coords));
}

OperadElement TruncatedOperad::representative(int arity, int weight, int idx) const {
    SparseVec v;
    v[idx] = 1;
    return representative(arity, weight, v);
}

std::string TruncatedOperad::basis_label(int arity, int weight, int idx) const {
    OperadElement rep = representative(arity, weight, idx);
    // section maps basis vectors to single monomials (non-pivot coordinates)
    if (rep.terms().size() == 1 && rep.terms().begin()->second == 1)
        return tree_text(pres_.generators, rep.terms().begin()->first);
    std::string s;
    for (const auto& [t, cval] : rep.terms()) {
        if (!s.empty()) s += " + ";
        s += "(" + rat_str(cval) + ")*" + tree_text(pres_.generators, t);
    }
    return s;
}

const Matrix& TruncatedOperad::compose_matrix(int n1, int w1, int i, int n2, int w2) const {
    auto key = std::make_tuple(n1, w1, i, n2, w2);
    auto it = compose_memo_.find(key);
    if (it != compose_memo_.end()) return it->second;
    int d1 = dim(n1, w1), d2 = dim(n2, w2);
    int n = n1 + n2 - 1, w = w1 + w2;
    check_truncation(n, w);
    int dt = dim(n, w);
    Matrix m(dt, d1 * d2);
    for (int a = 0; a < d1; ++a) {
        OperadElement ra = representative(n1, w1, a);
        for (int b = 0; b < d2; ++b) {
            OperadElement rb = representative(n2, w2, b);
            OperadElement g = graft(pres_.generators, ra, i, rb);
            if (g.zero()) continue;
            SparseVec col = reduce(n, w, g);
            for (const auto& [r, v] : col) m.add(r, a * d2 + b, v);
        }
    }
    return compose_memo_.emplace(key, std::move(m)).first->second;
}

SparseVec TruncatedOperad::compose(int n1, int w1, const SparseVec& a, int i, int n2, int w2,
                                   const SparseVec& b) const {
    const Matrix& m = compose_matrix(n1, w1, i, n2, w2);
    int d2 = dim(n2, w2);
    SparseVec pair;
    for (const auto& [ia, va] : a)
        for (const auto& [ib, vb] : b) {
            Rat p = va * vb;
            if (!is_zero(p)) pair[ia * d2 + ib] = p;
        }
    return m.apply(pair);
}

const Matrix& TruncatedOperad::adjacent_action(int arity, int weight, int i) const {
    auto key = std::make_tuple(arity, weight, i);
    auto it = action_memo_.find(key);
    if (it != action_memo_.end()) return it->second;
    int d = dim(arity, weight);
    Matrix m(d, d);
    Perm s = perm_transposition(arity, i, i + 1);
    for (int a = 0; a < d; ++a) {
        OperadElement img = apply_permutation(pres_.generators, representative(arity, weight, a), s);
        SparseVec col = reduce(arity, weight, img);
        for (const auto& [r, v] : col) m.add(r, a, v);
    }
    return action_memo_.emplace(key, std::move(m)).first->second;
}

SparseVec TruncatedOperad::act(int arity, int weight, const Perm& sigma,
                               const SparseVec& v) const {
    SparseVec out = v;
    // leaf relabeling is a left action: apply(apply(x, s), t) = apply(x, t o s),
    // so the adjacent word runs in reverse
    auto word = adjacent_word(sigma);
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        out = adjacent_action(arity, weight, *it).apply(out);
    return out;
}

Matrix quadratic_pairing(const SModule& dual_gens, const SModule& gens, int arity) {
    FreeBasis dual_fb = make_free_basis(dual_gens, arity, 2);
    FreeBasis fb = make_free_basis(gens, arity, 2);
    Matrix m(dual_fb.dim(), fb.dim());
    for (int r = 0; r < dual_fb.dim(); ++r) {
        const TreeMonomial& td = dual_fb.elems[r];
        // keys encode generator indices, which coincide positionally between E and
        // E^v, so equal keys <=> same shape with the dual labels.
        auto itc = fb.index.find(td.key());
        if (itc == fb.index.end()) continue;
        int c = itc->second;
        int eps = 1;
        if (arity == 3) {
            // shape sign: inner leaf set {1,2} -> +1; {1,3} and {2,3} -> -1
            const TreeNode& inner = [&]() -> const TreeNode& {
                for (const auto& ch : td.root().children)
                    if (!ch.is_leaf()) return ch;
                fail(ErrorCode::structural, "two-vertex tree without inner vertex");
            }();
            std::vector<int> ls;
            for (const auto& ch : inner.children)
                if (ch.is_leaf()) ls.push_back(ch.leaf);
            std::sort(ls.begin(), ls.end());
            if (!(ls.size() == 2 && ls[0] == 1 && ls[1] == 2)) eps = -1;
        }
        m.set(r, c, eps);
    }
    return m;
}

OperadPresentation koszul_dual_operad(const OperadPresentation& pres) {
    pres.validate();
    if (!pres.binary() && !pres.unary_only())
        fail(ErrorCode::unsupported_presentation,
             "Koszul dual requires all generators binary (or all unary)");
    OperadPresentation dual;
    dual.generators = sign_twisted_dual(pres.generators);
    dual.max_arity = pres.max_arity;
    dual.max_weight = pres.max_weight;
    dual.name = pres.name + "!";

    int rel_arity = pres.binary() ? 3 : 1;
    FreeBasis fb = make_free_basis(pres.generators, rel_arity, 2);
    FreeBasis dual_fb = make_free_basis(dual.generators, rel_arity, 2);

    // span of relations (with symmetric closure)
    std::vector<SparseVec> vecs;
    auto it = pres.relations.find(rel_arity);
    if (it != pres.relations.end()) {
        for (const auto& r : it->second) {
            if (r.zero()) continue;
            for (const auto& sigma : all_perms(rel_arity)) {
                OperadElement img = apply_permutation(pres.generators, r, sigma);
                if (!img.zero()) vecs.push_back(fb.to_vec(img));
            }
        }
    }
    for (const auto& [n, rels] : pres.relations)
        if (n != rel_arity && !rels.empty())
            fail(ErrorCode::unsupported_presentation,
                 "relations in unexpected arity " + std::to_string(n));

    Matrix gen(static_cast<int>(vecs.size()), fb.dim());
    for (size_t i = 0; i < vecs.size(); ++i) gen.row(static_cast<int>(i)) = vecs[i];
    Subspace rspan = Subspace::span(gen);

    Matrix pairing = quadratic_pairing(dual.generators, pres.generators, rel_arity);
    AnnihilatorResult ann = annihilator(rspan, pairing);

    std::vector<OperadElement> dual_rels;
    for (int i = 0; i < ann.annihilator.dim(); ++i)
        dual_rels.push_back(dual_fb.from_vec(ann.annihilator.basis().row(i)));
    if (!dual_rels.empty()) dual.relations[rel_arity] = std::move(dual_rels);
    return dual;
}

} // namespace koszul

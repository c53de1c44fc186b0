#include "koszul/applied.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace koszul {

namespace {

int lnode_weight(const LNode& n) {
    if (n.is_leaf()) return 0;
    int w = 1;
    for (const auto& c : n.children) w += lnode_weight(c);
    return w;
}

int lnode_degree(const SModule& e, const LTable& t, const LNode& n) {
    if (n.is_leaf()) return n.entry >= 0 ? t[n.entry].degree : 0;
    int d = e[n.gen].degree;
    for (const auto& c : n.children) d += lnode_degree(e, t, c);
    return d;
}

int lnode_eweight(const LTable& t, const LNode& n) {
    if (n.is_leaf()) return n.entry >= 0 ? t[n.entry].weight : 0;
    int w = 0;
    for (const auto& c : n.children) w += lnode_eweight(t, c);
    return w;
}

int lnode_leaves(const LNode& n) {
    if (n.is_leaf()) return 1;
    int l = 0;
    for (const auto& c : n.children) l += lnode_leaves(c);
    return l;
}

void lnode_key(const LNode& n, std::string& out) {
    if (n.is_leaf()) {
        if (n.entry < -1) {
            out += 'H';
            out += std::to_string(-2 - n.entry);
        } else {
            out += 'e';
            out += std::to_string(n.entry);
        }
        return;
    }
    out += 'g';
    out += std::to_string(n.gen);
    out += '.';
    out += std::to_string(n.basis);
    out += '(';
    for (size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ',';
        lnode_key(n.children[i], out);
    }
    out += ')';
}

std::string key_of(const LNode& n) {
    std::string s;
    lnode_key(n, s);
    return s;
}

// monomial action: column c maps to (row r, coefficient) or nothing
std::optional<std::pair<int, Rat>> monomial_column(const Matrix& m, int col) {
    std::optional<std::pair<int, Rat>> out;
    for (int r = 0; r < m.rows(); ++r) {
        Rat v = m.get(r, col);
        if (is_zero(v)) continue;
        if (out) fail(ErrorCode::unsupported_presentation,
                      "labeled-tree calculus requires monomial symmetric actions");
        out = {r, v};
    }
    return out;
}

} // namespace

LTree::LTree(const SModule& e, const LTable& t, LNode root) : root_(std::move(root)) {
    weight_ = lnode_weight(root_);
    degree_ = lnode_degree(e, t, root_);
    eweight_ = lnode_eweight(t, root_);
    leaves_ = lnode_leaves(root_);
    key_ = key_of(root_);
}

std::vector<int> LTree::entry_multiset() const {
    std::vector<int> out;
    std::function<void(const LNode&)> rec = [&](const LNode& n) {
        if (n.is_leaf()) out.push_back(n.entry);
        else
            for (const auto& c : n.children) rec(c);
    };
    rec(root_);
    std::sort(out.begin(), out.end());
    return out;
}

void LElement::add_term(const LTree& t, const Rat& c) {
    if (is_zero(c)) return;
    auto it = terms_.find(t);
    if (it == terms_.end()) terms_.emplace(t, c);
    else {
        it->second += c;
        if (is_zero(it->second)) terms_.erase(it);
    }
}

LElement& LElement::operator+=(const LElement& o) {
    for (const auto& [t, c] : o.terms_) add_term(t, c);
    return *this;
}

LElement LElement::scaled(const Rat& c) const {
    LElement out;
    if (is_zero(c)) return out;
    for (const auto& [t, v] : terms_) out.add_term(t, v * c);
    return out;
}

namespace {

struct CanonNode {
    bool zero = false;
    LNode node;
    Rat coef = 1;
};

CanonNode canon_lnode(const SModule& e, const LTable& t, const LNode& n) {
    CanonNode out;
    if (n.is_leaf()) {
        out.node = n;
        return out;
    }
    const GeneratorSymbol& g = e[n.gen];
    if (static_cast<int>(n.children.size()) != g.arity)
        fail(ErrorCode::arity_mismatch, "labeled vertex child count != arity of " + g.name);

    std::vector<LNode> ch;
    std::vector<int> degs;
    Rat coef = 1;
    for (const auto& c : n.children) {
        CanonNode cc = canon_lnode(e, t, c);
        if (cc.zero) {
            out.zero = true;
            return out;
        }
        coef *= cc.coef;
        degs.push_back(lnode_degree(e, t, cc.node));
        ch.push_back(std::move(cc.node));
    }

    // sort children by key
    std::vector<std::string> keys;
    keys.reserve(ch.size());
    for (const auto& c : ch) keys.push_back(key_of(c));
    std::vector<int> order(ch.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return keys[a] < keys[b]; });
    Perm sigma(ch.size());
    for (size_t rank = 0; rank < order.size(); ++rank) sigma[order[rank]] = static_cast<int>(rank);

    int basis = n.basis;
    if (!perm_is_identity(sigma)) {
        coef *= koszul_sign(degs, sigma);
        Matrix m = g.action(perm_inverse(sigma));
        auto mc = monomial_column(m, basis);
        if (!mc) {
            out.zero = true;
            return out;
        }
        basis = mc->first;
        coef *= mc->second;
    }
    std::vector<LNode> sorted(ch.size());
    std::vector<int> sdegs(ch.size());
    std::vector<std::string> skeys(ch.size());
    for (size_t i = 0; i < ch.size(); ++i) {
        sorted[sigma[i]] = std::move(ch[i]);
        sdegs[sigma[i]] = degs[i];
        skeys[sigma[i]] = std::move(keys[i]);
    }

    // resolve the stabilizer of equal-children runs: the class of the label is its
    // orbit under the signed run transpositions; pick the minimal representative,
    // and kill the class on a sign conflict (x = -x).
    std::vector<std::pair<Matrix, int>> stab; // (transposition action, koszul sign)
    for (size_t a = 0; a < sorted.size();) {
        size_t b = a + 1;
        while (b < sorted.size() && skeys[b] == skeys[a]) ++b;
        for (size_t i = a; i + 1 < b; ++i)
            stab.emplace_back(g.action(perm_transposition(g.arity, static_cast<int>(i),
                                                          static_cast<int>(i) + 1)),
                              (sdegs[a] % 2) ? -1 : 1);
        a = b;
    }
    if (!stab.empty()) {
        // f[l]: x_{basis} = f[l] * x_l along the relation x_cur = sign*c * x_target
        std::map<int, Rat> f;
        std::vector<int> stack{basis};
        f[basis] = 1;
        bool dead = false;
        while (!stack.empty() && !dead) {
            int cur = stack.back();
            stack.pop_back();
            Rat fc = f[cur];
            for (const auto& [m, rs] : stab) {
                auto mc = monomial_column(m, cur);
                if (!mc) continue;
                Rat nf = fc * mc->second * rs;
                auto it = f.find(mc->first);
                if (it == f.end()) {
                    f[mc->first] = nf;
                    stack.push_back(mc->first);
                } else if (!(it->second == nf)) {
                    dead = true;
                    break;
                }
            }
        }
        if (dead) {
            out.zero = true;
            return out;
        }
        int rep = f.begin()->first;
        coef *= f[rep];
        basis = rep;
    }

    out.node = LNode::vertex(n.gen, basis, std::move(sorted));
    out.coef = coef;
    return out;
}

} // namespace

LElement lcanonicalize(const SModule& e, const LTable& t, const LNode& raw, const Rat& coef) {
    LElement out;
    CanonNode c = canon_lnode(e, t, raw);
    if (!c.zero) out.add_term(LTree(e, t, std::move(c.node)), coef * c.coef);
    return out;
}

namespace {

// sub-multiset compositions: ways to distribute the sorted multiset into k ordered lists
void multiset_compositions(const std::vector<int>& ms, int k,
                           std::vector<std::vector<int>>& cur, size_t pos,
                           std::vector<std::vector<std::vector<int>>>& out) {
    if (pos == ms.size()) {
        out.push_back(cur);
        return;
    }
    for (int b = 0; b < k; ++b) {
        cur[b].push_back(ms[pos]);
        multiset_compositions(ms, k, cur, pos + 1, out);
        cur[b].pop_back();
    }
}

} // namespace

std::vector<LTree> enumerate_ltrees(const SModule& e, const LTable& t, int weight,
                                    const std::vector<int>& entries) {
    std::map<std::string, LTree> seen;
    std::function<std::vector<LNode>(const std::vector<int>&, int)> gen =
        [&](const std::vector<int>& ms, int w) -> std::vector<LNode> {
        std::vector<LNode> out;
        if (w == 0) {
            if (ms.size() == 1) out.push_back(LNode::leaf(ms[0]));
            return out;
        }
        for (size_t gi = 0; gi < e.size(); ++gi) {
            int k = e[gi].arity;
            if (static_cast<int>(ms.size()) < k) continue;
            std::vector<std::vector<std::vector<int>>> comps;
            std::vector<std::vector<int>> cur(k);
            multiset_compositions(ms, k, cur, 0, comps);
            // deduplicate compositions (identical splits arise from equal entries)
            std::set<std::vector<std::vector<int>>> uniq(comps.begin(), comps.end());
            for (const auto& blocks : uniq) {
                std::vector<std::vector<int>> wcomps;
                std::vector<int> wcur;
                std::function<void(int, int)> wrec = [&](int left, int parts) {
                    if (parts == 1) {
                        wcur.push_back(left);
                        wcomps.push_back(wcur);
                        wcur.pop_back();
                        return;
                    }
                    for (int ww = 0; ww <= left; ++ww) {
                        wcur.push_back(ww);
                        wrec(left - ww, parts - 1);
                        wcur.pop_back();
                    }
                };
                wrec(w - 1, k);
                for (const auto& wc : wcomps) {
                    bool ok = true;
                    for (int j = 0; j < k; ++j) {
                        if (blocks[j].empty()) ok = false;
                        if (blocks[j].size() > 1 && wc[j] == 0) ok = false;
                    }
                    if (!ok) continue;
                    std::vector<std::vector<LNode>> options(k);
                    for (int j = 0; j < k && ok; ++j) {
                        options[j] = gen(blocks[j], wc[j]);
                        if (options[j].empty()) ok = false;
                    }
                    if (!ok) continue;
                    std::vector<size_t> pick(k, 0);
                    while (true) {
                        std::vector<LNode> ch;
                        for (int j = 0; j < k; ++j) ch.push_back(options[j][pick[j]]);
                        for (int b = 0; b < e[gi].dim; ++b)
                            out.push_back(LNode::vertex(static_cast<int>(gi), b, ch));
                        int j = 0;
                        for (; j < k; ++j) {
                            if (++pick[j] < options[j].size()) break;
                            pick[j] = 0;
                        }
                        if (j == k) break;
                    }
                }
            }
        }
        return out;
    };

    if (weight == 0) {
        std::vector<LTree> out;
        if (entries.size() == 1) out.emplace_back(e, t, LNode::leaf(entries[0]));
        return out;
    }
    for (auto& raw : gen(entries, weight)) {
        LElement c = lcanonicalize(e, t, raw);
        for (const auto& [tree, coef] : c.terms()) seen.emplace(tree.key(), tree);
    }
    std::vector<LTree> out;
    for (auto& [k, tr] : seen) out.push_back(std::move(tr));
    return out;
}

int LBasis::find(const LTree& t) const { return find_key(t.key()); }

int LBasis::find_key(const std::string& k) const {
    auto it = index.find(k);
    if (it == index.end()) fail(ErrorCode::structural, "labeled monomial not in basis: " + k);
    return it->second;
}

SparseVec LBasis::to_vec(const LElement& x) const {
    SparseVec v;
    for (const auto& [t, c] : x.terms()) v[find(t)] = c;
    return v;
}

LElement LBasis::from_vec(const SparseVec& v) const {
    LElement x;
    for (const auto& [i, c] : v) x.add_term(elems[i], c);
    return x;
}

LBasis make_lbasis(std::vector<LTree> elems) {
    std::sort(elems.begin(), elems.end());
    LBasis b;
    b.elems = std::move(elems);
    for (size_t i = 0; i < b.elems.size(); ++i) b.index[b.elems[i].key()] = static_cast<int>(i);
    return b;
}

namespace {

struct ClusterChoiceL {
    LNode cluster;
    std::vector<const LNode*> pieces;
};

std::vector<ClusterChoiceL> lcluster_rec(const LNode& n) {
    std::vector<std::vector<ClusterChoiceL>> per_child;
    for (const auto& c : n.children) {
        std::vector<ClusterChoiceL> opts;
        ClusterChoiceL cut;
        cut.cluster = LNode::leaf(-2); // placeholder; renumbered later
        cut.pieces.push_back(&c);
        opts.push_back(std::move(cut));
        if (!c.is_leaf())
            for (auto& kept : lcluster_rec(c)) opts.push_back(std::move(kept));
        per_child.push_back(std::move(opts));
    }
    std::vector<ClusterChoiceL> out;
    std::vector<size_t> pick(per_child.size(), 0);
    while (true) {
        ClusterChoiceL cc;
        std::vector<LNode> ch;
        for (size_t i = 0; i < per_child.size(); ++i) {
            const ClusterChoiceL& c = per_child[i][pick[i]];
            ch.push_back(c.cluster);
            for (auto* p : c.pieces) cc.pieces.push_back(p);
        }
        cc.cluster = LNode::vertex(n.gen, n.basis, std::move(ch));
        out.push_back(std::move(cc));
        size_t i = 0;
        for (; i < per_child.size(); ++i) {
            if (++pick[i] < per_child[i].size()) break;
            pick[i] = 0;
        }
        if (i == per_child.size()) break;
    }
    return out;
}

void renumber_holes(LNode& n, int& counter) {
    if (n.is_leaf()) {
        if (n.entry < -1) n.entry = -2 - counter++;
        return;
    }
    for (auto& c : n.children) renumber_holes(c, counter);
}

// DFS degree/slot streams for the Koszul regrouping sign: vertices and entry
// leaves both contribute degrees
void lslot_stream(const SModule& e, const LTable& t, const LNode& n,
                  const std::map<const LNode*, int>& piece_of, int cur_slot,
                  std::vector<int>& degs, std::vector<int>& slots) {
    auto it = piece_of.find(&n);
    if (it != piece_of.end()) cur_slot = it->second;
    if (n.is_leaf()) {
        degs.push_back(n.entry >= 0 ? t[n.entry].degree : 0);
        slots.push_back(cur_slot);
        return;
    }
    degs.push_back(e[n.gen].degree);
    slots.push_back(cur_slot);
    for (const auto& c : n.children) lslot_stream(e, t, c, piece_of, cur_slot, degs, slots);
}

} // namespace

std::vector<LClusterSplit> lcluster_splits(const SModule& e, const LTable& t, const LTree& x) {
    std::vector<LClusterSplit> out;
    if (x.weight() == 0) return out;
    for (auto& choice : lcluster_rec(x.root())) {
        LClusterSplit cs;
        std::map<const LNode*, int> piece_of;
        for (size_t i = 0; i < choice.pieces.size(); ++i) {
            cs.pieces.push_back(*choice.pieces[i]);
            piece_of[choice.pieces[i]] = static_cast<int>(i) + 1;
        }
        cs.cluster = std::move(choice.cluster);
        int counter = 0;
        renumber_holes(cs.cluster, counter);
        cs.cluster_weight = lnode_weight(cs.cluster);

        std::vector<int> degs, slots;
        lslot_stream(e, t, x.root(), piece_of, 0, degs, slots);
        cs.sign = koszul_sign(degs, sorting_perm(slots));
        out.push_back(std::move(cs));
    }
    return out;
}

std::vector<LSubtreeSplit> lsubtree_splits(const SModule& e, const LTable& t, const LTree& x) {
    std::vector<LSubtreeSplit> out;
    // enumerate non-root vertices by path
    std::vector<std::vector<int>> paths;
    std::function<void(const LNode&, std::vector<int>&)> collect = [&](const LNode& n,
                                                                       std::vector<int>& path) {
        if (n.is_leaf()) return;
        if (!path.empty()) paths.push_back(path);
        for (size_t i = 0; i < n.children.size(); ++i) {
            path.push_back(static_cast<int>(i));
            collect(n.children[i], path);
            path.pop_back();
        }
    };
    std::vector<int> path;
    collect(x.root(), path);

    for (const auto& p : paths) {
        // rebuild with the subtree replaced by a hole; compute the after-degree
        LSubtreeSplit s;
        std::function<LNode(const LNode&, size_t)> rebuild = [&](const LNode& n,
                                                                 size_t depth) -> LNode {
            if (depth == p.size()) return LNode::leaf(-2);
            LNode v = n;
            v.children[p[depth]] = rebuild(n.children[p[depth]], depth + 1);
            return v;
        };
        const LNode* cur = &x.root();
        for (int i : p) cur = &cur->children[i];
        s.piece = *cur;
        s.upper = rebuild(x.root(), 0);

        // Koszul sign: the piece block moves past everything after it in DFS
        bool passed = false;
        std::function<int(const LNode&, size_t)> after = [&](const LNode& n,
                                                             size_t depth) -> int {
            if (depth == p.size()) {
                passed = true;
                return 0;
            }
            int d = passed ? (n.is_leaf() ? (n.entry >= 0 ? t[n.entry].degree : 0)
                                          : e[n.gen].degree)
                           : 0;
            if (n.is_leaf()) return d;
            for (size_t i = 0; i < n.children.size(); ++i) {
                if (static_cast<int>(i) == p[depth] && !passed)
                    d += after(n.children[i], depth + 1);
                else if (passed)
                    d += lnode_degree(e, t, n.children[i]);
            }
            return d;
        };
        int adeg = after(x.root(), 0);
        int pdeg = lnode_degree(e, t, s.piece);
        s.sign = (adeg % 2 && pdeg % 2) ? -1 : 1;
        out.push_back(std::move(s));
    }
    return out;
}

LNode fill_holes(const LNode& cluster, const std::vector<LNode>& repl) {
    if (cluster.is_leaf()) {
        if (cluster.entry < -1) return repl[-2 - cluster.entry];
        return cluster;
    }
    LNode v = cluster;
    for (auto& c : v.children) c = fill_holes(c, repl);
    return v;
}

std::string lnode_key_string(const LNode& n) { return key_of(n); }

TreeNode cluster_to_numbered(const LNode& cluster) {
    if (cluster.is_leaf()) {
        if (cluster.entry >= -1)
            fail(ErrorCode::structural, "cluster has non-hole leaves");
        return TreeNode::leaf_node(-1 - cluster.entry); // hole i -> leaf i+1
    }
    TreeNode v;
    v.gen = cluster.gen;
    v.basis = cluster.basis;
    for (const auto& c : cluster.children) v.children.push_back(cluster_to_numbered(c));
    return v;
}

} // namespace koszul

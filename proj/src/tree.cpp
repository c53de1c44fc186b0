#include "koszul/tree.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace koszul {

namespace {

int node_weight(const TreeNode& n) {
    if (n.is_leaf()) return 0;
    int w = 1;
    for (const auto& c : n.children) w += node_weight(c);
    return w;
}

int node_degree(const SModule& e, const TreeNode& n) {
    if (n.is_leaf()) return 0;
    int d = e[n.gen].degree;
    for (const auto& c : n.children) d += node_degree(e, c);
    return d;
}

int node_min_leaf(const TreeNode& n) {
    if (n.is_leaf()) return n.leaf;
    int m = 1 << 30;
    for (const auto& c : n.children) m = std::min(m, node_min_leaf(c));
    return m;
}

void node_leaves(const TreeNode& n, std::vector<int>& out) {
    if (n.is_leaf()) out.push_back(n.leaf);
    else
        for (const auto& c : n.children) node_leaves(c, out);
}

void node_key(const TreeNode& n, std::string& out) {
    if (n.is_leaf()) {
        out += std::to_string(n.leaf);
        return;
    }
    out += 'g';
    out += std::to_string(n.gen);
    out += '.';
    out += std::to_string(n.basis);
    out += '(';
    for (size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ',';
        node_key(n.children[i], out);
    }
    out += ')';
}

TreeNode relabel(const TreeNode& n, const std::map<int, int>& m) {
    if (n.is_leaf()) return TreeNode::leaf_node(m.at(n.leaf));
    TreeNode v;
    v.gen = n.gen;
    v.basis = n.basis;
    v.children.reserve(n.children.size());
    for (const auto& c : n.children) v.children.push_back(relabel(c, m));
    return v;
}

std::map<int, int> standardize_map(const std::vector<int>& labels) {
    std::vector<int> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    std::map<int, int> m;
    for (size_t i = 0; i < sorted.size(); ++i) m[sorted[i]] = static_cast<int>(i) + 1;
    return m;
}

} // namespace

TreeMonomial::TreeMonomial(const SModule& e, TreeNode root) : root_(std::move(root)) {
    std::vector<int> leaves;
    node_leaves(root_, leaves);
    arity_ = static_cast<int>(leaves.size());
    std::vector<int> sorted = leaves;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < arity_; ++i)
        if (sorted[i] != i + 1)
            fail(ErrorCode::structural, "tree leaves are not a bijection onto 1..n");
    weight_ = node_weight(root_);
    degree_ = node_degree(e, root_);
    key_.clear();
    node_key(root_, key_);
}

TreeMonomial TreeMonomial::identity() { return TreeMonomial(); }

std::string tree_text(const SModule& e, const TreeMonomial& t) {
    std::function<void(const TreeNode&, std::ostringstream&)> rec =
        [&](const TreeNode& n, std::ostringstream& os) {
            if (n.is_leaf()) {
                os << n.leaf;
                return;
            }
            os << e[n.gen].name;
            if (n.basis > 0) os << '#' << n.basis;
            os << '(';
            for (size_t i = 0; i < n.children.size(); ++i) {
                if (i) os << ", ";
                rec(n.children[i], os);
            }
            os << ')';
        };
    std::ostringstream os;
    rec(t.root(), os);
    return os.str();
}

int OperadElement::term_weight() const {
    int w = -1;
    for (const auto& [t, c] : terms_) {
        if (w < 0) w = t.weight();
        else if (w != t.weight())
            fail(ErrorCode::weight_homogeneity, "element mixes weights");
    }
    return w;
}

void OperadElement::add_term(const TreeMonomial& t, const Rat& c) {
    if (is_zero(c)) return;
    if (t.arity() != arity_) fail(ErrorCode::arity_mismatch, "term arity mismatch");
    auto it = terms_.find(t);
    if (it == terms_.end()) terms_.emplace(t, c);
    else {
        it->second += c;
        if (is_zero(it->second)) terms_.erase(it);
    }
}

OperadElement& OperadElement::operator+=(const OperadElement& o) {
    if (arity_ != o.arity_) fail(ErrorCode::arity_mismatch, "sum arity mismatch");
    for (const auto& [t, c] : o.terms_) add_term(t, c);
    return *this;
}

OperadElement OperadElement::scaled(const Rat& c) const {
    OperadElement out(arity_);
    if (is_zero(c)) return out;
    for (const auto& [t, v] : terms_) out.add_term(t, v * c);
    return out;
}

namespace {

// Recursive canonicalization returning an expansion into canonical nodes.
std::vector<std::pair<TreeNode, Rat>> canon_node(const SModule& e, const TreeNode& n) {
    if (n.is_leaf()) return {{n, Rat(1)}};
    if (n.gen < 0 || n.gen >= static_cast<int>(e.size()))
        fail(ErrorCode::structural, "unknown generator index in tree");
    const GeneratorSymbol& g = e[n.gen];
    if (static_cast<int>(n.children.size()) != g.arity)
        fail(ErrorCode::arity_mismatch,
             "vertex labeled " + g.name + " has " + std::to_string(n.children.size()) +
                 " children, arity is " + std::to_string(g.arity));
    if (n.basis < 0 || n.basis >= g.dim)
        fail(ErrorCode::structural, "basis index out of range for generator " + g.name);

    // expand children
    std::vector<std::vector<std::pair<TreeNode, Rat>>> kids;
    kids.reserve(n.children.size());
    for (const auto& c : n.children) kids.push_back(canon_node(e, c));

    std::vector<std::pair<TreeNode, Rat>> out;
    std::vector<size_t> pick(kids.size(), 0);
    while (true) {
        Rat coef(1);
        std::vector<TreeNode> ch;
        ch.reserve(kids.size());
        for (size_t i = 0; i < kids.size(); ++i) {
            ch.push_back(kids[i][pick[i]].first);
            coef *= kids[i][pick[i]].second;
        }
        // sort children blocks by minimal leaf
        std::vector<int> keys(ch.size());
        std::vector<int> degs(ch.size());
        for (size_t i = 0; i < ch.size(); ++i) {
            keys[i] = node_min_leaf(ch[i]);
            degs[i] = node_degree(e, ch[i]);
        }
        Perm sigma = sorting_perm(keys);
        if (!perm_is_identity(sigma)) coef *= koszul_sign(degs, sigma);
        std::vector<TreeNode> sorted_ch(ch.size());
        for (size_t i = 0; i < ch.size(); ++i) sorted_ch[sigma[i]] = std::move(ch[i]);

        if (perm_is_identity(sigma)) {
            TreeNode v = TreeNode::vertex(n.gen, n.basis, std::move(sorted_ch));
            out.emplace_back(std::move(v), coef);
        } else {
            // label transforms through the representation: f(t_1..t_k) = (f.sigma^{-1})(u_1..u_k)
            Matrix m = g.action(perm_inverse(sigma));
            for (int a = 0; a < g.dim; ++a) {
                Rat entry = m.get(a, n.basis);
                if (is_zero(entry)) continue;
                TreeNode v = TreeNode::vertex(n.gen, a, sorted_ch);
                out.emplace_back(std::move(v), coef * entry);
            }
        }

        // next combination
        size_t i = 0;
        for (; i < kids.size(); ++i) {
            if (++pick[i] < kids[i].size()) break;
            pick[i] = 0;
        }
        if (i == kids.size()) break;
    }
    return out;
}

} // namespace

OperadElement canonicalize(const SModule& e, const TreeNode& raw, const Rat& coef) {
    std::vector<int> leaves;
    node_leaves(raw, leaves);
    OperadElement out(static_cast<int>(leaves.size()));
    for (auto& [node, c] : canon_node(e, raw))
        out.add_term(TreeMonomial(e, std::move(node)), c * coef);
    return out;
}

namespace {

// degree of the vertices of x strictly after the DFS block of leaf `slot`
int suffix_degree_after_leaf(const SModule& e, const TreeNode& n, int slot, bool& seen) {
    if (n.is_leaf()) {
        if (n.leaf == slot) seen = true;
        return 0;
    }
    int d = seen ? e[n.gen].degree : 0;
    for (const auto& c : n.children) d += suffix_degree_after_leaf(e, c, slot, seen);
    return d;
}

TreeNode substitute(const TreeNode& n, int slot, const TreeNode& y, int shift_above, int y_shift) {
    if (n.is_leaf()) {
        if (n.leaf == slot) {
            // splice y with its leaves shifted by y_shift
            std::map<int, int> m;
            std::vector<int> yl;
            node_leaves(y, yl);
            for (int l : yl) m[l] = l + y_shift;
            return relabel(y, m);
        }
        return TreeNode::leaf_node(n.leaf > slot ? n.leaf + shift_above : n.leaf);
    }
    TreeNode v;
    v.gen = n.gen;
    v.basis = n.basis;
    v.children.reserve(n.children.size());
    for (const auto& c : n.children)
        v.children.push_back(substitute(c, slot, y, shift_above, y_shift));
    return v;
}

} // namespace

OperadElement graft(const SModule& e, const TreeMonomial& x, int i, const TreeMonomial& y) {
    if (i < 1 || i > x.arity())
        fail(ErrorCode::index_out_of_range, "graft slot out of range");
    OperadElement out(x.arity() + y.arity() - 1);
    if (y.is_identity()) {
        out.add_term(x, 1);
        return out;
    }
    if (x.is_identity()) {
        out.add_term(y, 1);
        return out;
    }
    bool seen = false;
    int sfx = suffix_degree_after_leaf(e, x.root(), i, seen);
    int sign = (y.degree() % 2 && sfx % 2) ? -1 : 1;
    TreeNode merged = substitute(x.root(), i, y.root(), y.arity() - 1, i - 1);
    // grafting canonical shuffle trees with monotone relabeling stays canonical
    out.add_term(TreeMonomial(e, std::move(merged)), sign);
    return out;
}

OperadElement graft(const SModule& e, const OperadElement& x, int i, const OperadElement& y) {
    OperadElement out(x.arity() + y.arity() - 1);
    for (const auto& [tx, cx] : x.terms())
        for (const auto& [ty, cy] : y.terms())
            out += graft(e, tx, i, ty).scaled(cx * cy);
    return out;
}

OperadElement apply_permutation(const SModule& e, const OperadElement& x, const Perm& sigma) {
    if (static_cast<int>(sigma.size()) != x.arity())
        fail(ErrorCode::dimension_mismatch, "permutation size != arity");
    OperadElement out(x.arity());
    for (const auto& [t, c] : x.terms()) {
        std::map<int, int> m;
        for (int l = 1; l <= x.arity(); ++l) m[l] = sigma[l - 1] + 1;
        out += canonicalize(e, relabel(t.root(), m), c);
    }
    return out;
}

namespace {

void weight_compositions(int total, int parts, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int w = 0; w <= total; ++w) {
        cur.push_back(w);
        weight_compositions(total - w, parts - 1, cur, out);
        cur.pop_back();
    }
}

std::vector<TreeNode> gen_trees(const SModule& e, const std::vector<int>& labels, int w) {
    std::vector<TreeNode> out;
    if (w == 0) {
        if (labels.size() == 1) out.push_back(TreeNode::leaf_node(labels[0]));
        return out;
    }
    for (size_t gi = 0; gi < e.size(); ++gi) {
        const GeneratorSymbol& g = e[gi];
        int k = g.arity;
        if (static_cast<int>(labels.size()) < k) continue;
        for (const auto& blocks : ordered_set_partitions(labels, k)) {
            std::vector<std::vector<int>> wcomps;
            std::vector<int> cur;
            weight_compositions(w - 1, k, cur, wcomps);
            for (const auto& wc : wcomps) {
                // child with several leaves needs weight >= 1; quick viability cut
                bool ok = true;
                for (int j = 0; j < k; ++j)
                    if (blocks[j].size() > 1 && wc[j] == 0) ok = false;
                if (!ok) continue;
                // recursively enumerate children
                std::vector<std::vector<TreeNode>> options(k);
                for (int j = 0; j < k && ok; ++j) {
                    options[j] = gen_trees(e, blocks[j], wc[j]);
                    if (options[j].empty()) ok = false;
                }
                if (!ok) continue;
                std::vector<size_t> pick(k, 0);
                while (true) {
                    std::vector<TreeNode> ch;
                    ch.reserve(k);
                    for (int j = 0; j < k; ++j) ch.push_back(options[j][pick[j]]);
                    for (int b = 0; b < g.dim; ++b)
                        out.push_back(TreeNode::vertex(static_cast<int>(gi), b, ch));
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
}

} // namespace

std::vector<TreeMonomial> enumerate_trees(const SModule& e, int arity, int weight) {
    std::vector<int> labels(arity);
    for (int i = 0; i < arity; ++i) labels[i] = i + 1;
    std::vector<TreeMonomial> out;
    if (weight == 0 && arity == 1) {
        out.push_back(TreeMonomial::identity());
        return out;
    }
    for (auto& n : gen_trees(e, labels, weight)) out.emplace_back(e, std::move(n));
    std::sort(out.begin(), out.end());
    return out;
}

int FreeBasis::find(const TreeMonomial& t) const {
    auto it = index.find(t.key());
    if (it == index.end()) fail(ErrorCode::structural, "monomial not in free basis: " + t.key());
    return it->second;
}

SparseVec FreeBasis::to_vec(const OperadElement& x) const {
    SparseVec v;
    for (const auto& [t, c] : x.terms()) v[find(t)] = c;
    return v;
}

OperadElement FreeBasis::from_vec(const SparseVec& v) const {
    OperadElement x(arity);
    for (const auto& [i, c] : v) x.add_term(elems[i], c);
    return x;
}

FreeBasis make_free_basis(const SModule& e, int arity, int weight) {
    FreeBasis fb;
    fb.arity = arity;
    fb.weight = weight;
    fb.elems = enumerate_trees(e, arity, weight);
    for (size_t i = 0; i < fb.elems.size(); ++i) fb.index[fb.elems[i].key()] = static_cast<int>(i);
    return fb;
}

namespace {

struct VertexRef {
    std::vector<int> path; // child indices from the root
};

void collect_vertices(const TreeNode& n, std::vector<int>& path, std::vector<std::vector<int>>& out) {
    if (n.is_leaf()) return;
    out.push_back(path);
    for (size_t i = 0; i < n.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        collect_vertices(n.children[i], path, out);
        path.pop_back();
    }
}

const TreeNode& node_at(const TreeNode& root, const std::vector<int>& path) {
    const TreeNode* n = &root;
    for (int i : path) n = &n->children[i];
    return *n;
}

TreeNode replace_at(const TreeNode& root, const std::vector<int>& path, size_t depth,
                    const TreeNode& repl) {
    if (depth == path.size()) return repl;
    TreeNode v = root;
    v.children[path[depth]] = replace_at(root.children[path[depth]], path, depth + 1, repl);
    return v;
}

// total degree of vertices strictly after the DFS block of the subtree at `path`
int degree_after_block(const SModule& e, const TreeNode& n, const std::vector<int>& path,
                       size_t depth, bool& passed) {
    if (n.is_leaf()) return 0;
    if (depth == path.size()) { // this is the block; nothing inside counts
        passed = true;
        return 0;
    }
    int d = passed ? e[n.gen].degree : 0;
    // children before the path child contribute nothing (they precede the block)
    for (size_t i = 0; i < n.children.size(); ++i) {
        if (static_cast<int>(i) == path[depth] && !passed) {
            d += degree_after_block(e, n.children[i], path, depth + 1, passed);
        } else if (passed) {
            d += node_degree(e, n.children[i]);
        }
    }
    return d;
}

} // namespace

std::vector<TreeSplit> subtree_splits(const SModule& e, const TreeMonomial& t) {
    std::vector<TreeSplit> out;
    std::vector<std::vector<int>> verts;
    std::vector<int> path;
    collect_vertices(t.root(), path, verts);
    for (const auto& p : verts) {
        if (p.empty()) continue; // root split is trivial here
        const TreeNode& v = node_at(t.root(), p);
        std::vector<int> lower_leaves;
        node_leaves(v, lower_leaves);
        std::sort(lower_leaves.begin(), lower_leaves.end());

        TreeSplit s;
        s.leaves.insert(lower_leaves.begin(), lower_leaves.end());
        s.lower = TreeMonomial(e, relabel(v, standardize_map(lower_leaves)));

        int marker = lower_leaves.front();
        TreeNode upper_raw = replace_at(t.root(), p, 0, TreeNode::leaf_node(marker));
        std::vector<int> upper_leaves;
        node_leaves(upper_raw, upper_leaves);
        std::sort(upper_leaves.begin(), upper_leaves.end());
        auto m = standardize_map(upper_leaves);
        s.upper = TreeMonomial(e, relabel(upper_raw, m));
        s.slot = m.at(marker);

        bool passed = false;
        int after = degree_after_block(e, t.root(), p, 0, passed);
        s.sign = (s.lower.degree() % 2 && after % 2) ? -1 : 1;
        out.push_back(std::move(s));
    }
    return out;
}

RootSplit root_decompose(const SModule& e, const TreeMonomial& t) {
    if (t.is_identity()) fail(ErrorCode::structural, "root_decompose of the identity tree");
    RootSplit rs;
    const TreeNode& r = t.root();
    rs.gen = r.gen;
    rs.basis = r.basis;
    for (const auto& c : r.children) {
        std::vector<int> ls;
        node_leaves(c, ls);
        std::sort(ls.begin(), ls.end());
        if (c.is_leaf()) rs.pieces.push_back(TreeMonomial::identity());
        else rs.pieces.emplace_back(e, relabel(c, standardize_map(ls)));
        rs.piece_leaves.push_back(std::move(ls));
    }
    return rs;
}

namespace {

// Enumerate root-connected vertex clusters: at each vertex child, either cut
// (child subtree dangles as a piece slot) or keep the child vertex in the cluster.
struct ClusterChoice {
    TreeNode cluster;                       // pruned children replaced by leaf markers
    std::vector<const TreeNode*> pieces;    // dangling subtrees in planar order
};

std::vector<ClusterChoice> cluster_rec(const TreeNode& n, int& marker_counter) {
    // n is a vertex
    std::vector<std::vector<ClusterChoice>> per_child;
    for (const auto& c : n.children) {
        std::vector<ClusterChoice> opts;
        if (c.is_leaf()) {
            ClusterChoice cut;
            cut.cluster = c; // ordinary leaf stays a slot for an identity piece
            cut.pieces.push_back(&c);
            opts.push_back(std::move(cut));
        } else {
            ClusterChoice cut;
            cut.cluster = TreeNode::leaf_node(node_min_leaf(c));
            cut.pieces.push_back(&c);
            opts.push_back(std::move(cut));
            for (auto& kept : cluster_rec(c, marker_counter)) opts.push_back(std::move(kept));
        }
        per_child.push_back(std::move(opts));
    }
    std::vector<ClusterChoice> out;
    std::vector<size_t> pick(per_child.size(), 0);
    while (true) {
        ClusterChoice cc;
        std::vector<TreeNode> ch;
        for (size_t i = 0; i < per_child.size(); ++i) {
            const ClusterChoice& c = per_child[i][pick[i]];
            ch.push_back(c.cluster);
            for (auto* p : c.pieces) cc.pieces.push_back(p);
        }
        cc.cluster = TreeNode::vertex(n.gen, n.basis, std::move(ch));
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

// DFS list of (vertex-degree, slot) for the Koszul regrouping sign
void slot_degrees(const SModule& e, const TreeNode& n,
                  const std::map<const TreeNode*, int>& piece_of, int cur_slot,
                  std::vector<int>& degs, std::vector<int>& slots) {
    auto it = piece_of.find(&n);
    if (it != piece_of.end()) cur_slot = it->second;
    if (!n.is_leaf()) {
        degs.push_back(e[n.gen].degree);
        slots.push_back(cur_slot);
        for (const auto& c : n.children) slot_degrees(e, c, piece_of, cur_slot, degs, slots);
    }
}

} // namespace

std::vector<ClusterSplit> cluster_splits(const SModule& e, const TreeMonomial& t) {
    std::vector<ClusterSplit> out;
    if (t.is_identity()) return out;
    int counter = 0;
    for (auto& choice : cluster_rec(t.root(), counter)) {
        ClusterSplit cs;
        // pieces in planar order = order of cluster leaves by position; labels by min
        std::vector<std::pair<int, const TreeNode*>> by_min;
        for (auto* p : choice.pieces) by_min.emplace_back(node_min_leaf(*p), p);
        std::sort(by_min.begin(), by_min.end());
        std::map<const TreeNode*, int> piece_slot; // 1-based by label order
        for (size_t i = 0; i < by_min.size(); ++i) piece_slot[by_min[i].second] = static_cast<int>(i) + 1;

        // upper: relabel cluster leaves (markers carry the piece minimum already)
        std::vector<int> cl;
        node_leaves(choice.cluster, cl);
        std::sort(cl.begin(), cl.end());
        cs.upper = TreeMonomial(e, relabel(choice.cluster, standardize_map(cl)));

        for (auto& [mn, p] : by_min) {
            std::vector<int> ls;
            node_leaves(*p, ls);
            std::sort(ls.begin(), ls.end());
            if (p->is_leaf()) cs.pieces.push_back(TreeMonomial::identity());
            else cs.pieces.emplace_back(e, relabel(*p, standardize_map(ls)));
            cs.piece_leaves.push_back(std::move(ls));
        }

        // Koszul sign of regrouping vertex blocks as (cluster, piece_1, ..., piece_r)
        std::map<const TreeNode*, int> piece_of;
        for (auto& [mn, p] : by_min)
            if (!p->is_leaf()) piece_of[p] = piece_slot[p];
        std::vector<int> degs, slots;
        slot_degrees(e, t.root(), piece_of, 0, degs, slots);
        cs.sign = koszul_sign(degs, sorting_perm(slots));
        out.push_back(std::move(cs));
    }
    return out;
}

} // namespace koszul

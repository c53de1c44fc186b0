#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "koszul/symbols.hpp"

namespace koszul {

// A node of a rooted tree: either a leaf carrying a label in {1..n} or a vertex
// carrying (generator index, basis index) with exactly arity children.
struct TreeNode {
    int gen = -1;   // -1 for leaves
    int basis = 0;  // basis index inside the generator's coefficient space
    int leaf = 0;   // leaf label when gen == -1
    std::vector<TreeNode> children;

    bool is_leaf() const { return gen < 0; }
    static TreeNode leaf_node(int label) {
        TreeNode t;
        t.leaf = label;
        return t;
    }
    static TreeNode vertex(int gen, int basis, std::vector<TreeNode> ch) {
        TreeNode t;
        t.gen = gen;
        t.basis = basis;
        t.children = std::move(ch);
        return t;
    }
};

// A canonical shuffle-tree monomial: at every vertex the child subtrees are
// ordered by minimal leaf label; leaves are labeled bijectively by {1..arity}.
class TreeMonomial {
  public:
    TreeMonomial() = default;
    // Trusts the node to already be canonical; computes cached invariants.
    TreeMonomial(const SModule& e, TreeNode root);

    const TreeNode& root() const { return root_; }
    int arity() const { return arity_; }
    int weight() const { return weight_; }
    int degree() const { return degree_; }
    const std::string& key() const { return key_; }

    bool operator<(const TreeMonomial& o) const { return key_ < o.key_; }
    bool operator==(const TreeMonomial& o) const { return key_ == o.key_; }

    static TreeMonomial identity(); // the arity-1 empty tree
    bool is_identity() const { return weight_ == 0; }

  private:
    TreeNode root_ = TreeNode::leaf_node(1);
    int arity_ = 1;
    int weight_ = 0;
    int degree_ = 0;
    std::string key_ = "1";
};

// Display form, e.g. "mu(1, nu(2, 3))"; non-leading basis vectors print as "mu#1(...)".
std::string tree_text(const SModule& e, const TreeMonomial& t);

// A formal Q-linear combination of canonical tree monomials of one arity.
class OperadElement {
  public:
    OperadElement() : arity_(0) {}
    explicit OperadElement(int arity) : arity_(arity) {}

    int arity() const { return arity_; }
    bool zero() const { return terms_.empty(); }
    int term_weight() const; // common weight; error if mixed
    const std::map<TreeMonomial, Rat>& terms() const { return terms_; }

    void add_term(const TreeMonomial& t, const Rat& c);
    OperadElement& operator+=(const OperadElement& o);
    OperadElement scaled(const Rat& c) const;
    bool operator==(const OperadElement& o) const {
        return arity_ == o.arity_ && terms_ == o.terms_;
    }

  private:
    int arity_;
    std::map<TreeMonomial, Rat> terms_;
};

// Rewrites an arbitrary well-formed tree into shuffle normal form. Sorting the
// children of a vertex acts on its label through the generator's representation
// and contributes the Koszul sign of permuting the child blocks.
OperadElement canonicalize(const SModule& e, const TreeNode& raw, const Rat& coef = Rat(1));

// Partial composition x o_i y (1-based slot i): substitutes, restandardizes leaf
// labels, and applies the Koszul sign for moving y past the inputs of x that
// follow slot i.
OperadElement graft(const SModule& e, const OperadElement& x, int i, const OperadElement& y);
OperadElement graft(const SModule& e, const TreeMonomial& x, int i, const TreeMonomial& y);

// Leaf relabeling by sigma (0-based perm of size arity) followed by canonicalization.
OperadElement apply_permutation(const SModule& e, const OperadElement& x, const Perm& sigma);

// All canonical shuffle trees of the given arity and weight, sorted by key.
std::vector<TreeMonomial> enumerate_trees(const SModule& e, int arity, int weight);

// Indexed basis of the weight-homogeneous component F(E)(arity)^(weight).
struct FreeBasis {
    int arity = 0;
    int weight = 0;
    std::vector<TreeMonomial> elems;
    std::map<std::string, int> index;

    int dim() const { return static_cast<int>(elems.size()); }
    int find(const TreeMonomial& t) const;
    SparseVec to_vec(const OperadElement& x) const;
    OperadElement from_vec(const SparseVec& v) const;
};

FreeBasis make_free_basis(const SModule& e, int arity, int weight);

// One component of the infinitesimal decomposition of a tree monomial: the full
// subtree below `lower` was extracted; `leaves` records which original leaf labels
// went down and `slot` is the 1-based position of the collapsed leaf in the upper
// tree. `sign` is the Koszul sign of moving the extracted block to the end of the
// factor order.
struct TreeSplit {
    TreeMonomial upper;
    TreeMonomial lower;
    std::set<int> leaves;
    int slot = 0;
    int sign = 1;
};

// Splits at every non-root vertex (lower weight >= 1, upper weight >= 1).
std::vector<TreeSplit> subtree_splits(const SModule& e, const TreeMonomial& t);

// Decomposition at the root: the root corolla plus its child subtrees in planar
// order (bare leaves appear as identity pieces with a single leaf label).
struct RootSplit {
    int gen = 0;
    int basis = 0;
    std::vector<TreeMonomial> pieces;          // standardized child subtrees
    std::vector<std::vector<int>> piece_leaves; // original labels, increasing per piece
};

RootSplit root_decompose(const SModule& e, const TreeMonomial& t);

// General cluster decomposition: every way to pick a root-connected set of
// vertices as the upper part. Pieces hang off the upper tree's leaf slots in
// order; sign is the Koszul sign of regrouping the vertex blocks.
struct ClusterSplit {
    TreeMonomial upper;                        // cluster as a tree (its leaves = piece slots)
    std::vector<TreeMonomial> pieces;          // one per upper leaf, may be identity
    std::vector<std::vector<int>> piece_leaves;
    int sign = 1;
};

std::vector<ClusterSplit> cluster_splits(const SModule& e, const TreeMonomial& t);

} // namespace koszul

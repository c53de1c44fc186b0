#pragma once

#include "koszul/subspace.hpp"
#include "koszul/tree.hpp"

namespace koszul {

// A graded label a tree leaf can carry: a vector-space generator, an algebra
// basis element, a coalgebra basis element, ...
struct LEntry {
    int weight = 0;
    int degree = 0;
    std::string name;
};
using LTable = std::vector<LEntry>;

// Labeled tree node; leaves carry entry ids. entry < -1 encodes a hole (used
// transiently while assembling split data).
struct LNode {
    int gen = -1;
    int basis = 0;
    int entry = 0;
    std::vector<LNode> children;

    bool is_leaf() const { return gen < 0; }
    static LNode leaf(int entry) {
        LNode n;
        n.entry = entry;
        return n;
    }
    static LNode vertex(int gen, int basis, std::vector<LNode> ch) {
        LNode n;
        n.gen = gen;
        n.basis = basis;
        n.children = std::move(ch);
        return n;
    }
};

// Canonical labeled tree: children sorted by encoding at every vertex, ties
// resolved through the generator's (monomial) symmetric action. The free
// P-algebra and cofree coalgebra components are spanned by these.
class LTree {
  public:
    LTree() = default;
    LTree(const SModule& e, const LTable& t, LNode root); // trusts canonical form

    const LNode& root() const { return root_; }
    int weight() const { return weight_; }           // vertex count
    int degree() const { return degree_; }           // generator + entry degrees
    int entry_weight() const { return eweight_; }    // sum of entry weights
    int leaves() const { return leaves_; }
    const std::string& key() const { return key_; }
    std::vector<int> entry_multiset() const;         // sorted entry ids

    bool operator<(const LTree& o) const { return key_ < o.key_; }
    bool operator==(const LTree& o) const { return key_ == o.key_; }

  private:
    LNode root_ = LNode::leaf(0);
    int weight_ = 0, degree_ = 0, eweight_ = 0, leaves_ = 1;
    std::string key_;
};

class LElement {
  public:
    bool zero() const { return terms_.empty(); }
    const std::map<LTree, Rat>& terms() const { return terms_; }
    void add_term(const LTree& t, const Rat& c);
    LElement& operator+=(const LElement& o);
    LElement scaled(const Rat& c) const;
    bool operator==(const LElement& o) const { return terms_ == o.terms_; }

  private:
    std::map<LTree, Rat> terms_;
};

// Rewrites a raw labeled tree into canonical form. Requires every generator
// action matrix to be monomial (at most one entry per column); equal subtrees
// under a signed stabilizer can collapse the class to zero.
LElement lcanonicalize(const SModule& e, const LTable& t, const LNode& raw,
                       const Rat& coef = Rat(1));

// All canonical labeled trees with the given vertex count over leaf labels
// drawn from `entries` (a sorted multiset, one per leaf).
std::vector<LTree> enumerate_ltrees(const SModule& e, const LTable& t, int weight,
                                    const std::vector<int>& entries);

struct LBasis {
    std::vector<LTree> elems;
    std::map<std::string, int> index;

    int dim() const { return static_cast<int>(elems.size()); }
    int find(const LTree& t) const;
    int find_key(const std::string& k) const;
    SparseVec to_vec(const LElement& x) const;
    LElement from_vec(const SparseVec& v) const;
};

LBasis make_lbasis(std::vector<LTree> elems);

// Every way to cut the tree into a root-connected cluster (holes numbered by
// planar position, entry = -2 - hole) and the dangling pieces. Pieces of weight
// zero are bare entries. `sign` is the Koszul sign of regrouping the factors as
// (cluster, piece_1, ..., piece_r).
struct LClusterSplit {
    LNode cluster;                 // holes at entry -2-i
    std::vector<LNode> pieces;     // piece i hangs at hole i (may be a bare leaf)
    int cluster_weight = 0;
    int sign = 1;
};

std::vector<LClusterSplit> lcluster_splits(const SModule& e, const LTable& t, const LTree& x);

// Splits off one full subtree (the piece) leaving a one-hole upper part.
struct LSubtreeSplit {
    LNode upper;  // hole at entry -2
    LNode piece;  // weight >= 1
    int sign = 1;
};

std::vector<LSubtreeSplit> lsubtree_splits(const SModule& e, const LTable& t, const LTree& x);

// Substitutes nodes for the holes of a cluster (hole i <- repl[i]).
LNode fill_holes(const LNode& cluster, const std::vector<LNode>& repl);

// Numbered-tree view of a pure cluster (all leaves are holes): hole i becomes
// leaf i+1.
TreeNode cluster_to_numbered(const LNode& cluster);

// Deterministic encoding of a raw labeled node (holes included).
std::string lnode_key_string(const LNode& n);

} // namespace koszul

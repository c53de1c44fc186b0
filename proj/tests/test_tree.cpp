#include "doctest.h"

#include <random>

#include "koszul/tree.hpp"

using namespace koszul;

namespace {

SModule one_sym_binary() { return {GeneratorSymbol::trivial("m")}; }
SModule one_antisym_binary() { return {GeneratorSymbol::sign("b")}; }
SModule regular_binary() { return {GeneratorSymbol::regular("m")}; }

// Independent recursive counting oracle for dim F(E)(n)^(w): sums over the root
// generator, ordered-by-min leaf set partitions and weight compositions, without
// building any trees.
long count_oracle(const SModule& e, const std::vector<int>& labels, int w);

long count_partitions(const SModule& e, const std::vector<int>& rest, int blocks_left,
                      std::vector<std::vector<int>>& blocks, int w_left) {
    if (rest.empty()) {
        if (blocks_left != 0) return 0;
        // distribute w_left over the blocks
        std::function<long(size_t, int)> dist = [&](size_t bi, int w) -> long {
            if (bi == blocks.size()) return w == 0 ? 1 : 0;
            long total = 0;
            for (int wb = 0; wb <= w; ++wb)
                total += count_oracle(e, blocks[bi], wb) * dist(bi + 1, w - wb);
            return total;
        };
        return dist(0, w_left);
    }
    long total = 0;
    int x = rest[0];
    std::vector<int> rest2(rest.begin() + 1, rest.end());
    for (size_t b = 0; b < blocks.size(); ++b) {
        blocks[b].push_back(x);
        total += count_partitions(e, rest2, blocks_left, blocks, w_left);
        blocks[b].pop_back();
    }
    if (blocks_left > 0) {
        blocks.emplace_back(1, x);
        total += count_partitions(e, rest2, blocks_left - 1, blocks, w_left);
        blocks.pop_back();
    }
    return total;
}

long count_oracle(const SModule& e, const std::vector<int>& labels, int w) {
    if (w == 0) return labels.size() == 1 ? 1 : 0;
    long total = 0;
    for (const auto& g : e) {
        if (static_cast<int>(labels.size()) < g.arity && g.arity > 1) continue;
        std::vector<std::vector<int>> blocks;
        std::vector<int> rest = labels;
        total += g.dim * count_partitions(e, rest, g.arity, blocks, w - 1);
    }
    return total;
}

long count_all_weights(const SModule& e, int n) {
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i + 1;
    long total = 0;
    for (int w = 0; w <= 2 * n; ++w) total += count_oracle(e, labels, w);
    return total;
}

OperadElement random_element(std::mt19937& rng, const SModule& e, int arity, int weight) {
    auto basis = enumerate_trees(e, arity, weight);
    REQUIRE(!basis.empty());
    std::uniform_int_distribution<int> pick(0, static_cast<int>(basis.size()) - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    OperadElement x(arity);
    for (int k = 0; k < 3; ++k) {
        int c = coef(rng);
        if (c) x.add_term(basis[pick(rng)], c);
    }
    if (x.zero()) x.add_term(basis[0], 1);
    return x;
}

Perm random_perm(std::mt19937& rng, int n) {
    Perm p = perm_identity(n);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

TreeMonomial corolla(const SModule& e, int gen, int basis) {
    std::vector<TreeNode> ch;
    for (int l = 1; l <= e[gen].arity; ++l) ch.push_back(TreeNode::leaf_node(l));
    return TreeMonomial(e, TreeNode::vertex(gen, basis, ch));
}

} // namespace

TEST_CASE("free operad dimensions: one symmetric binary generator") {
    SModule e = one_sym_binary();
    // dims 1, 1, 3, 15, 105 at n = 1..5 (all weight n-1)
    std::vector<long> expected{1, 1, 3, 15, 105};
    for (int n = 1; n <= 5; ++n) {
        auto basis = enumerate_trees(e, n, n - 1);
        CHECK(static_cast<long>(basis.size()) == expected[n - 1]);
        CHECK(count_all_weights(e, n) == expected[n - 1]);
    }
}

TEST_CASE("free operad dimensions: regular representation generator") {
    SModule e = regular_binary();
    CHECK(enumerate_trees(e, 3, 2).size() == 12); // 3 shuffle shapes x 2 x 2 labels
    CHECK(count_all_weights(e, 3) == 12);
    CHECK(enumerate_trees(e, 4, 3).size() == count_all_weights(e, 4));
}

TEST_CASE("free operad dimensions: empty module") {
    SModule e;
    CHECK(enumerate_trees(e, 1, 0).size() == 1); // the identity
    CHECK(enumerate_trees(e, 2, 1).empty());
    CHECK(enumerate_trees(e, 2, 0).empty());
}

TEST_CASE("free operad dimensions: unary generators") {
    SModule e{GeneratorSymbol::trivial("x", 1), GeneratorSymbol::trivial("y", 1)};
    // words in two letters
    CHECK(enumerate_trees(e, 1, 0).size() == 1);
    CHECK(enumerate_trees(e, 1, 1).size() == 2);
    CHECK(enumerate_trees(e, 1, 3).size() == 8);
}

TEST_CASE("canonicalize") {
    SModule sym = one_sym_binary();
    SModule anti = one_antisym_binary();

    SUBCASE("already canonical is fixed") {
        auto basis = enumerate_trees(sym, 4, 3);
        for (const auto& t : basis) {
            OperadElement c = canonicalize(sym, t.root());
            REQUIRE(c.terms().size() == 1);
            CHECK(c.terms().begin()->first == t);
            CHECK(c.terms().begin()->second == 1);
        }
    }
    SUBCASE("symmetric corolla with swapped leaves") {
        TreeNode raw = TreeNode::vertex(0, 0, {TreeNode::leaf_node(2), TreeNode::leaf_node(1)});
        OperadElement c = canonicalize(sym, raw);
        REQUIRE(c.terms().size() == 1);
        CHECK(c.terms().begin()->second == 1);
        CHECK(c.terms().begin()->first == corolla(sym, 0, 0));
    }
    SUBCASE("antisymmetric corolla with swapped leaves") {
        TreeNode raw = TreeNode::vertex(0, 0, {TreeNode::leaf_node(2), TreeNode::leaf_node(1)});
        OperadElement c = canonicalize(anti, raw);
        REQUIRE(c.terms().size() == 1);
        CHECK(c.terms().begin()->second == -1);
    }
    SUBCASE("arity mismatch is a structural error") {
        TreeNode raw = TreeNode::vertex(0, 0, {TreeNode::leaf_node(1)});
        CHECK_THROWS_AS(canonicalize(sym, raw), Error);
    }
    SUBCASE("idempotent on every enumerated monomial (with degrees)") {
        SModule se = suspend(regular_binary());
        for (const auto& t : enumerate_trees(se, 4, 3)) {
            OperadElement c = canonicalize(se, t.root());
            REQUIRE(c.terms().size() == 1);
            CHECK(c.terms().begin()->first == t);
            CHECK(c.terms().begin()->second == 1);
        }
    }
}

TEST_CASE("apply_permutation is a right action") {
    std::mt19937 rng(4242);
    for (const SModule& e : {one_sym_binary(), one_antisym_binary(), regular_binary()}) {
        SUBCASE("group law") {
            for (int n = 2; n <= 4; ++n) {
                OperadElement x = random_element(rng, e, n, n - 1);
                Perm s = random_perm(rng, n), t = random_perm(rng, n);
                OperadElement lhs = apply_permutation(e, apply_permutation(e, x, s), t);
                OperadElement rhs = apply_permutation(e, x, perm_compose(t, s));
                CHECK(lhs == rhs);
            }
        }
    }
    SUBCASE("identity and corolla transposition") {
        SModule sym = one_sym_binary(), anti = one_antisym_binary();
        OperadElement cs(2), ca(2);
        cs.add_term(corolla(sym, 0, 0), 1);
        ca.add_term(corolla(anti, 0, 0), 1);
        Perm tau = perm_transposition(2, 0, 1);
        CHECK(apply_permutation(sym, cs, perm_identity(2)) == cs);
        CHECK(apply_permutation(sym, cs, tau) == cs);
        CHECK(apply_permutation(anti, ca, tau) == ca.scaled(-1));
    }
    SUBCASE("suspended module: group law with Koszul signs") {
        std::mt19937 rng2(77);
        SModule se = suspend(one_sym_binary());
        for (int n = 3; n <= 5; ++n) {
            OperadElement x = random_element(rng2, se, n, n - 1);
            Perm s = random_perm(rng2, n), t = random_perm(rng2, n);
            CHECK(apply_permutation(se, apply_permutation(se, x, s), t) ==
                  apply_permutation(se, x, perm_compose(t, s)));
        }
    }
}

TEST_CASE("graft") {
    SModule e = one_sym_binary();
    OperadElement c(2);
    c.add_term(corolla(e, 0, 0), 1);

    SUBCASE("with the identity") {
        OperadElement id(1);
        id.add_term(TreeMonomial::identity(), 1);
        OperadElement x = graft(e, c, 1, c);
        CHECK(graft(e, x, 2, id) == x);
        CHECK(graft(e, id, 1, x) == x);
    }
    SUBCASE("two corollas at slot 1 give the left comb") {
        OperadElement x = graft(e, c, 1, c);
        REQUIRE(x.terms().size() == 1);
        CHECK(x.terms().begin()->second == 1);
        CHECK(tree_text(e, x.terms().begin()->first) == "m(m(1, 2), 3)");
    }
    SUBCASE("graft equals canonicalize of the raw substitution") {
        std::mt19937 rng(5);
        SModule se = suspend(regular_binary());
        for (int trial = 0; trial < 30; ++trial) {
            auto b1 = enumerate_trees(se, 3, 2);
            auto b2 = enumerate_trees(se, 2, 1);
            std::uniform_int_distribution<int> p1(0, static_cast<int>(b1.size()) - 1);
            std::uniform_int_distribution<int> p2(0, static_cast<int>(b2.size()) - 1);
            std::uniform_int_distribution<int> slot(1, 3);
            const TreeMonomial& x = b1[p1(rng)];
            const TreeMonomial& y = b2[p2(rng)];
            OperadElement g = graft(se, x, slot(rng), y);
            REQUIRE(g.terms().size() == 1);
            // re-canonicalizing the produced tree changes nothing
            OperadElement again = canonicalize(se, g.terms().begin()->first.root(),
                                               g.terms().begin()->second);
            CHECK(again == g);
        }
    }
}

TEST_CASE("operad axioms for grafting") {
    std::mt19937 rng(2024);
    for (const SModule& e :
         {one_sym_binary(), regular_binary(), suspend(one_antisym_binary())}) {
        for (int trial = 0; trial < 12; ++trial) {
            OperadElement x = random_element(rng, e, 3, 2);
            OperadElement y = random_element(rng, e, 2, 1);
            OperadElement z = random_element(rng, e, 2, 1);

            // sequential: (x o_1 y) o_1 z = x o_1 (y o_1 z)
            CHECK(graft(e, graft(e, x, 1, y), 1, z) == graft(e, x, 1, graft(e, y, 1, z)));

            // parallel: (x o_i y) o_{j+|y|-1} z = (-1)^{|y||z|} (x o_j z) o_i y, i<j
            int i = 1, j = 3;
            OperadElement lhs = graft(e, graft(e, x, i, y), j + y.arity() - 1, z);
            int sgn = (y.terms().begin()->first.degree() % 2) &&
                              (z.terms().begin()->first.degree() % 2)
                          ? -1
                          : 1;
            OperadElement rhs = graft(e, graft(e, x, j, z), i, y).scaled(sgn);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("splits invert grafting") {
    std::mt19937 rng(31337);
    SModule se = suspend(regular_binary());
    auto basis = enumerate_trees(se, 4, 3);
    for (const auto& t : basis) {
        for (const auto& s : subtree_splits(se, t)) {
            // graft(upper, slot, lower) relabeled by the block shuffle equals sign * t
            OperadElement up(s.upper.arity()), lo(s.lower.arity());
            up.add_term(s.upper, 1);
            lo.add_term(s.lower, 1);
            OperadElement merged = graft(se, up, s.slot, lo);
            REQUIRE(merged.terms().size() == 1);

            std::vector<int> lower_sorted(s.leaves.begin(), s.leaves.end());
            int m = static_cast<int>(lower_sorted.size());
            std::vector<int> rest;
            for (int l = 1; l <= t.arity(); ++l)
                if (!s.leaves.count(l)) rest.push_back(l);
            Perm sigma(t.arity());
            for (int p = 1; p <= t.arity(); ++p) {
                int target;
                if (p < s.slot) target = rest[p - 1];
                else if (p < s.slot + m) target = lower_sorted[p - s.slot];
                else target = rest[p - m - 1];
                sigma[p - 1] = target - 1;
            }
            OperadElement back = apply_permutation(se, merged, sigma);
            REQUIRE(back.terms().size() == 1);
            CHECK(back.terms().begin()->first == t);
            CHECK(back.terms().begin()->second == Rat(s.sign));
        }
    }
}

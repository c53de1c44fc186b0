#include "doctest.h"

#include "koszul/operad.hpp"
#include "koszul/presets.hpp"

using namespace koszul;

namespace {

// multilinear monomial oracles for the classical dims
long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// Lyndon-word count of multilinear words on n distinct letters: enumerate the
// permutations that are strictly smallest among their rotations.
long lyndon_multilinear(int n) {
    std::vector<int> word(n);
    for (int i = 0; i < n; ++i) word[i] = i;
    long count = 0;
    do {
        bool lyndon = true;
        for (int r = 1; r < n && lyndon; ++r) {
            std::vector<int> rot(word.begin() + r, word.end());
            rot.insert(rot.end(), word.begin(), word.begin() + r);
            if (rot < word) lyndon = false;
        }
        if (lyndon) ++count;
    } while (std::next_permutation(word.begin(), word.end()));
    return count;
}

} // namespace

TEST_CASE("preset dimensions from the quadratic quotient") {
    SUBCASE("associative: n!") {
        TruncatedOperad as(preset_as(4));
        for (int n = 1; n <= 4; ++n) CHECK(as.total_dim(n) == factorial(n));
    }
    SUBCASE("commutative: 1") {
        TruncatedOperad com(preset_com(4));
        for (int n = 1; n <= 4; ++n) CHECK(com.total_dim(n) == 1);
    }
    SUBCASE("lie: (n-1)! via the Lyndon oracle") {
        TruncatedOperad lie(preset_lie(4));
        for (int n = 1; n <= 4; ++n) {
            CHECK(lie.total_dim(n) == factorial(n - 1));
            CHECK(lie.total_dim(n) == lyndon_multilinear(n));
        }
    }
}

TEST_CASE("relations outside weight two are rejected") {
    OperadPresentation p = preset_com(3);
    SModule e = p.generators;
    // a weight-3 tree is not a legal relation
    auto deep = enumerate_trees(e, 4, 3);
    OperadElement bad(4);
    bad.add_term(deep.front(), 1);
    p.relations[4].push_back(bad);
    CHECK_THROWS_AS(TruncatedOperad{p}, Error);
}

TEST_CASE("operad axioms hold for the quotient composition") {
    TruncatedOperad lie(preset_lie(4));
    // sequential and parallel axioms on all basis triples within reach
    auto dim2 = lie.dim(2, 1);
    REQUIRE(dim2 == 1);
    SparseVec b{{0, Rat(1)}};
    // (b o_1 b) o_1 b vs b o_1 (b o_1 b)
    SparseVec left = lie.compose(3, 2, lie.compose(2, 1, b, 1, 2, 1, b), 1, 2, 1, b);
    SparseVec right = lie.compose(2, 1, b, 1, 3, 2, lie.compose(2, 1, b, 1, 2, 1, b));
    CHECK(left == right);
    // parallel: (b o_1 b) o_3 b = (b o_2 b) o_1 b
    SparseVec p1 = lie.compose(3, 2, lie.compose(2, 1, b, 1, 2, 1, b), 3, 2, 1, b);
    SparseVec p2 = lie.compose(3, 2, lie.compose(2, 1, b, 2, 2, 1, b), 1, 2, 1, b);
    CHECK(p1 == p2);
    // weight adds
    CHECK(lie.dim(4, 3) == 6);
}

TEST_CASE("koszul dual presentations") {
    SUBCASE("Com! has the dims of Lie") {
        OperadPresentation dual = koszul_dual_operad(preset_com(4));
        CHECK(dual.relations.at(3).size() == 1); // the Jacobi orbit is one relation line
        TruncatedOperad d(dual);
        std::vector<long> expected{1, 1, 2, 6};
        for (int n = 1; n <= 4; ++n) CHECK(d.total_dim(n) == expected[n - 1]);
    }
    SUBCASE("Lie! has the dims of Com") {
        TruncatedOperad d(koszul_dual_operad(preset_lie(4)));
        for (int n = 1; n <= 4; ++n) CHECK(d.total_dim(n) == 1);
    }
    SUBCASE("As! has the dims of As") {
        TruncatedOperad d(koszul_dual_operad(preset_as(4)));
        for (int n = 1; n <= 4; ++n) CHECK(d.total_dim(n) == factorial(n));
    }
    SUBCASE("double dual has the dims of the original") {
        for (const OperadPresentation& p : {preset_as(4), preset_com(4), preset_lie(4)}) {
            TruncatedOperad orig(p);
            TruncatedOperad dd(koszul_dual_operad(koszul_dual_operad(p)));
            for (int n = 1; n <= 4; ++n) CHECK(dd.total_dim(n) == orig.total_dim(n));
        }
    }
    SUBCASE("mixed arities are unsupported") {
        OperadPresentation p = preset_com(3);
        p.generators.push_back(GeneratorSymbol::trivial("u", 1));
        p.max_weight = 3;
        CHECK_THROWS_AS(koszul_dual_operad(p), Error);
    }
}

TEST_CASE("weight grading of composition") {
    TruncatedOperad as(preset_as(4));
    for (int n1 = 2; n1 <= 3; ++n1)
        for (int n2 = 2; n2 <= 2; ++n2) {
            if (n1 + n2 - 1 > 4) continue;
            // all composition matrix entries land in weight w1+w2 by construction;
            // spot-check that composing basis vectors gives nonzero output somewhere
            const Matrix& m = as.compose_matrix(n1, n1 - 1, 1, n2, n2 - 1);
            CHECK(m.rows() == as.dim(n1 + n2 - 1, n1 + n2 - 2));
            CHECK_FALSE(m.zero());
        }
}

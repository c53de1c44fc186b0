#include "doctest.h"

#include "koszul/algebra.hpp"
#include "koszul/presets.hpp"

using namespace koszul;

namespace {

AlgebraPresentation kxy(int w = 4) {
    AlgebraPresentation p;
    p.operad = preset_as();
    p.gen_names = {"x", "y"};
    p.max_weight = w;
    p.name = "kxy";
    // commutativity: m(x,y) - m(y,x)
    p.relations.push_back({{Rat(1), 0, 0, {0, 1}}, {Rat(-1), 0, 0, {1, 0}}});
    return p;
}

AlgebraPresentation kx2(int w = 4) {
    AlgebraPresentation p;
    p.operad = preset_as();
    p.gen_names = {"x"};
    p.max_weight = w;
    p.name = "kx2";
    p.relations.push_back({{Rat(1), 0, 0, {0, 0}}});
    return p;
}

AlgebraPresentation free_as2(int w = 3) {
    AlgebraPresentation p;
    p.operad = preset_as();
    p.gen_names = {"x", "y"};
    p.max_weight = w;
    p.name = "free2";
    return p;
}

AlgebraPresentation com_free1(int w = 3) {
    AlgebraPresentation p;
    p.operad = preset_com();
    p.gen_names = {"x"};
    p.max_weight = w;
    p.name = "sym1";
    return p;
}

} // namespace

TEST_CASE("monogene algebra dimensions") {
    SUBCASE("free commutative algebra on one generator") {
        MonogeneAlgebra a(com_free1());
        CHECK(a.dims() == std::vector<int>{1, 1, 1, 1});
    }
    SUBCASE("dual numbers: K<x>/(x^2)") {
        MonogeneAlgebra a(kx2(3));
        CHECK(a.dims() == std::vector<int>{1, 0, 0, 0});
    }
    SUBCASE("K[x,y] as an associative algebra (monomial count oracle)") {
        MonogeneAlgebra a(kxy(4));
        std::vector<int> d = a.dims();
        for (int w = 0; w <= 4; ++w) CHECK(d[w] == w + 2); // dim K[x,y]_{w+1}
    }
    SUBCASE("free associative algebra on two generators") {
        MonogeneAlgebra a(free_as2(3));
        CHECK(a.dims() == std::vector<int>{2, 4, 8, 16});
    }
    SUBCASE("dim A + dim ideal = dim free, weightwise") {
        MonogeneAlgebra a(kxy(3));
        for (int w = 0; w <= 3; ++w)
            CHECK(a.dim(w) + a.ideal(w).dim() == a.free_basis(w).dim());
    }
    SUBCASE("relations outside E(V) are rejected") {
        AlgebraPresentation p = kxy(3);
        p.relations.push_back({{Rat(1), 0, 0, {0}}}); // arity mismatch
        CHECK_THROWS_AS(MonogeneAlgebra{p}, Error);
    }
}

TEST_CASE("algebra multiplication") {
    MonogeneAlgebra a(kxy(3));
    // x*y = y*x in the quotient
    SparseVec x{{0, Rat(1)}}, y{{1, Rat(1)}};
    SparseVec xy = a.apply_corolla(0, 0, {{0, x}, {0, y}});
    SparseVec yx = a.apply_corolla(0, 0, {{0, y}, {0, x}});
    CHECK(xy == yx);
    // associativity through the quotient
    SparseVec xy_y = a.apply_corolla(0, 0, {{1, xy}, {0, y}});
    SparseVec x_yy = a.apply_corolla(0, 0, {{0, x}, {1, a.apply_corolla(0, 0, {{0, y}, {0, y}})}});
    CHECK(xy_y == x_yy);
    CHECK_FALSE(xy.empty());
}

TEST_CASE("koszul dual algebra") {
    SUBCASE("K[x,y] dualizes to the exterior algebra") {
        auto ctx = build_algebra_context(kxy(4));
        AlgebraPresentation dp = koszul_dual_algebra_presentation(*ctx.algebra);
        MonogeneAlgebra dual(dp);
        CHECK(dual.dims() == std::vector<int>{2, 1, 0, 0, 0});
    }
    SUBCASE("S = 0 gives the dual concentrated in weight zero") {
        MonogeneAlgebra a(free_as2(3));
        MonogeneAlgebra dual(koszul_dual_algebra_presentation(a));
        CHECK(dual.dims() == std::vector<int>{2, 0, 0, 0});
    }
    SUBCASE("S = E(V) gives the free dual algebra") {
        AlgebraPresentation p = free_as2(3);
        // full relation space: all four words
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) p.relations.push_back({{Rat(1), 0, 0, {i, j}}});
        MonogeneAlgebra a(p);
        CHECK(a.dims() == std::vector<int>{2, 0, 0, 0});
        MonogeneAlgebra dual(koszul_dual_algebra_presentation(a));
        CHECK(dual.dims() == std::vector<int>{2, 4, 8, 16});
    }
    SUBCASE("double dual has the dims of the original") {
        for (auto pres : {kxy(3), kx2(3)}) {
            MonogeneAlgebra a(pres);
            MonogeneAlgebra dd(
                koszul_dual_algebra_presentation(MonogeneAlgebra(koszul_dual_algebra_presentation(a))));
            CHECK(dd.dims() == a.dims());
        }
    }
}

TEST_CASE("koszul dual coalgebra") {
    SUBCASE("weight 0 is V and weight 1 is sS") {
        auto ctx = build_algebra_context(kxy(3));
        const KoszulDualCoalgebra& c = *ctx.dual_coalgebra;
        CHECK(c.dim(0) == 2);
        CHECK(c.dim(1) == 1);
    }
    SUBCASE("dims match the dual algebra (both routes)") {
        for (auto pres : {kxy(4), kx2(4), free_as2(3)}) {
            auto ctx = build_algebra_context(pres);
            MonogeneAlgebra dual(koszul_dual_algebra_presentation(*ctx.algebra));
            CAPTURE(pres.name);
            CHECK(ctx.dual_coalgebra->dims() == dual.dims());
        }
    }
    SUBCASE("free algebra has A-upside-down = sV") {
        auto ctx = build_algebra_context(free_as2(3));
        CHECK(ctx.dual_coalgebra->dims() == std::vector<int>{2, 0, 0, 0});
    }
    SUBCASE("commutative example") {
        auto ctx = build_algebra_context(com_free1());
        CHECK(ctx.dual_coalgebra->dims() == std::vector<int>{1, 0, 0, 0});
    }
}

TEST_CASE("coproduct components") {
    auto ctx = build_algebra_context(kx2(4));
    const KoszulDualCoalgebra& c = *ctx.dual_coalgebra;
    CHECK(c.dims() == std::vector<int>{1, 1, 1, 1, 1}); // dual of K[t]

    SUBCASE("arity 1 is the identity") {
        for (int w = 0; w <= 3; ++w) {
            auto cp = coproduct_component(c, 1, w);
            CHECK(cp.matrix == Matrix::identity(c.dim(w)));
        }
    }
    SUBCASE("weight 1 under Delta(2) is the inclusion of sS") {
        auto cp = coproduct_component(c, 2, 1);
        CHECK(cp.matrix.rows() == cp.target.dim());
        CHECK(rank_of(cp.matrix) == 1); // injective on the one-dimensional component
    }
    SUBCASE("weight 2 decomposition is injective and coassociative") {
        auto cp = coproduct_component(c, 2, 2);
        CHECK(rank_of(cp.matrix) == c.dim(2));

        // coassociativity at the raw level: the two iterated two-piece splits both
        // refine to the same three-piece cluster data
        const SModule& se = c.sgens();
        const LTable& vt = ctx.algebra->ventries();
        LElement x = c.rep1(2, 0);
        std::map<std::string, Rat> once; // direct 3-piece clusters
        for (const auto& [t, coef] : x.terms())
            for (const auto& cs : lcluster_splits(se, vt, t))
                if (cs.pieces.size() == 3 && cs.cluster_weight == 2) {
                    std::string key = lnode_key_string(cs.cluster);
                    for (const auto& p : cs.pieces) key += "|" + lnode_key_string(p);
                    once[key] += Rat(cs.sign) * coef;
                }
        bool any = false;
        for (auto& [k, v] : once)
            if (!is_zero(v)) any = true;
        CHECK(any);
    }
}

TEST_CASE("maurer-cartan for varkappa") {
    for (auto pres : {kxy(4), kx2(4), free_as2(3), com_free1()}) {
        auto ctx = build_algebra_context(pres);
        CAPTURE(pres.name);
        CHECK(mc_check_varkappa(*ctx.algebra, *ctx.dual_coalgebra).ok);
    }
    SUBCASE("fault injection: flipping one twist sign fails at weight 1") {
        auto ctx = build_algebra_context(kxy(3));
        TwistFaults f;
        f.mc_flip_shape_sign = true;
        McReport r = mc_check_varkappa(*ctx.algebra, *ctx.dual_coalgebra, f);
        CHECK_FALSE(r.ok);
        CHECK(r.detail.find("weight 1") != std::string::npos);
    }
}

#include "doctest.h"

#include "koszul/barcobar.hpp"
#include "koszul/presets.hpp"

using namespace koszul;

namespace {

AlgebraPresentation kxy_pres(int w) {
    AlgebraPresentation p;
    p.operad = preset_as();
    p.gen_names = {"x", "y"};
    p.max_weight = w;
    p.name = "kxy";
    p.relations.push_back({{Rat(1), 0, 0, {0, 1}}, {Rat(-1), 0, 0, {1, 0}}});
    return p;
}

AlgebraPresentation kx2_pres(int w) {
    AlgebraPresentation p;
    p.operad = preset_as();
    p.gen_names = {"x"};
    p.max_weight = w;
    p.name = "kx2";
    p.relations.push_back({{Rat(1), 0, 0, {0, 0}}});
    return p;
}

AlgebraPresentation free1_pres(int w) {
    AlgebraPresentation p;
    p.operad = preset_as();
    p.gen_names = {"x"};
    p.max_weight = w;
    p.name = "free1";
    return p;
}

struct Built {
    AlgebraContext ctx;
    std::shared_ptr<BarComplex> bar;
    std::shared_ptr<CobarComplex> cobar;
};

Built build_all(const AlgebraPresentation& p) {
    Built b;
    b.ctx = build_algebra_context(p);
    b.bar = std::make_shared<BarComplex>(b.ctx.algebra, b.ctx.dual_coalgebra);
    b.cobar = std::make_shared<CobarComplex>(b.ctx.algebra, b.ctx.dual_coalgebra);
    return b;
}

} // namespace

TEST_CASE("bar construction of K<x>/(x^2)") {
    Built b = build_all(kx2_pres(4));

    SUBCASE("weight-degree zero row is the cofree part on the generators") {
        // at internal weight w the omega = 0 stratum is sP-dual(V), one dimension
        // per weight for a single generator over the associative presets
        for (int w = 1; w <= 4; ++w) CHECK(b.bar->dim(w, 0) >= b.ctx.dual_coalgebra->dim(w));
    }
    SUBCASE("H0 equals the dual coalgebra as subspaces") {
        H0Report h = bar_h0_check(*b.bar);
        CHECK(h.ok);
        CHECK(h.h0_dims == std::vector<int>{1, 1, 1, 1, 1});
    }
    SUBCASE("bar homology concentrated in weight-degree zero") {
        BarHomologyReport r = bar_homology(*b.bar);
        CHECK(r.koszul);
        for (int w = 1; w <= 4; ++w) {
            CHECK(r.by_weight.at(w).betti.at(0) == 1);
        }
    }
}

TEST_CASE("bar construction of K[x,y]") {
    Built b = build_all(kxy_pres(4));
    SUBCASE("H0 dims match the dual coalgebra") {
        H0Report h = bar_h0_check(*b.bar);
        CHECK(h.ok);
        CHECK(h.h0_dims == std::vector<int>{2, 1, 0, 0, 0});
    }
    SUBCASE("koszul verdict") {
        BarHomologyReport r = bar_homology(*b.bar);
        CHECK(r.koszul);
    }
}

TEST_CASE("bar construction of a free algebra") {
    Built b = build_all(free1_pres(3));
    H0Report h = bar_h0_check(*b.bar);
    CHECK(h.ok);
    CHECK(h.h0_dims == std::vector<int>{1, 0, 0, 0});
    BarHomologyReport r = bar_homology(*b.bar);
    CHECK(r.koszul);
}

TEST_CASE("bar fault injection breaks d*d = 0") {
    auto ctx = build_algebra_context(kxy_pres(3));
    TwistFaults f;
    f.flip_bar_sign = true;
    BarComplex bar(ctx.algebra, ctx.dual_coalgebra, f);
    bool failed = false;
    for (int w = 1; w <= 3 && !failed; ++w) {
        try {
            homology(bar.weight_complex(w));
        } catch (const Error& e) {
            failed = e.code() == ErrorCode::structural;
        }
    }
    CHECK(failed);
}

TEST_CASE("cobar construction") {
    SUBCASE("free algebra: homology is the algebra") {
        Built b = build_all(free1_pres(3));
        CobarReport r = build_cobar_and_check(*b.cobar);
        CHECK(r.quasi_iso);
        for (int w = 1; w <= 3; ++w) {
            CHECK(r.by_weight.at(w).betti.at(0) == b.ctx.algebra->dim(w));
            CHECK(r.by_weight.at(w).total() == b.ctx.algebra->dim(w));
        }
    }
    SUBCASE("K<x>/(x^2): homology per weight is (1, 0, 0, ...)") {
        Built b = build_all(kx2_pres(4));
        CobarReport r = build_cobar_and_check(*b.cobar);
        CHECK(r.quasi_iso);
        for (int w = 1; w <= 4; ++w) {
            CHECK(r.by_weight.at(w).betti.at(0) == b.ctx.algebra->dim(w));
            CHECK(r.by_weight.at(w).total() == b.ctx.algebra->dim(w));
        }
    }
    SUBCASE("K[x,y]: quasi-isomorphism onto the algebra") {
        Built b = build_all(kxy_pres(4));
        CobarReport r = build_cobar_and_check(*b.cobar);
        CHECK(r.quasi_iso);
    }
}

TEST_CASE("bar and cobar verdicts agree") {
    for (auto pres : {kxy_pres(3), kx2_pres(3), free1_pres(3)}) {
        Built b = build_all(pres);
        CAPTURE(pres.name);
        CHECK(bar_homology(*b.bar).koszul == build_cobar_and_check(*b.cobar).quasi_iso);
    }
}

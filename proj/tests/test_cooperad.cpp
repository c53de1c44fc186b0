#include "doctest.h"

#include "koszul/cooperad.hpp"
#include "koszul/presets.hpp"

using namespace koszul;

namespace {

std::shared_ptr<TruncatedOperad> build(const OperadPresentation& p) {
    return std::make_shared<TruncatedOperad>(p);
}

} // namespace

TEST_CASE("dual cooperad dimensions match the dual operad") {
    for (const char* name : {"as", "com", "lie"}) {
        auto p = build(load_preset(name, 4));
        TruncatedCooperad c(p);
        TruncatedOperad dual(koszul_dual_operad(p->presentation()));
        for (int n = 1; n <= 4; ++n) {
            CAPTURE(name);
            CAPTURE(n);
            CHECK(c.total_dim(n) == dual.total_dim(n));
        }
    }
}

TEST_CASE("cooperad weight-1 and weight-2 components") {
    auto p = build(preset_lie(4));
    TruncatedCooperad c(p);
    CHECK(c.dim(2, 1) == 1);       // sE
    CHECK(c.dim(3, 2) == 1);       // s^2 R: the Jacobi line
    CHECK(c.dim(1, 0) == 1);       // the unit
}

TEST_CASE("maurer-cartan for kappa") {
    for (const char* name : {"as", "com", "lie"}) {
        auto p = build(load_preset(name, 4));
        TruncatedCooperad c(p);
        CAPTURE(name);
        CHECK(mc_check_kappa(*p, c).ok);
    }
    SUBCASE("vacuous for the trivial presentation") {
        OperadPresentation empty;
        empty.name = "unit";
        empty.max_arity = 3;
        auto p = build(empty);
        TruncatedCooperad c(p);
        CHECK(mc_check_kappa(*p, c).ok);
    }
    SUBCASE("fault injection: flipping one shape's sign breaks it at arity 3") {
        auto p = build(preset_as(3));
        TruncatedCooperad c(p);
        TwistFaults f;
        f.mc_flip_shape_sign = true;
        McReport r = mc_check_kappa(*p, c, f);
        CHECK_FALSE(r.ok);
        CHECK(r.detail.find("arity 3") != std::string::npos);
    }
}

TEST_CASE("operadic koszul complexes are acyclic for the presets") {
    for (const char* name : {"as", "com", "lie"}) {
        auto p = build(load_preset(name, 4));
        TruncatedCooperad c(p);
        CAPTURE(name);
        OperadKoszulVerdict v = operadic_koszul_verdict(*p, c, 4);
        CHECK(v.koszul);
    }
    SUBCASE("trivial presentation: the complex is the unit") {
        OperadPresentation empty;
        empty.name = "unit";
        empty.max_arity = 3;
        auto p = build(empty);
        TruncatedCooperad c(p);
        auto h = operadic_koszul_homology(*p, c, KoszulSide::left, 1);
        CHECK(h.total() == 1);
        CHECK(h.betti.at(0) == 1);
    }
    SUBCASE("fault injection: flipping the second-factor sign breaks d*d = 0") {
        auto p = build(preset_com(3));
        TruncatedCooperad c(p);
        TwistFaults f;
        f.complex_flip_block2 = true;
        CHECK_THROWS_AS(operadic_koszul_homology(*p, c, KoszulSide::left, 3, f), Error);
    }
}

TEST_CASE("delta_1 coassociativity via double splits") {
    // both iterated decompositions of every basis element agree: splitting twice in
    // either order produces the same multiset of (upper, middle, lower) components.
    auto p = build(preset_as(4));
    TruncatedCooperad c(p);
    const SModule& se = c.sgens();
    for (int n = 3; n <= 4; ++n) {
        for (int w : c.weights(n)) {
            if (w < 2) continue;
            for (int idx = 0; idx < c.dim(n, w); ++idx) {
                OperadElement x = c.rep(n, w, idx);
                // split components grouped by leaf set must individually lie in the
                // cooperad components (the defining property of the subcooperad)
                std::map<std::string, SparseVec> upper_parts, lower_parts;
                for (const auto& [t, coef] : x.terms()) {
                    for (const auto& s : subtree_splits(se, t)) {
                        std::string key;
                        for (int l : s.leaves) key += std::to_string(l) + ",";
                        key += "|" + std::to_string(s.lower.weight());
                        const FreeBasis& ufb = c.free_basis(s.upper.arity(), s.upper.weight());
                        const FreeBasis& lfb = c.free_basis(s.lower.arity(), s.lower.weight());
                        int flat = ufb.find(s.upper) * lfb.dim() + lfb.find(s.lower);
                        auto& cell = upper_parts[key];
                        auto it = cell.find(flat);
                        if (it == cell.end()) cell.emplace(flat, Rat(s.sign) * coef);
                        else {
                            it->second += Rat(s.sign) * coef;
                            if (is_zero(it->second)) cell.erase(it);
                        }
                        (void)lower_parts;
                    }
                }
                for (auto& [key, vec] : upper_parts) {
                    if (vec.empty()) continue;
                    // parse lower weight back out of the key
                    auto bar = key.find('|');
                    int lw = std::stoi(key.substr(bar + 1));
                    int m = static_cast<int>(std::count(key.begin(), key.begin() + bar, ','));
                    int ua = n - m + 1;
                    int uw = w - lw;
                    std::vector<const Subspace*> facs{&c.component(ua, uw),
                                                      &c.component(m, lw)};
                    std::vector<int> dims{c.free_basis(ua, uw).dim(), c.free_basis(m, lw).dim()};
                    CHECK_NOTHROW(express_in_tensor(vec, facs, dims));
                }
            }
        }
    }
}

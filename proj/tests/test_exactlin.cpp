#include "doctest.h"

#include <random>

#include "koszul/chain.hpp"
#include "koszul/subspace.hpp"

using namespace koszul;

namespace {

Matrix from_rows(const std::vector<std::vector<int>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (rows[i][j]) m.set(i, j, rows[i][j]);
    return m;
}

Matrix random_matrix(std::mt19937& rng, int rows, int cols, int lo = -3, int hi = 3) {
    std::uniform_int_distribution<int> d(lo, hi);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            int v = d(rng);
            if (v) m.set(i, j, v);
        }
    return m;
}

// independent oracle: dumb O(n^3) row reduction computing only the rank
int rank_oracle(Matrix m) {
    int rank = 0;
    for (int c = 0; c < m.cols(); ++c) {
        int piv = -1;
        for (int r = rank; r < m.rows(); ++r)
            if (!is_zero(m.get(r, c))) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(m.row(piv), m.row(rank));
        for (int r = 0; r < m.rows(); ++r) {
            if (r == rank) continue;
            Rat f = m.get(r, c) / m.get(rank, c);
            if (!is_zero(f)) vec_axpy(m.row(r), -f, m.row(rank));
        }
        ++rank;
        if (rank == m.rows()) break;
    }
    return rank;
}

} // namespace

TEST_CASE("rational parsing") {
    CHECK(rat_str(rat_parse("2/4")) == "1/2");
    CHECK(rat_str(rat_parse("-6/3")) == "-2");
    CHECK(rat_str(rat_parse("7")) == "7");
    CHECK_THROWS_AS(rat_parse("1/0"), Error);
    CHECK_THROWS_AS(rat_parse("x"), Error);
    CHECK_THROWS_AS(rat_parse(""), Error);
}

TEST_CASE("rank_kernel_image basics") {
    SUBCASE("identity") {
        auto rki = rank_kernel_image(Matrix::identity(2));
        CHECK(rki.rank == 2);
        CHECK(rki.kernel.rows() == 0);
    }
    SUBCASE("proportional rows") {
        auto m = from_rows({{1, 2}, {2, 4}});
        auto rki = rank_kernel_image(m);
        CHECK(rki.rank == 1);
        REQUIRE(rki.kernel.rows() == 1);
        // kernel spanned by (-2, 1); echelon form normalizes the leading entry
        SparseVec v{{0, Rat(-2)}, {1, Rat(1)}};
        CHECK(Subspace::span(rki.kernel).contains(v));
    }
    SUBCASE("3x5 with rows r, 2r, r'") {
        // hand row-reduction oracle: rank 2
        auto m = from_rows({{1, 0, 2, -1, 3}, {2, 0, 4, -2, 6}, {0, 1, 1, 1, 0}});
        auto rki = rank_kernel_image(m);
        CHECK(rki.rank == 2);
        CHECK(rki.rank == rank_oracle(m));
        CHECK(rki.kernel.rows() == 5 - 2);
        CHECK(rki.image.rows() == 2);
    }
}

TEST_CASE("rank equals rank of transpose (random)") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 25; ++trial) {
        Matrix m = random_matrix(rng, 4 + trial % 3, 5, -2, 2);
        CHECK(rank_of(m) == rank_of(m.transpose()));
        CHECK(rank_of(m) == rank_oracle(m));
    }
}

TEST_CASE("subspace intersection") {
    SUBCASE("whole space with anything") {
        auto b = Subspace::span(from_rows({{1, 2, 0}, {0, 0, 1}}));
        CHECK(subspace_intersect(Subspace::full(3), b) == b);
    }
    SUBCASE("complementary lines") {
        auto a = Subspace::span(from_rows({{1, 0}}));
        auto b = Subspace::span(from_rows({{0, 1}}));
        CHECK(subspace_intersect(a, b).dim() == 0);
    }
    SUBCASE("random 3-dim subspaces of Q^5") {
        std::mt19937 rng(99);
        for (int trial = 0; trial < 10; ++trial) {
            Subspace a = Subspace::span(random_matrix(rng, 3, 5));
            Subspace b = Subspace::span(random_matrix(rng, 3, 5));
            if (a.dim() != 3 || b.dim() != 3) continue;
            Subspace c = subspace_intersect(a, b);
            CHECK(c.dim() >= 1); // 3 + 3 - 5
            // brute-force joint nullspace oracle: dim(a cap b) = 6 - rank[A^T | -B^T]
            Matrix joint(5, 6);
            for (int i = 0; i < 3; ++i)
                for (const auto& [col, v] : a.basis().row(i)) joint.add(col, i, v);
            for (int i = 0; i < 3; ++i)
                for (const auto& [col, v] : b.basis().row(i)) joint.add(col, 3 + i, -v);
            int expected = 6 - rank_oracle(joint);
            CHECK(c.dim() == expected);
            for (int i = 0; i < c.dim(); ++i) {
                CHECK(a.contains(c.basis().row(i)));
                CHECK(b.contains(c.basis().row(i)));
            }
        }
    }
    SUBCASE("ambient mismatch") {
        CHECK_THROWS_AS(subspace_intersect(Subspace::full(2), Subspace::full(3)), Error);
    }
}

TEST_CASE("subspace quotient") {
    SUBCASE("by zero") {
        auto q = subspace_quotient(Subspace::full(3), Subspace(3));
        CHECK(q.quotient_dim == 3);
        CHECK(rank_of(q.projection) == 3);
    }
    SUBCASE("by itself") {
        auto s = Subspace::span(from_rows({{1, 1}, {0, 1}}));
        auto q = subspace_quotient(s, s);
        CHECK(q.quotient_dim == 0);
    }
    SUBCASE("Q^3 by span{(1,1,0)}") {
        auto sub = Subspace::span(from_rows({{1, 1, 0}}));
        auto q = quotient_by(sub, 3);
        CHECK(q.quotient_dim == 2);
        SparseVec v{{0, Rat(1)}, {1, Rat(1)}};
        CHECK(q.projection.apply(v).empty()); // (1,1,0) dies
        CHECK((q.projection * q.section) == Matrix::identity(2));
    }
    SUBCASE("not contained") {
        auto a = Subspace::span(from_rows({{1, 0, 0}}));
        auto b = Subspace::span(from_rows({{0, 1, 0}}));
        CHECK_THROWS_AS(subspace_quotient(a, b), Error);
    }
    SUBCASE("projection/section round trip (random)") {
        std::mt19937 rng(7);
        for (int trial = 0; trial < 10; ++trial) {
            Subspace sub = Subspace::span(random_matrix(rng, 2, 5));
            auto q = quotient_by(sub, 5);
            CHECK((q.projection * q.section) == Matrix::identity(q.quotient_dim));
            for (int i = 0; i < sub.dim(); ++i)
                CHECK(q.projection.apply(sub.basis().row(i)).empty());
        }
    }
}

TEST_CASE("annihilator") {
    SUBCASE("of zero is everything") {
        auto res = annihilator(Subspace(3), Matrix::identity(3));
        CHECK(res.annihilator.dim() == 3);
        CHECK_FALSE(res.degenerate);
    }
    SUBCASE("of everything is zero under a perfect pairing") {
        auto res = annihilator(Subspace::full(3), Matrix::identity(3));
        CHECK(res.annihilator.dim() == 0);
    }
    SUBCASE("one condition in a 4-dim dual") {
        // S = span{x (x) x} in (Qx + Qy)^{(x)2} with the standard dual pairing
        auto s = Subspace::span(from_rows({{1, 0, 0, 0}}));
        auto res = annihilator(s, Matrix::identity(4));
        CHECK(res.annihilator.dim() == 3);
    }
    SUBCASE("degenerate pairing is flagged") {
        Matrix p(2, 2);
        p.set(0, 0, 1);
        auto res = annihilator(Subspace::full(2), p);
        CHECK(res.degenerate);
        CHECK(res.corank == 1);
    }
    SUBCASE("double annihilator is the identity on small random instances") {
        std::mt19937 rng(31);
        for (int trial = 0; trial < 12; ++trial) {
            int n = 2 + trial % 5; // up to 6
            Subspace s = Subspace::span(random_matrix(rng, 1 + trial % 3, n));
            Matrix pairing = Matrix::identity(n);
            auto a1 = annihilator(s, pairing);
            auto a2 = annihilator(a1.annihilator, pairing.transpose());
            CHECK(a2.annihilator == s);
        }
    }
}

TEST_CASE("homology") {
    SUBCASE("identity complex is exact") {
        ChainComplexData c;
        c.dims[0] = 1;
        c.dims[1] = 1;
        c.diff[1] = Matrix::identity(1);
        auto h = homology(c);
        CHECK(h.betti.at(0) == 0);
        CHECK(h.betti.at(1) == 0);
    }
    SUBCASE("zero differential") {
        ChainComplexData c;
        c.dims[0] = 1;
        c.dims[1] = 1;
        c.diff[1] = Matrix(1, 1);
        auto h = homology(c);
        CHECK(h.betti.at(0) == 1);
        CHECK(h.betti.at(1) == 1);
    }
    SUBCASE("circle-style complex") {
        ChainComplexData c;
        c.dims[0] = 2;
        c.dims[1] = 2;
        c.diff[1] = from_rows({{-1, -1}, {1, 1}});
        auto h = homology(c);
        CHECK(h.betti.at(0) == 1);
        CHECK(h.betti.at(1) == 1);
    }
    SUBCASE("d*d != 0 is rejected with the failing degree") {
        ChainComplexData c;
        c.dims[0] = 1;
        c.dims[1] = 1;
        c.dims[2] = 1;
        c.diff[1] = Matrix::identity(1);
        c.diff[2] = Matrix::identity(1);
        CHECK_THROWS_WITH_AS(homology(c), doctest::Contains("degree"), Error);
    }
    SUBCASE("cones are exact (Euler characteristic check)") {
        std::mt19937 rng(17);
        for (int trial = 0; trial < 8; ++trial) {
            // complex X: 0 -> Q^a -d-> Q^b -> 0 with arbitrary d, coned onto itself by id
            int a = 1 + trial % 3, b = 1 + (trial / 2) % 3;
            ChainComplexData x;
            x.dims[0] = b;
            x.dims[1] = a;
            x.diff[1] = random_matrix(rng, b, a, -2, 2);
            std::map<int, Matrix> id;
            id[0] = Matrix::identity(b);
            id[1] = Matrix::identity(a);
            ChainComplexData cone = mapping_cone(x, x, id);
            auto h = homology(cone);
            CHECK(h.total() == 0);
            long dims_euler = 0;
            for (auto& [d, n] : cone.dims) dims_euler += (d % 2 == 0 ? n : -n);
            CHECK(h.euler_characteristic() == dims_euler);

            // Euler characteristic of betti equals that of dims on any complex
            auto hx = homology(x);
            long xe = 0;
            for (auto& [d, n] : x.dims) xe += (d % 2 == 0 ? n : -n);
            CHECK(hx.euler_characteristic() == xe);
        }
    }
}

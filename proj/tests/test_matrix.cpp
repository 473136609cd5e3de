#include <catch2/catch_amalgamated.hpp>

#include "calim/matrix.hpp"

#include "helpers.hpp"

using namespace calim;

TEST_CASE("matrix_unit basics") {
    CHECK(matrix_unit(1, 0, 0) == CMatrix::identity(1));

    CMatrix e01(2, 2);
    e01(0, 1) = 1.0;
    CHECK(matrix_unit(2, 0, 1) == e01);

    // upper-right unit of T_3
    CMatrix e02(3, 3);
    e02(0, 2) = 1.0;
    CHECK(matrix_unit(3, 0, 2) == e02);

    CHECK_THROWS_AS(matrix_unit(2, 0, 2), std::out_of_range);
    CHECK_THROWS_AS(matrix_unit(0, 0, 0), std::invalid_argument);
}

TEST_CASE("operator_norm on pinned values") {
    CHECK(operator_norm(CMatrix::identity(3)) == Catch::Approx(1.0).margin(1e-10));
    CHECK(operator_norm(matrix_unit(2, 0, 1)) == Catch::Approx(1.0).margin(1e-10));

    // oracle: the singular value of [[0,2],[0,0]] is exactly 2
    CMatrix a(2, 2);
    a(0, 1) = 2.0;
    CHECK(operator_norm(a) == Catch::Approx(2.0).margin(1e-9));

    // all-ones start vector is orthogonal to the top eigenvector of a*a here;
    // the fallback starts must still find sqrt(2)
    CMatrix b(2, 2);
    b(0, 0) = 1.0;
    b(0, 1) = -1.0;
    CHECK(operator_norm(b) == Catch::Approx(std::sqrt(2.0)).margin(1e-9));

    CHECK_THROWS_AS(operator_norm(CMatrix(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(operator_norm(CMatrix::identity(2), -1.0), std::invalid_argument);
    CMatrix nan(1, 1);
    nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(operator_norm(nan), std::invalid_argument);
}

TEST_CASE("operator_norm is invariant under permutation conjugation") {
    auto gen = testutil::rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 5;
        CMatrix a = random_upper_triangular(n, gen);
        std::vector<int> perm(n), perm2(n);
        for (int i = 0; i < n; ++i) perm[i] = perm2[i] = i;
        std::shuffle(perm.begin(), perm.end(), gen);
        std::shuffle(perm2.begin(), perm2.end(), gen);
        CMatrix u(n, n), v(n, n);
        for (int i = 0; i < n; ++i) {
            u(i, perm[i]) = 1.0;
            v(i, perm2[i]) = 1.0;
        }
        CHECK(std::abs(operator_norm(u * a * v) - operator_norm(a)) < 10 * 1e-9);
    }
}

TEST_CASE("generated_star_algebra_dim on pinned values") {
    SECTION("all matrix units of M_2 generate the full algebra") {
        std::vector<CMatrix> gens;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) gens.push_back(matrix_unit(2, i, j));
        CHECK(generated_star_algebra_dim(gens) == 4);
    }
    SECTION("a single diagonal unit adjoins only the identity") {
        // hand closure: span{I, e_00} is already closed under product and star
        CHECK(generated_star_algebra_dim({matrix_unit(2, 0, 0)}) == 2);
    }
    SECTION("two-interval compressions of T_3 generate 4 + 4 dimensions") {
        // oracle-side submatrix extraction, independent of the nest module
        auto corner = [](const CMatrix& m, int s, int e) {
            CMatrix r(e - s, e - s);
            for (int i = s; i < e; ++i)
                for (int j = s; j < e; ++j) r(i - s, j - s) = m(i, j);
            return r;
        };
        std::vector<CMatrix> gens;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                CMatrix u = matrix_unit(3, i, j);
                gens.push_back(block_diag({corner(u, 0, 2), corner(u, 1, 3)}));
            }
        CHECK(generated_star_algebra_dim(gens) == 8);
    }
    SECTION("T_n generates all of M_n") {
        for (int n = 2; n <= 6; ++n) {
            std::vector<CMatrix> gens;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) gens.push_back(matrix_unit(n, i, j));
            CHECK(generated_star_algebra_dim(gens) == n * n);
        }
    }
    SECTION("monotone under adding generators") {
        auto gen = testutil::rng(3);
        std::vector<CMatrix> gens{random_upper_triangular(3, gen)};
        int prev = generated_star_algebra_dim(gens);
        for (int step = 0; step < 3; ++step) {
            gens.push_back(random_upper_triangular(3, gen));
            const int next = generated_star_algebra_dim(gens);
            CHECK(next >= prev);
            prev = next;
        }
    }
    CHECK_THROWS_AS(generated_star_algebra_dim({CMatrix::identity(2), CMatrix::identity(3)}),
                    std::invalid_argument);
}

TEST_CASE("span_contains membership and rescaling invariance") {
    CHECK(span_contains({CMatrix::identity(2)}, cplx(2.0, 0.0) * CMatrix::identity(2)));
    CHECK_FALSE(span_contains({matrix_unit(2, 0, 0)}, matrix_unit(2, 1, 1)));

    auto gen = testutil::rng(7);
    std::vector<CMatrix> basis;
    for (int i = 0; i < 4; ++i) basis.push_back(random_upper_triangular(3, gen));
    const CMatrix x = basis[0] + (cplx(0.5, -1.0) * basis[2]);
    CHECK(span_contains(basis, x));
    std::vector<CMatrix> scaled;
    for (const CMatrix& b : basis) scaled.push_back(cplx(0.0, 37.5) * b);
    CHECK(span_contains(scaled, x));
    CHECK_THROWS_AS(span_contains(basis, CMatrix::identity(5)), std::invalid_argument);
}

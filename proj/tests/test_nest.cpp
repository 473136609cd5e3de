#include <catch2/catch_amalgamated.hpp>

#include "calim/nest.hpp"

#include "helpers.hpp"

using namespace calim;

TEST_CASE("intervals_of enumerates the nest intervals lexicographically") {
    CHECK(intervals_of(1) == std::vector<Interval>{Interval{1, 0, 1}});
    CHECK(intervals_of(2) ==
          std::vector<Interval>{Interval{2, 0, 1}, Interval{2, 0, 2}, Interval{2, 1, 2}});

    const std::vector<Interval> four = intervals_of(4);
    CHECK(four.size() == 10);
    int rank3 = 0;
    for (const Interval& q : four)
        if (q.rank() == 3) ++rank3;
    CHECK(rank3 == 2);  // exactly [0,3) and [1,4)

    for (int n = 1; n <= 12; ++n) {
        const std::vector<Interval> all = intervals_of(n);
        CHECK(static_cast<int>(all.size()) == n * (n + 1) / 2);
        for (int j = 0; j < n; ++j) {
            int count = 0;
            for (const Interval& q : all)
                if (q.rank() == n - j) ++count;
            CHECK(count == j + 1);
        }
    }
    CHECK_THROWS_AS(intervals_of(0), std::invalid_argument);
}

TEST_CASE("compress extracts the diagonal corner") {
    auto gen = testutil::rng(21);
    const CMatrix a = random_upper_triangular(3, gen);
    CHECK(compress(a, full_interval(3)) == a);

    // the upper-right unit vanishes off the identity interval
    CHECK(compress(matrix_unit(3, 0, 2), Interval{3, 1, 3}) == CMatrix(2, 2));

    CMatrix b(3, 3);
    b(0, 0) = 1; b(0, 1) = 2; b(0, 2) = 3;
    b(1, 1) = 4; b(1, 2) = 5;
    b(2, 2) = 6;
    CMatrix expect(2, 2);
    expect(0, 0) = 4; expect(0, 1) = 5;
    expect(1, 1) = 6;
    CHECK(compress(b, Interval{3, 1, 3}) == expect);

    CHECK_THROWS_AS(compress(b, Interval{4, 0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(compress(b, Interval{3, 2, 1}), std::invalid_argument);
}

TEST_CASE("compress maps matrix units to zero or a matrix unit") {
    for (int n = 2; n <= 6; ++n)
        for (const Interval& q : intervals_of(n))
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const CMatrix c = compress(matrix_unit(n, i, j), q);
                    int ones = 0;
                    for (const cplx& v : c.entries()) {
                        CHECK((v == cplx(0.0, 0.0) || v == cplx(1.0, 0.0)));
                        if (v == cplx(1.0, 0.0)) ++ones;
                    }
                    CHECK(ones <= 1);
                }
}

TEST_CASE("compression to an interval is an algebra homomorphism") {
    CHECK(compression_is_homomorphism(3, Interval{3, 1, 3}, 50));
    CHECK(compression_is_homomorphism(3, full_interval(3), 1));
    for (int n = 2; n <= 5; ++n)
        for (const Interval& q : intervals_of(n)) CHECK(compression_is_homomorphism(n, q, 10));
}

TEST_CASE("a non-interval mask is not multiplicative") {
    CHECK_FALSE(mask_is_homomorphism(3, {0, 2}, 0));

    // the explicit counterexample: e_01 * e_12 = e_02 survives the mask
    const CMatrix a = matrix_unit(3, 0, 1);
    const CMatrix b = matrix_unit(3, 1, 2);
    CHECK(mask_compress(a, {0, 2}) == CMatrix(2, 2));
    CHECK(mask_compress(b, {0, 2}) == CMatrix(2, 2));
    CHECK(mask_compress(a * b, {0, 2}) == matrix_unit(2, 0, 1));

    // interval masks stay multiplicative
    CHECK(mask_is_homomorphism(3, {1, 2}, 20));
}

TEST_CASE("digraph interval enumeration") {
    SECTION("total order agrees with intervals_of") {
        for (int n = 2; n <= 4; ++n) {
            const auto got = digraph_intervals(DigraphAlgebra::total_order(n));
            std::vector<std::vector<int>> expect;
            for (const Interval& q : intervals_of(n)) {
                std::vector<int> set;
                for (int i = q.start; i < q.end; ++i) set.push_back(i);
                expect.push_back(set);
            }
            std::sort(expect.begin(), expect.end());
            CHECK(got == expect);
        }
    }
    SECTION("antichain: every nonzero diagonal projection is an interval") {
        const auto got = digraph_intervals(DigraphAlgebra::antichain(2));
        CHECK(got == std::vector<std::vector<int>>{{0}, {0, 1}, {1}});
    }
    SECTION("T_3 has six intervals") {
        CHECK(digraph_intervals(DigraphAlgebra::total_order(3)).size() == 6);
    }
    SECTION("invalid relations are rejected") {
        DigraphAlgebra d{2, {1, 1, 0, 0}};  // not reflexive at 1
        CHECK_THROWS_AS(digraph_intervals(d), std::invalid_argument);
        DigraphAlgebra t{3, {1, 1, 0, 0, 1, 1, 0, 0, 1}};  // 0->1, 1->2 but not 0->2
        CHECK_THROWS_AS(digraph_intervals(t), std::invalid_argument);
    }
}

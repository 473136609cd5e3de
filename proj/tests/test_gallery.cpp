#include <catch2/catch_amalgamated.hpp>

#include "calim/gallery.hpp"

#include "calim/suite.hpp"
#include "helpers.hpp"

using namespace calim;
using F = ExampleId::Family;

TEST_CASE("example tags parse and validate") {
    const ExampleId a = ExampleId::parse("A(3,1)");
    CHECK(a.family == F::A);
    CHECK(a.n == 3);
    CHECK(a.entry == 1);
    CHECK(to_string(a) == "A(3,1)");

    CHECK(ExampleId::parse("C(2,0)").family == F::C);
    CHECK(ExampleId::parse("d").family == F::D);
    CHECK(ExampleId::parse("B(4)").n == 4);
    const ExampleId grown = ExampleId::parse("A(2,0,2,3)");
    CHECK(grown.growth == std::vector<int>{2, 3});

    CHECK_THROWS_AS(ExampleId::parse("A(2,2)"), std::invalid_argument);  // entry out of range
    CHECK_THROWS_AS(ExampleId::parse("C(2,1)"), std::invalid_argument);
    CHECK_THROWS_AS(ExampleId::parse("X"), std::invalid_argument);
    CHECK_THROWS_AS(ExampleId::parse("A(2"), std::invalid_argument);
}

TEST_CASE("builders realize the displayed embeddings") {
    SECTION("family A appends copies of the pinned entry") {
        DirectSystem a0(build_example(ExampleId::make(F::A, 2, 0)));
        CHECK(a0.step(1).blocks == std::vector<Interval>{full_interval(2), Interval{2, 0, 1}});
        DirectSystem a1(build_example(ExampleId::make(F::A, 2, 1)));
        CHECK(a1.step(1).blocks == std::vector<Interval>{full_interval(2), Interval{2, 1, 2}});
    }
    SECTION("family B always pins the current last entry") {
        DirectSystem b(build_example(ExampleId::make(F::B, 2)));
        CHECK(b.step(1).blocks == std::vector<Interval>{full_interval(2), Interval{2, 1, 2}});
        CHECK(b.step(2).blocks == std::vector<Interval>{full_interval(3), Interval{3, 2, 3}});
    }
    SECTION("family C prepends and distinguishes the trailing identity") {
        DirectSystem c(build_example(ExampleId::make(F::C, 2, 0)));
        CHECK(c.step(1).blocks == std::vector<Interval>{Interval{2, 1, 2}, full_interval(2)});
        CHECK(c.step(1).distinguished == 1);
    }
    SECTION("family D: a + d(a) at doubling sizes") {
        DirectSystem d(build_example(ExampleId::make(F::D)));
        CHECK(d.step(2).blocks ==
              std::vector<Interval>{full_interval(4), Interval{4, 0, 1}, Interval{4, 1, 2},
                                    Interval{4, 2, 3}, Interval{4, 3, 4}});
        CHECK(d.dim(4) == 16);
    }
    SECTION("family F: a + lh(a) + lh(a)") {
        DirectSystem f(build_example(ExampleId::make(F::F)));
        CHECK(f.step(2).blocks ==
              std::vector<Interval>{full_interval(4), Interval{4, 2, 4}, Interval{4, 2, 4}});
    }
    SECTION("family G: standard embeddings of multiplicity 2") {
        DirectSystem g(build_example(ExampleId::make(F::G)));
        CHECK(g.step(2).blocks == std::vector<Interval>{full_interval(4), full_interval(4)});
    }
}

TEST_CASE("invariant projection counts follow the documented convention") {
    for (int n = 1; n <= 4; ++n)
        for (int entry = 0; entry < n; ++entry)
            CHECK(invariant_projection_count(ExampleId::make(F::A, n, entry), 6) == entry + 1);
    for (int n = 2; n <= 4; ++n)
        for (int entry = 0; entry > -n; --entry)
            CHECK(invariant_projection_count(ExampleId::make(F::C, n, entry), 6) == -entry + 1);

    // pairwise non-isomorphism evidence: the counts separate the family
    std::vector<int> counts;
    for (int entry = 0; entry < 4; ++entry)
        counts.push_back(invariant_projection_count(ExampleId::make(F::A, 4, entry), 6));
    CHECK(counts == std::vector<int>{1, 2, 3, 4});

    CHECK_THROWS_AS(invariant_projection_count(ExampleId::make(F::B, 2), 6),
                    std::invalid_argument);
}

TEST_CASE("image characterizations hold on the probe window") {
    for (const ExampleId& id : canonical_gallery())
        for (int k = 1; k <= 3; ++k) {
            const ImageVerdict v = characterize_image(id, k, 5);
            INFO(to_string(id) << " at level " << k << ": " << v.counterexample);
            CHECK(v.passed);
        }

    SECTION("details name the structure") {
        CHECK(characterize_image(ExampleId::make(F::D), 2, 5).details ==
              "diagonal tail with dyadic period 4");
        CHECK(characterize_image(ExampleId::make(F::G), 2, 5).details.find("period 4") !=
              std::string::npos);
    }
}

TEST_CASE("A and C sides differ on the independence probe") {
    const IndependenceProbe p = family_independence_probe(
        ExampleId::make(F::A, 2, 1), ExampleId::make(F::C, 2, 0), {4, 6, 8});
    REQUIRE(p.a_ranks.size() == 3);
    CHECK(p.a_ranks[0] == p.a_ranks[1]);
    CHECK(p.a_ranks[1] == p.a_ranks[2]);
    CHECK(p.c_ranks[0] < p.c_ranks[1]);
    CHECK(p.c_ranks[1] < p.c_ranks[2]);
    CHECK(p.c_ranks.back() > p.a_ranks.back());
}

TEST_CASE("repeated diagonal steps keep whole periods") {
    // d(d(a)) = d(a): the composed tail is whole repetitions of the diagonal
    DirectSystem d(build_example(ExampleId::make(F::D)));
    const CompressionEmbedding c = d.compose_range(1, 3);
    int e00 = 0, e11 = 0;
    for (const Interval& b : c.blocks) {
        if (b == Interval{2, 0, 1}) ++e00;
        if (b == Interval{2, 1, 2}) ++e11;
    }
    CHECK(e00 == e11);
    CHECK(e00 == 3);
    CHECK(c.blocks.size() == 7);
}

TEST_CASE("gallery labels") {
    CHECK(envelope_label(ExampleId::make(F::A, 2, 1)) == "K + CI");
    CHECK(envelope_label(ExampleId::make(F::E)) == "K + DAP(2^inf)");
    CHECK(image_label(ExampleId::make(F::D)) == "KN0 + DAP(2^inf)");
    CHECK(image_label(ExampleId::make(F::G)) == "SN(2^inf)");
}

TEST_CASE("the verification battery passes on single scopes") {
    SECTION("standard system") {
        const SuiteReport r = run_suite({ExampleId::make(F::G)}, 5, 20);
        for (const CheckRecord& c : r.checks) {
            INFO(c.check << " [" << c.scope << "]: " << c.witness);
            CHECK(c.passed);
        }
        CHECK(r.passed);
        bool saw_compacts = false;
        for (const CheckRecord& c : r.checks)
            if (c.check == "compact_classification" && c.scope == "G") saw_compacts = true;
        CHECK(saw_compacts);
    }
    SECTION("family A with the invariant count record") {
        const SuiteReport r = run_suite({ExampleId::make(F::A, 2, 1)}, 5, 20);
        CHECK(r.passed);
        bool saw_count = false;
        for (const CheckRecord& c : r.checks)
            if (c.check == "invariant_projection_count") {
                saw_count = true;
                CHECK(c.witness.find("count 2") != std::string::npos);
            }
        CHECK(saw_count);
    }
}

// Acceptance suite: one check per verification criterion, each printing a
// single [PASS]/[FAIL] line.  All tolerances are pinned here, in code.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "calim/envelope.hpp"
#include "calim/gallery.hpp"
#include "calim/matrix.hpp"
#include "calim/suite.hpp"
#include "calim/system.hpp"

using namespace calim;
using F = ExampleId::Family;

namespace {

void report(int num, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", num, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
}

/// Steps of the materialized system whose source dimension stays <= 16.
std::vector<int> small_steps(DirectSystem& sys) {
    std::vector<int> steps;
    for (int t = 1;; ++t) {
        sys.ensure_level(t + 1);
        if (sys.dim(t) > 16) break;
        steps.push_back(t);
    }
    return steps;
}

}  // namespace

TEST_CASE("criterion 1: embedding algebra laws") {
    bool ok = true;
    std::mt19937_64 gen(1001);
    for (const ExampleId& id : canonical_gallery()) {
        DirectSystem sys(build_example(id));
        for (int t : small_steps(sys)) {
            const CompressionEmbedding& step = sys.step(t);
            const int n = step.source_dim;
            if (apply_embedding(step, CMatrix::identity(n)) !=
                CMatrix::identity(step.target_dim()))
                ok = false;
            for (int s = 0; s < 100 && ok; ++s) {
                const CMatrix a = random_upper_triangular(n, gen);
                const CMatrix b = random_upper_triangular(n, gen);
                if (apply_embedding(step, a * b) !=
                    apply_embedding(step, a) * apply_embedding(step, b))
                    ok = false;
            }
        }
    }
    report(1, "embedding algebra laws (exact, 100 random pairs per step, n <= 16)", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 2: complete-isometry shadow") {
    bool ok = true;
    double worst = 0.0;
    std::mt19937_64 gen(1002);
    for (const ExampleId& id : canonical_gallery()) {
        DirectSystem sys(build_example(id));
        for (int t : small_steps(sys)) {
            const CompressionEmbedding& step = sys.step(t);
            const int n = step.source_dim;
            for (int amp = 1; amp <= 3; ++amp)
                for (int s = 0; s < 20; ++s) {
                    const CMatrix a = random_amplified_upper_triangular(n, amp, gen);
                    const double diff = std::abs(operator_norm(amplified_apply(step, a, amp), 1e-10) -
                                                 operator_norm(a, 1e-10));
                    worst = std::max(worst, diff);
                    if (diff > 1e-8) ok = false;
                }
        }
    }
    report(2, "complete-isometry shadow (amplifications 1-3, 20 samples, tol 1e-8)", ok,
           "worst deviation " + std::to_string(worst));
    REQUIRE(ok);
}

TEST_CASE("criterion 3: composition normal form vs dense oracle") {
    bool ok = true;
    for (const ExampleId& id : canonical_gallery()) {
        DirectSystem sys(build_example(id));
        for (int j = 1; j <= 6 && ok; ++j)
            for (int k = j; k <= 6 && ok; ++k) {
                const CompressionEmbedding range = sys.compose_range(j, k);
                const int n = sys.dim(j);
                for (int i = 0; i < n && ok; ++i)
                    for (int jj = i; jj < n && ok; ++jj) {
                        CMatrix dense = matrix_unit(n, i, jj);
                        for (int t = j; t < k; ++t) dense = apply_embedding(sys.step(t), dense);
                        if (apply_embedding(range, matrix_unit(n, i, jj)) != dense) ok = false;
                    }
            }
    }
    report(3, "composition normal form equals the sequential dense action (depth 6, exact)", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 4: two-interval generation") {
    bool ok = true;
    int pairs = 0;
    for (int n = 2; n <= 4 && ok; ++n) {
        const std::vector<Interval> all = intervals_of(n);
        for (std::size_t i = 0; i < all.size() && ok; ++i)
            for (std::size_t j = i + 1; j < all.size() && ok; ++j) {
                ++pairs;
                if (!lemma_check(n, all[i], all[j], 1e-8)) ok = false;
            }
    }
    report(4, "two-interval generation dim = rank^2 + rank^2 (T_2..T_4, exhaustive)", ok,
           std::to_string(pairs) + " pairs");
    REQUIRE(ok);
}

TEST_CASE("criterion 5: interval combinatorics") {
    bool ok = true;
    for (int n = 1; n <= 12 && ok; ++n) {
        const std::vector<Interval> all = intervals_of(n);
        if (static_cast<int>(all.size()) != n * (n + 1) / 2) ok = false;
        for (int j = 0; j < n && ok; ++j) {
            int count = 0;
            for (const Interval& q : all)
                if (q.rank() == n - j) ++count;
            if (count != j + 1) ok = false;
        }
    }
    report(5, "interval counts n(n+1)/2 with j+1 intervals of rank n-j (n <= 12)", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 6: boundary witness") {
    bool ok = true;
    for (int n = 2; n <= 12; ++n)
        if (!witness_annihilated(n)) ok = false;
    report(6, "upper-right unit annihilated by every proper interval (n = 2..12)", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 7: Bratteli reach-identity") {
    bool ok = true;
    std::string failing;
    for (const char* tag : {"A(2,1)", "B(2)", "C(2,0)", "D", "E", "F"}) {
        DirectSystem sys(build_example(ExampleId::parse(tag)));
        const ReachReport r = reaches_identity(bratteli(sys, 6, 7));
        if (!r.all_reach) {
            ok = false;
            failing = tag;
        }
    }
    report(7, "every node reaches an identity node at horizon 6", ok, failing);
    REQUIRE(ok);
}

TEST_CASE("criterion 8: compact dichotomy") {
    bool ok = true;
    std::string detail;
    for (const ExampleId& id : canonical_gallery()) {
        DirectSystem sys(build_example(id));
        const CompactClassification c = sys.compact_classification(12);
        const bool expected =
            id.family == F::G
                ? c.kind == CompactKind::NoCompacts
                : (c.kind == CompactKind::ContainsFiniteRank && c.finite_rank == 1);
        if (!expected || c.certificate.empty()) {
            ok = false;
            detail = to_string(id) + " -> " + to_string(c.kind);
        }
    }
    report(8, "compact dichotomy with tail certificates (probe depth 12)", ok, detail);
    REQUIRE(ok);
}

TEST_CASE("criterion 9: invariant projection counts") {
    bool ok = true;
    for (int n = 1; n <= 4; ++n)
        for (int entry = 0; entry < n; ++entry)
            if (invariant_projection_count(ExampleId::make(F::A, n, entry), 6) != entry + 1)
                ok = false;
    report(9, "invariant projection count = entry + 1 (family A, n <= 4, 0-based entries)", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 10: substring stability and commuting diagram") {
    bool ok = true;
    std::mt19937_64 gen(1010);
    for (const ExampleId& id : canonical_gallery()) {
        DirectSystem sys(build_example(id));
        for (int k = 1; k <= 5 && ok; ++k)
            for (int m = std::max(k, 2); m <= 5 && ok; ++m) {
                const AnchoredDecomposition w1 = sys.representation_window(k, m);
                const AnchoredDecomposition w2 = sys.representation_window(k, m + 1);
                std::size_t at = 0;
                while (at < w2.blocks.size() &&
                       !(w2.blocks[at].basis_offset == w1.blocks.front().basis_offset &&
                         w2.blocks[at].interval == w1.blocks.front().interval))
                    ++at;
                if (at + w1.blocks.size() > w2.blocks.size()) {
                    ok = false;
                    break;
                }
                for (std::size_t i = 0; i < w1.blocks.size(); ++i)
                    if (w2.blocks[at + i].interval != w1.blocks[i].interval ||
                        w2.blocks[at + i].basis_offset != w1.blocks[i].basis_offset)
                        ok = false;
            }
        for (int k = 1; k <= 5 && ok; ++k) {
            const AnchoredDecomposition wk = sys.representation_window(k, 6);
            const AnchoredDecomposition wk1 = sys.representation_window(k + 1, 6);
            const int n = sys.dim(k);
            for (int i = 0; i < n && ok; ++i)
                for (int j = i; j < n && ok; ++j) {
                    const CMatrix u = matrix_unit(n, i, j);
                    if (window_matrix(wk, u) !=
                        window_matrix(wk1, apply_embedding(sys.step(k), u)))
                        ok = false;
                }
            const CMatrix a = random_upper_triangular(n, gen);
            if (window_matrix(wk, a) != window_matrix(wk1, apply_embedding(sys.step(k), a)))
                ok = false;
        }
    }
    report(10, "windows never move and rho_k = rho_{k+1} o phi_k (depths 2-6, exact)", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 11: weak-density shadow") {
    bool ok = true;
    std::mt19937_64 gen(1011);
    for (const ExampleId& id : canonical_gallery()) {
        DirectSystem sys(build_example(id));
        const bool above = sys.classify_index_set(6).kind == IndexSetKind::BoundedAbove;
        std::uniform_int_distribution<int> size_dist(1, 6);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int s = 0; s < 50 && ok; ++s) {
            const int w = size_dist(gen);
            const long long lo = above ? -(w - 1) : 0;
            const long long hi = lo + w - 1;
            CMatrix data(w, w);
            for (int i = 0; i < w; ++i)
                for (int j = i; j < w; ++j) data(i, j) = cplx(u(gen), u(gen));
            const auto [level, x] = sys.density_preimage(lo, hi, data);
            const AnchoredDecomposition d = sys.representation_window(level, std::max(6, level));
            const CMatrix realized = window_matrix(d, x);
            for (long long r = lo; r <= hi && ok; ++r)
                for (long long c = r; c <= hi && ok; ++c)
                    if (realized(static_cast<int>(r - d.window_lo),
                                 static_cast<int>(c - d.window_lo)) !=
                        data(static_cast<int>(r - lo), static_cast<int>(c - lo)))
                        ok = false;
        }
    }
    report(11, "50 random window-data instances per example reproduced exactly", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 12: regularity") {
    bool ok = true;
    for (const ExampleId& id : canonical_gallery()) {
        DirectSystem sys(build_example(id));
        for (int t = 1; t <= 5; ++t)
            if (!is_regular(sys.step(t))) ok = false;
    }
    report(12, "every example step maps matrix units to sums of matrix units", ok);
    REQUIRE(ok);
}

TEST_CASE("criterion 13: Schur cocycles") {
    bool ok = true;
    std::mt19937_64 gen(1013);
    std::uniform_real_distribution<double> u(0.3, 1.8);
    std::uniform_int_distribution<int> ndist(3, 8);
    for (int s = 0; s < 100 && ok; ++s) {
        const int n = ndist(gen);
        std::vector<cplx> d(static_cast<std::size_t>(n));
        for (cplx& v : d) v = cplx(u(gen), u(gen));
        if (!schur_validate(SchurCocycle::from_potential(d))) ok = false;
    }
    for (int s = 0; s < 100 && ok; ++s) {
        const int n = ndist(gen);
        std::vector<cplx> d(static_cast<std::size_t>(n));
        for (cplx& v : d) v = cplx(u(gen), u(gen));
        SchurCocycle c = SchurCocycle::from_potential(d);
        std::uniform_int_distribution<int> pick_i(0, n - 2);
        const int i = pick_i(gen);
        std::uniform_int_distribution<int> pick_j(i + 1, n - 1);
        c.at(i, pick_j(gen)) += cplx(0.7 + u(gen), 0.2);
        if (schur_validate(c)) ok = false;
    }
    report(13, "100 random potentials validate, 100 perturbations fail (with homomorphism "
               "cross-check)", ok);
    REQUIRE(ok);
}

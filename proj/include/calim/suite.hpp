#pragma once

// The end-to-end verification battery behind `verify`: each named check
// runs one property of the calculus against an independent dense oracle,
// an exhaustive enumeration, or an exact certificate, and emits a
// machine-readable {check, scope, status, witness} record.
//
// Depth and trial counts are tunable through CALIM_VERIFY_DEPTH and
// CALIM_VERIFY_TRIALS for CI time budgets (defaults: depth 6, trials 50).

#include <cstdlib>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "calim/envelope.hpp"
#include "calim/gallery.hpp"
#include "calim/matrix.hpp"
#include "calim/system.hpp"

namespace calim {

struct CheckRecord {
    std::string check;
    std::string scope;
    bool passed = false;
    std::string witness;  // failure location or short confirmation
};

struct SuiteReport {
    std::vector<CheckRecord> checks;
    int depth = 0;
    int trials = 0;
    bool passed = true;

    void add(const std::string& check, const std::string& scope, bool ok,
             const std::string& witness = "") {
        checks.push_back(CheckRecord{check, scope, ok, witness});
        passed = passed && ok;
    }
};

namespace oracle {

/// Generic upper-triangular matrix with pairwise distinct nonzero entries
/// on the support; makes dense block recovery unambiguous.
inline CMatrix generic_upper_triangular(int n) {
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a(i, j) = cplx(1.0 + i * n + j, 0.0);
    return a;
}

/// Dense recovery of the decomposition of (compression to q) o step: apply
/// the step to a generic matrix, compress, cut along zero crossings, and
/// identify every dense block against candidate interval compressions.
/// Independent of the combinatorial composition path.
inline std::map<Interval, int> dense_partial_multiplicities(const CompressionEmbedding& step,
                                                            const Interval& q) {
    const int n = step.source_dim;
    const CMatrix a = generic_upper_triangular(n);
    const CMatrix m = compress(apply_embedding(step, a), q);
    const int r = m.rows();

    std::vector<int> cuts{0};
    for (int b = 1; b < r; ++b) {
        bool crossing = false;
        for (int i = 0; i < b && !crossing; ++i)
            for (int j = b; j < r && !crossing; ++j)
                if (m(i, j) != cplx(0.0, 0.0)) crossing = true;
        if (!crossing) cuts.push_back(b);
    }
    cuts.push_back(r);

    std::map<Interval, int> mult;
    const std::vector<Interval> candidates = intervals_of(n);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const Interval piece_range{r, cuts[c], cuts[c + 1]};
        const CMatrix piece = compress(m, piece_range);
        bool identified = false;
        for (const Interval& cand : candidates) {
            if (cand.rank() != piece_range.rank()) continue;
            if (compress(a, cand) == piece) {
                ++mult[cand];
                identified = true;
                break;
            }
        }
        if (!identified)
            throw std::logic_error("dense oracle: unidentifiable block in the compressed image");
    }
    return mult;
}

}  // namespace oracle

namespace detail {

inline int env_int(const char* name, int fallback) {
    if (const char* v = std::getenv(name)) {
        const int parsed = std::atoi(v);
        if (parsed > 0) return parsed;
    }
    return fallback;
}

}  // namespace detail

/// Runs the full property battery over the given examples.  depth/trials
/// of 0 pick up the environment overrides or the defaults.
inline SuiteReport run_suite(const std::vector<ExampleId>& scope_ids, int depth = 0,
                             int trials = 0) {
    SuiteReport report;
    report.depth = depth > 0 ? depth : detail::env_int("CALIM_VERIFY_DEPTH", 6);
    report.trials = trials > 0 ? trials : detail::env_int("CALIM_VERIFY_TRIALS", 50);
    const int D = std::max(2, report.depth);
    const int T = report.trials;

    for (const ExampleId& id : scope_ids) {
        const std::string scope = to_string(id);
        DirectSystem sys(build_example(id));
        sys.ensure_level(D);
        std::mt19937_64 rng(0xca11ab1eULL ^ std::hash<std::string>{}(scope));

        // embedding algebra laws, regularity, left inverse, isometry: per step
        {
            bool laws = true, regular = true, left_inv = true, isometry = true;
            std::string witness;
            for (int t = 1; t < D && laws && regular && left_inv && isometry; ++t) {
                const CompressionEmbedding& step = sys.step(t);
                const int n = step.source_dim;
                if (n > 16) break;
                if (apply_embedding(step, CMatrix::identity(n)) !=
                    CMatrix::identity(step.target_dim())) {
                    laws = false;
                    witness = "phi(I) != I at step " + std::to_string(t);
                }
                for (int s = 0; s < T && laws; ++s) {
                    CMatrix a = random_upper_triangular(n, rng);
                    CMatrix b = random_upper_triangular(n, rng);
                    if (apply_embedding(step, a * b) !=
                        apply_embedding(step, a) * apply_embedding(step, b)) {
                        laws = false;
                        witness = "phi(ab) != phi(a)phi(b) at step " + std::to_string(t);
                    }
                }
                if (!is_regular(step)) {
                    regular = false;
                    witness = "non-regular step " + std::to_string(t);
                }
                if (!left_inverse_check(step, std::min(T, 25))) {
                    left_inv = false;
                    witness = "left inverse failed at step " + std::to_string(t);
                }
                for (int amp = 1; amp <= 3 && isometry; ++amp)
                    for (int s = 0; s < std::max(2, T / 16) && isometry; ++s) {
                        CMatrix a = random_amplified_upper_triangular(n, amp, rng);
                        const double in_norm = operator_norm(a, 1e-10);
                        const double out_norm = operator_norm(amplified_apply(step, a, amp), 1e-10);
                        if (std::abs(in_norm - out_norm) > 1e-8) {
                            isometry = false;
                            witness = "amplified isometry off by " +
                                      std::to_string(std::abs(in_norm - out_norm)) + " at step " +
                                      std::to_string(t) + ", amplification " + std::to_string(amp);
                        }
                    }
            }
            report.add("embedding_homomorphism_unital", scope, laws, laws ? "" : witness);
            report.add("regularity", scope, regular, regular ? "" : witness);
            report.add("left_inverse", scope, left_inv, left_inv ? "" : witness);
            report.add("isometry_amplified", scope, isometry, isometry ? "" : witness);
        }

        // composition normal form against the sequential dense action
        {
            bool ok = true;
            std::string witness;
            for (int j = 1; j <= D && ok; ++j)
                for (int k = j; k <= D && ok; ++k) {
                    if (sys.dim(k) > 128) continue;
                    const CompressionEmbedding range = sys.compose_range(j, k);
                    const int n = sys.dim(j);
                    for (int i = 0; i < n && ok; ++i)
                        for (int jj = i; jj < n && ok; ++jj) {
                            CMatrix unit = matrix_unit(n, i, jj);
                            CMatrix dense = unit;
                            for (int t = j; t < k; ++t) dense = apply_embedding(sys.step(t), dense);
                            if (apply_embedding(range, unit) != dense) {
                                ok = false;
                                witness = "normal form of phi_{" + std::to_string(j) + "," +
                                          std::to_string(k) + "} disagrees with the dense path on e_" +
                                          std::to_string(i) + std::to_string(jj);
                            }
                        }
                }
            report.add("composition_dense_oracle", scope, ok, witness);
        }

        // substring stability of anchored windows
        {
            bool ok = true;
            std::string witness;
            for (int k = 1; k < D && ok; ++k)
                for (int m = k; m < D && ok; ++m) {
                    const AnchoredDecomposition w1 = sys.representation_window(k, m);
                    const AnchoredDecomposition w2 = sys.representation_window(k, m + 1);
                    std::size_t at = 0;
                    while (at < w2.blocks.size() &&
                           !(w2.blocks[at].basis_offset == w1.blocks.front().basis_offset &&
                             w2.blocks[at].interval == w1.blocks.front().interval))
                        ++at;
                    bool found = at + w1.blocks.size() <= w2.blocks.size();
                    for (std::size_t i = 0; found && i < w1.blocks.size(); ++i)
                        found = w2.blocks[at + i].interval == w1.blocks[i].interval &&
                                w2.blocks[at + i].basis_offset == w1.blocks[i].basis_offset;
                    if (!found) {
                        ok = false;
                        witness = "blocks moved between depths " + std::to_string(m) + " and " +
                                  std::to_string(m + 1) + " at level " + std::to_string(k);
                    }
                }
            report.add("substring_stability", scope, ok, witness);
        }

        // commuting diagram on the common window
        {
            bool ok = true;
            std::string witness;
            for (int k = 1; k < D && ok; ++k) {
                if (sys.dim(k + 1) > 128) continue;
                const AnchoredDecomposition wk = sys.representation_window(k, D);
                const AnchoredDecomposition wk1 = sys.representation_window(k + 1, D);
                const int n = sys.dim(k);
                auto check = [&](const CMatrix& a) {
                    return window_matrix(wk, a) ==
                           window_matrix(wk1, apply_embedding(sys.step(k), a));
                };
                for (int i = 0; i < n && ok; ++i)
                    for (int jj = i; jj < n && ok; ++jj)
                        if (!check(matrix_unit(n, i, jj))) {
                            ok = false;
                            witness = "rho_k != rho_{k+1} o phi_k at level " + std::to_string(k);
                        }
                for (int s = 0; s < 3 && ok; ++s)
                    if (!check(random_upper_triangular(n, rng))) {
                        ok = false;
                        witness = "rho_k != rho_{k+1} o phi_k at level " + std::to_string(k);
                    }
            }
            report.add("commuting_diagram", scope, ok, witness);
        }

        // level structure invariants
        {
            bool ok = true;
            std::string witness;
            for (int k = 1; k <= std::min(D, 6) && ok; ++k) {
                const LevelStructure ls = level_structure(sys, k, D);
                const int nk = sys.dim(k);
                int max_rank = 0, max_count = 0;
                std::map<int, int> per_rank;
                for (const LevelSummand& s : ls.summands) {
                    max_rank = std::max(max_rank, s.rank);
                    ++per_rank[s.rank];
                }
                max_count = per_rank[max_rank];
                if (max_rank != nk || max_count != 1) {
                    ok = false;
                    witness = "identity summand not the unique maximal summand at level " +
                              std::to_string(k);
                }
                for (const auto& [rank, count] : per_rank)
                    if (count > nk - rank + 1) {
                        ok = false;
                        witness = "more than j+1 summands of rank n-j at level " +
                                  std::to_string(k);
                    }
            }
            report.add("level_structure_invariants", scope, ok, witness);
        }

        // Bratteli edges against the dense recovery oracle
        {
            bool ok = true;
            std::string witness;
            const int levels = std::min(D, 5);
            const BratteliDiagram diag = bratteli(sys, levels, D);
            for (int k = 1; k < levels && ok; ++k) {
                if (sys.dim(k + 1) > 16) continue;
                const LevelStructure& lo = diag.levels[static_cast<std::size_t>(k) - 1];
                const LevelStructure& hi = diag.levels[static_cast<std::size_t>(k)];
                for (std::size_t w = 0; w < hi.summands.size() && ok; ++w) {
                    const std::map<Interval, int> dense =
                        oracle::dense_partial_multiplicities(sys.step(k), hi.summands[w].interval);
                    for (std::size_t v = 0; v < lo.summands.size() && ok; ++v) {
                        int combinatorial = 0;
                        for (const BratteliEdge& e : diag.edges[static_cast<std::size_t>(k) - 1])
                            if (e.from == v && e.to == w) combinatorial = e.multiplicity;
                        auto it = dense.find(lo.summands[v].interval);
                        const int recovered = it == dense.end() ? 0 : it->second;
                        if (combinatorial != recovered) {
                            ok = false;
                            witness = "edge multiplicity mismatch at gap " + std::to_string(k);
                        }
                    }
                }
            }
            report.add("bratteli_dense_oracle", scope, ok, witness);

            const ReachReport reach = reaches_identity(diag);
            report.add("reach_identity", scope, reach.all_reach,
                       reach.all_reach ? "" : "a node does not reach an identity node in horizon");
        }

        // boundary witness at the probed levels
        {
            bool ok = true;
            for (int k = 1; k <= std::min(D, 5); ++k) {
                const int nk = sys.dim(k);
                if (nk >= 2 && nk <= 256 && !witness_annihilated(nk)) ok = false;
            }
            report.add("boundary_witness_levels", scope, ok);
        }

        // compact classification against the family's expected verdict
        {
            const CompactClassification c = sys.compact_classification(std::max(D, 12));
            const bool expect_no_compacts = id.family == ExampleId::Family::G;
            const bool ok = expect_no_compacts
                                ? c.kind == CompactKind::NoCompacts
                                : (c.kind == CompactKind::ContainsFiniteRank && c.finite_rank == 1);
            report.add("compact_classification", scope, ok, ok ? c.certificate : to_string(c.kind));
        }

        // index-set classification against the family's expected side
        {
            const IndexSetClass c = sys.classify_index_set(D);
            const IndexSetKind expect = id.family == ExampleId::Family::C
                                            ? IndexSetKind::BoundedAbove
                                            : IndexSetKind::BoundedBelow;
            report.add("index_set_classification", scope, c.kind == expect, to_string(c.kind));
        }

        // gallery image characterization
        {
            bool ok = true;
            std::string witness;
            for (int k = 1; k <= std::min(3, D - 1) && ok; ++k) {
                const ImageVerdict v = characterize_image(id, k, D);
                if (!v.passed) {
                    ok = false;
                    witness = v.counterexample;
                }
            }
            report.add("gallery_characterization", scope, ok, witness);
        }

        // invariant projection counts (characterized families only)
        if (id.family == ExampleId::Family::A || id.family == ExampleId::Family::C) {
            const int expected = id.family == ExampleId::Family::A ? id.entry + 1 : -id.entry + 1;
            const int got = invariant_projection_count(id, D);
            report.add("invariant_projection_count", scope, got == expected,
                       "count " + std::to_string(got) + ", expected " + std::to_string(expected));
        }

        // weak-density shadow: random window data reproduced exactly
        {
            bool ok = true;
            std::string witness;
            const IndexSetClass cls = sys.classify_index_set(D);
            std::uniform_int_distribution<int> size_dist(1, std::max(2, sys.dim(2)));
            for (int s = 0; s < std::max(5, T / 5) && ok; ++s) {
                const int w = size_dist(rng);
                const long long lo = cls.kind == IndexSetKind::BoundedAbove ? -(w - 1) : 0;
                const long long hi = lo + w - 1;
                CMatrix data(w, w);
                std::uniform_real_distribution<double> u(-1.0, 1.0);
                for (int i = 0; i < w; ++i)
                    for (int j = i; j < w; ++j) data(i, j) = cplx(u(rng), u(rng));
                auto [level, x] = sys.density_preimage(lo, hi, data);
                const AnchoredDecomposition d =
                    sys.representation_window(level, std::max(D, level));
                const CMatrix realized = window_matrix(d, x);
                for (long long t = lo; t <= hi && ok; ++t)
                    for (long long c = t; c <= hi && ok; ++c)
                        if (realized(static_cast<int>(t - d.window_lo),
                                     static_cast<int>(c - d.window_lo)) !=
                            data(static_cast<int>(t - lo), static_cast<int>(c - lo))) {
                            ok = false;
                            witness = "window data not reproduced at level " +
                                      std::to_string(level);
                        }
            }
            report.add("density_preimage", scope, ok, witness);
        }
    }

    // global checks, independent of any example
    {
        bool ok = true;
        for (int n = 2; n <= 12 && ok; ++n) ok = witness_annihilated(n);
        report.add("boundary_witness", "T_2..T_12", ok);
    }
    {
        bool ok = true;
        std::string witness;
        for (int n = 2; n <= 4 && ok; ++n) {
            const std::vector<Interval> all = intervals_of(n);
            for (std::size_t i = 0; i < all.size() && ok; ++i)
                for (std::size_t j = 0; j < all.size() && ok; ++j) {
                    if (i == j) continue;
                    if (!lemma_check(n, all[i], all[j])) {
                        ok = false;
                        witness = "pair " + to_string(all[i]) + ", " + to_string(all[j]) +
                                  " in T_" + std::to_string(n);
                    }
                }
        }
        report.add("lemma_two_interval_generation", "T_2..T_4", ok, witness);
    }
    {
        bool ok = true;
        std::mt19937_64 rng(0x5c47ULL);
        std::uniform_real_distribution<double> u(0.25, 2.0);
        std::uniform_int_distribution<int> ndist(3, 6);
        for (int s = 0; s < std::max(20, T) && ok; ++s) {
            const int n = ndist(rng);
            std::vector<cplx> d(static_cast<std::size_t>(n));
            for (cplx& v : d) v = cplx(u(rng), u(rng));
            SchurCocycle c = SchurCocycle::from_potential(d);
            if (!schur_validate(c)) ok = false;
            // a single-entry perturbation off the diagonal breaks the cocycle
            std::uniform_int_distribution<int> idist(0, n - 2);
            const int i = idist(rng);
            std::uniform_int_distribution<int> jdist(i + 1, n - 1);
            const int j = jdist(rng);
            c.at(i, j) += cplx(0.5 + u(rng), 0.0);
            if (n >= 3 && schur_validate(c)) ok = false;
        }
        report.add("schur_cocycle", "random potentials", ok);
    }

    return report;
}

}  // namespace calim

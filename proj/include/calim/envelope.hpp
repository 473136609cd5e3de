#pragma once

// Structure of the C*-algebras generated by the probed representations:
// level summand lists, Bratteli diagrams with partial-embedding
// multiplicities, the reach-the-identity-node test, the boundary-witness
// matrix unit, the two-interval generation check, and the diagonal defect
// probe.
//
// The boundary-zero statement is operationalized as two finite
// certificates (reach-identity paths and witness annihilation).  Reports
// never claim the infinite statement, only the finite certificate up to
// the probed horizon.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "calim/embedding.hpp"
#include "calim/matrix.hpp"
#include "calim/nest.hpp"
#include "calim/system.hpp"

namespace calim {

struct LevelSummand {
    Interval interval;
    int rank = 0;
};

/// Distinct intervals appearing in the probed decomposition of rho_k, one
/// summand per interval.  Node identity is the interval itself, not its
/// rank: distinct intervals of equal rank are distinct summands of the
/// concrete algebra.
struct LevelStructure {
    int level = 0;
    int probe_depth = 0;
    std::vector<LevelSummand> summands;  // sorted by interval
    std::size_t identity_index = 0;
    bool saturated = false;
    std::string saturation_note;
};

namespace detail {

inline std::vector<LevelSummand> distinct_summands(const CompressionEmbedding& emb) {
    std::vector<Interval> intervals = emb.blocks;
    std::sort(intervals.begin(), intervals.end());
    intervals.erase(std::unique(intervals.begin(), intervals.end()), intervals.end());
    std::vector<LevelSummand> out;
    out.reserve(intervals.size());
    for (const Interval& q : intervals) out.push_back(LevelSummand{q, q.rank()});
    return out;
}

}  // namespace detail

/// Summand list of the probed C*(rho_k(T_{n_k})).  Saturation in depth is
/// certified by a fixed-point probe when the system can still extend, and
/// merely reported at max depth otherwise.
inline LevelStructure level_structure(DirectSystem& sys, int k, int depth) {
    LevelStructure ls;
    ls.level = k;
    ls.probe_depth = depth;
    ls.summands = detail::distinct_summands(sys.compose_range(k, depth));

    bool found_identity = false;
    for (std::size_t i = 0; i < ls.summands.size(); ++i)
        if (ls.summands[i].interval.is_identity()) {
            ls.identity_index = i;
            found_identity = true;
        }
    if (!found_identity) throw std::logic_error("level_structure: no identity summand");

    if (sys.can_extend()) {
        const std::vector<LevelSummand> deeper =
            detail::distinct_summands(sys.compose_range(k, depth + 1));
        const std::vector<LevelSummand> shallower =
            depth > k ? detail::distinct_summands(sys.compose_range(k, depth - 1))
                      : ls.summands;
        auto same = [](const std::vector<LevelSummand>& a, const std::vector<LevelSummand>& b) {
            if (a.size() != b.size()) return false;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i].interval != b[i].interval) return false;
            return true;
        };
        ls.saturated = same(ls.summands, deeper) && same(ls.summands, shallower);
        ls.saturation_note = ls.saturated
                                 ? "interval set is a fixed point under one further tail application"
                                 : "interval set still growing at this depth";
    } else {
        ls.saturated = false;
        ls.saturation_note = "reported at maximal materializable depth";
    }
    return ls;
}

struct BratteliEdge {
    std::size_t from = 0;  // summand index at level k
    std::size_t to = 0;    // summand index at level k+1
    int multiplicity = 0;
};

struct BratteliDiagram {
    std::vector<LevelStructure> levels;
    std::vector<std::vector<BratteliEdge>> edges;  // edges[t]: levels[t] -> levels[t+1]
};

/// Levels 1..levels of the diagram, probed at the given depth.  The
/// multiplicity of node v into node w is the number of occurrences of v's
/// interval in the decomposition of (compression to w's interval) o phi_k.
inline BratteliDiagram bratteli(DirectSystem& sys, int levels, int depth) {
    if (levels < 1) throw std::invalid_argument("bratteli: need at least one level");
    if (levels > depth) throw std::invalid_argument("bratteli: levels must not exceed the probe depth");
    BratteliDiagram d;
    for (int k = 1; k <= levels; ++k) d.levels.push_back(level_structure(sys, k, depth));
    for (int k = 1; k < levels; ++k) {
        const LevelStructure& lo = d.levels[static_cast<std::size_t>(k) - 1];
        const LevelStructure& hi = d.levels[static_cast<std::size_t>(k)];
        std::vector<BratteliEdge> gap;
        for (std::size_t w = 0; w < hi.summands.size(); ++w) {
            const std::vector<Interval> pieces =
                compose_single(hi.summands[w].interval, sys.step(k));
            for (std::size_t v = 0; v < lo.summands.size(); ++v) {
                int mult = 0;
                for (const Interval& piece : pieces)
                    if (piece == lo.summands[v].interval) ++mult;
                if (mult > 0) gap.push_back(BratteliEdge{v, w, mult});
            }
        }
        d.edges.push_back(std::move(gap));
    }
    return d;
}

/// Earliest level at which each node reaches an identity node along
/// positive-multiplicity edges; identity nodes reach at their own level.
/// std::nullopt marks "not within horizon".  all_reach covers the levels
/// strictly before the frontier: the last level's non-identity nodes have
/// no forward edges inside the probe and are reported, not judged.
struct ReachReport {
    std::vector<std::vector<std::optional<int>>> earliest;  // [level-1][summand]
    bool all_reach = false;
};

inline ReachReport reaches_identity(const BratteliDiagram& d) {
    const std::size_t L = d.levels.size();
    ReachReport r;
    r.earliest.resize(L);
    for (std::size_t t = 0; t < L; ++t)
        r.earliest[t].assign(d.levels[t].summands.size(), std::nullopt);
    for (std::size_t t = L; t-- > 0;) {
        for (std::size_t v = 0; v < d.levels[t].summands.size(); ++v) {
            if (v == d.levels[t].identity_index) {
                r.earliest[t][v] = d.levels[t].level;
                continue;
            }
            std::optional<int> best;
            if (t + 1 < L)
                for (const BratteliEdge& e : d.edges[t])
                    if (e.from == v && r.earliest[t + 1][e.to])
                        if (!best || *r.earliest[t + 1][e.to] < *best)
                            best = r.earliest[t + 1][e.to];
            r.earliest[t][v] = best;
        }
    }
    r.all_reach = true;
    for (std::size_t t = 0; t + 1 < L; ++t)
        for (const auto& e : r.earliest[t])
            if (!e) r.all_reach = false;
    if (L == 1)
        for (const auto& e : r.earliest[0])
            if (!e) r.all_reach = false;
    return r;
}

/// The matrix unit with a 1 in the extreme upper right corner: the witness
/// whose compression to every proper interval vanishes.  Verified
/// exhaustively before returning.
inline CMatrix boundary_witness(int n) {
    if (n < 2) throw std::invalid_argument("boundary_witness: need n >= 2");
    CMatrix v = matrix_unit(n, 0, n - 1);
    for (const Interval& q : intervals_of(n)) {
        if (q.is_identity()) continue;
        CMatrix c = compress(v, q);
        for (const cplx& e : c.entries())
            if (e != cplx(0.0, 0.0))
                throw std::logic_error("boundary_witness: proper interval retained the witness");
    }
    return v;
}

/// True iff every proper interval of T_n annihilates the upper-right unit.
inline bool witness_annihilated(int n) {
    CMatrix v = matrix_unit(n, 0, n - 1);
    for (const Interval& q : intervals_of(n)) {
        if (q.is_identity()) continue;
        CMatrix c = compress(v, q);
        for (const cplx& e : c.entries())
            if (e != cplx(0.0, 0.0)) return false;
    }
    return true;
}

/// The two-interval generation check: the star algebra generated by
/// { compress(a,p) ⊕ compress(a,q) : a over the matrix-unit basis of T_n }
/// has dimension rank(p)^2 + rank(q)^2 when p != q.
inline bool lemma_check(int n, const Interval& p, const Interval& q, double tol = 1e-8) {
    validate_interval(p);
    validate_interval(q);
    if (p.ambient != n || q.ambient != n)
        throw std::invalid_argument("lemma_check: intervals must live in T_n");
    if (p.rank() < 1 || q.rank() < 1)
        throw std::invalid_argument("lemma_check: intervals must be nonzero");
    if (p == q) throw std::invalid_argument("lemma_check: intervals must be distinct");
    std::vector<CMatrix> gens;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            CMatrix u = matrix_unit(n, i, j);
            gens.push_back(block_diag({compress(u, p), compress(u, q)}));
        }
    const int dim = generated_star_algebra_dim(gens, tol);
    return dim == p.rank() * p.rank() + q.rank() * q.rank();
}

/// Linear dimension of the window diagonals of the probed rho_k image
/// versus the window size.  A strict gap certifies linked diagonal entries
/// at this truncation; it measures linking, not masa failure per se.
inline std::pair<int, int> diagonal_masa_defect(DirectSystem& sys, int k, int depth,
                                                double tol = 1e-8) {
    const CompressionEmbedding emb = sys.compose_range(k, depth);
    const int n = sys.dim(k);
    const int m = emb.target_dim();
    std::vector<CMatrix> diags;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            CMatrix img = apply_embedding(emb, matrix_unit(n, i, j));
            CMatrix diag(1, m);
            for (int t = 0; t < m; ++t) diag(0, t) = img(t, t);
            diags.push_back(std::move(diag));
        }
    return {span_dimension(diags, tol), m};
}

struct WitnessCheck {
    int level = 0;
    int dimension = 0;
    bool annihilated = false;
};

struct EnvelopeReport {
    std::string system_name;
    std::string envelope_label;  // documented gallery identification, possibly empty
    int levels = 0;
    int depth = 0;
    BratteliDiagram diagram;
    ReachReport reach;
    std::vector<WitnessCheck> witnesses;
    CompactClassification compacts;
    bool boundary_evidence_complete = false;
    std::string verdict;
};

/// Assembles the finite certificate: Bratteli diagram, reach-identity
/// verdicts, witness annihilation at every probed level, and the compact
/// classification.
inline EnvelopeReport envelope_report(DirectSystem& sys, int levels, int depth) {
    EnvelopeReport r;
    r.system_name = sys.spec().name;
    r.envelope_label = sys.spec().envelope_label;
    r.levels = levels;
    r.depth = depth;
    r.diagram = bratteli(sys, levels, depth);
    r.reach = reaches_identity(r.diagram);
    for (int k = 1; k <= levels; ++k) {
        const int n = sys.dim(k);
        r.witnesses.push_back(WitnessCheck{k, n, n >= 2 ? witness_annihilated(n) : true});
    }
    r.compacts = sys.compact_classification(std::max(depth, levels + 1));
    bool witnesses_ok = true;
    for (const WitnessCheck& w : r.witnesses) witnesses_ok = witnesses_ok && w.annihilated;
    r.boundary_evidence_complete = r.reach.all_reach && witnesses_ok;
    r.verdict = r.boundary_evidence_complete
                    ? "Silov-boundary-zero evidence complete up to horizon " +
                          std::to_string(levels)
                    : "boundary evidence incomplete within horizon " + std::to_string(levels);
    return r;
}

/// DOT export: one rank per level, node label "M_r @ [s,e)", edge label =
/// multiplicity, identity nodes drawn with doubled periphery.
inline std::string to_dot(const BratteliDiagram& d) {
    std::ostringstream os;
    os << "digraph bratteli {\n  rankdir=TB;\n  node [shape=ellipse];\n";
    for (std::size_t t = 0; t < d.levels.size(); ++t) {
        os << "  { rank=same;";
        for (std::size_t v = 0; v < d.levels[t].summands.size(); ++v) {
            const LevelSummand& s = d.levels[t].summands[v];
            os << " L" << d.levels[t].level << "_" << v << " [label=\"M_" << s.rank << " @ "
               << to_string(s.interval) << "\"";
            if (v == d.levels[t].identity_index) os << ", peripheries=2";
            os << "];";
        }
        os << " }\n";
    }
    for (std::size_t t = 0; t < d.edges.size(); ++t)
        for (const BratteliEdge& e : d.edges[t])
            os << "  L" << d.levels[t].level << "_" << e.from << " -> L" << d.levels[t + 1].level
               << "_" << e.to << " [label=\"" << e.multiplicity << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace calim

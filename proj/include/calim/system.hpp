#pragma once

// Finite presentations of direct systems T_{n_1} -> T_{n_2} -> ...,
// composite maps, the anchoring procedure, truncated representation
// windows, index-set classification, density preimages, and the
// compact-operator dichotomy certificate.
//
// All infinite objects (rho_k, index sets, z_k) are exposed through
// monotone finite probes plus exact certificates for stationary tails;
// stationarity is the decidable fragment.
//
// Concurrency: materializing a DirectSystem (extending the step list via
// the tail rule) is the only mutation and is confined to a single owner.
// Every computed artifact is an immutable snapshot, safe to share.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "calim/embedding.hpp"
#include "calim/matrix.hpp"
#include "calim/nest.hpp"

namespace calim {

/// Symbolic summand of a stationary tail step, interpreted at the current
/// size m: id = [0,m); lh = [m/2,m); diag = all m rank-1 intervals in
/// order; dlh = the rank-1 intervals of the last half.
enum class StationaryAtom { Identity, LastHalf, Diagonal, DiagonalLastHalf };

struct StationaryTail {
    std::vector<StationaryAtom> atoms;
    std::size_t distinguished = 0;  // atom index; must name an Identity atom
};

/// Diagonal entry pinned either from the start (fixed 0-based index) or
/// from the end (non-positive offset from the last index).
struct EntryRef {
    enum class Base { FromStart, FromEnd };
    Base base = Base::FromStart;
    int offset = 0;

    int resolve(int dim) const {
        const int idx = (base == Base::FromStart) ? offset : dim - 1 + offset;
        if (idx < 0 || idx >= dim)
            throw std::invalid_argument("EntryRef: entry index out of range at dimension " +
                                        std::to_string(dim));
        return idx;
    }
};

/// Parametric tail: a ↦ a ⊕ a_ee·I_k (identity first) or a_ee·I_k ⊕ a
/// (identity last), with growth sizes k_j.
struct ParametricTail {
    bool identity_first = true;
    EntryRef entry;
    std::vector<int> growth;  // k_j; empty means all ones; extends by last value

    int growth_at(std::size_t j) const {
        if (growth.empty()) return 1;
        return growth[std::min(j, growth.size() - 1)];
    }
};

struct SystemSpec {
    int n1 = 0;
    std::vector<CompressionEmbedding> prefix;
    std::optional<StationaryTail> stationary;
    std::optional<ParametricTail> parametric;
    std::string name;            // optional metadata
    std::string envelope_label;  // optional gallery identification

    bool has_tail() const { return stationary.has_value() || parametric.has_value(); }
};

/// Expand a stationary tail template at source dimension dim.
inline CompressionEmbedding stationary_step(const StationaryTail& tail, int dim) {
    CompressionEmbedding emb;
    emb.source_dim = dim;
    bool needs_half = false;
    for (StationaryAtom a : tail.atoms)
        if (a == StationaryAtom::LastHalf || a == StationaryAtom::DiagonalLastHalf)
            needs_half = true;
    if (needs_half && dim % 2 != 0)
        throw std::invalid_argument("stationary tail: last-half summand needs an even dimension, got " +
                                    std::to_string(dim));
    std::size_t dist_block = 0;
    for (std::size_t i = 0; i < tail.atoms.size(); ++i) {
        if (i == tail.distinguished) dist_block = emb.blocks.size();
        switch (tail.atoms[i]) {
            case StationaryAtom::Identity:
                emb.blocks.push_back(full_interval(dim));
                break;
            case StationaryAtom::LastHalf:
                emb.blocks.push_back(Interval{dim, dim / 2, dim});
                break;
            case StationaryAtom::Diagonal:
                for (int j = 0; j < dim; ++j) emb.blocks.push_back(Interval{dim, j, j + 1});
                break;
            case StationaryAtom::DiagonalLastHalf:
                for (int j = dim / 2; j < dim; ++j) emb.blocks.push_back(Interval{dim, j, j + 1});
                break;
        }
    }
    emb.distinguished = dist_block;
    validate_embedding(emb);
    return emb;
}

inline CompressionEmbedding parametric_step(const ParametricTail& tail, int dim, int k) {
    if (k < 1) throw std::invalid_argument("parametric tail: growth size must be positive");
    const int e = tail.entry.resolve(dim);
    CompressionEmbedding emb;
    emb.source_dim = dim;
    if (tail.identity_first) {
        emb.blocks.push_back(full_interval(dim));
        for (int t = 0; t < k; ++t) emb.blocks.push_back(Interval{dim, e, e + 1});
        emb.distinguished = 0;
    } else {
        for (int t = 0; t < k; ++t) emb.blocks.push_back(Interval{dim, e, e + 1});
        emb.blocks.push_back(full_interval(dim));
        emb.distinguished = emb.blocks.size() - 1;
    }
    validate_embedding(emb);
    return emb;
}

inline void validate_spec(const SystemSpec& spec) {
    if (spec.n1 < 1) throw std::invalid_argument("spec: n1 must be positive");
    if (spec.stationary && spec.parametric)
        throw std::invalid_argument("spec: at most one tail rule");
    int dim = spec.n1;
    for (std::size_t i = 0; i < spec.prefix.size(); ++i) {
        const CompressionEmbedding& step = spec.prefix[i];
        if (step.source_dim != dim)
            throw std::invalid_argument("spec: steps[" + std::to_string(i) +
                                        "] source dimension " + std::to_string(step.source_dim) +
                                        " does not match chain dimension " + std::to_string(dim));
        const int target = validate_embedding(step);
        if (target <= dim)
            throw std::invalid_argument("spec: steps[" + std::to_string(i) +
                                        "] must be proper (n_k strictly increasing)");
        dim = target;
    }
    if (spec.stationary) {
        const StationaryTail& t = *spec.stationary;
        if (t.atoms.empty()) throw std::invalid_argument("spec: tail has no summands");
        if (t.distinguished >= t.atoms.size() ||
            t.atoms[t.distinguished] != StationaryAtom::Identity)
            throw std::invalid_argument("spec: tail distinguished index must name an identity summand");
        if (t.atoms.size() < 2)
            throw std::invalid_argument("spec: tail must be proper (identity alone does not grow)");
    }
    if (spec.parametric) {
        for (int g : spec.parametric->growth)
            if (g < 1) throw std::invalid_argument("spec: growth sizes must be positive");
        spec.parametric->entry.resolve(dim);  // throws when out of range at the tail's start
    }
}

struct AnchoredBlock {
    Interval interval;
    long long basis_offset = 0;
};

/// Block layout of rho_k probed to a finite depth, over the basis window
/// anchored at e_0.
struct AnchoredDecomposition {
    int level = 0;
    int depth = 0;
    std::vector<AnchoredBlock> blocks;  // tile [window_lo, window_hi) contiguously
    std::size_t distinguished = 0;
    long long anchor = 0;  // A_depth
    long long window_lo = 0;
    long long window_hi = 0;
};

/// Dense window matrix of a probed representation: the image of x written
/// on the basis window [window_lo, window_hi).  Entries are exact copies.
inline CMatrix window_matrix(const AnchoredDecomposition& d, const CMatrix& x) {
    if (d.blocks.empty()) throw std::invalid_argument("window_matrix: empty decomposition");
    const int n = d.blocks.front().interval.ambient;
    if (!x.is_square() || x.rows() != n)
        throw std::invalid_argument("window_matrix: dimension mismatch");
    if (!is_upper_triangular(x))
        throw std::invalid_argument("window_matrix: input not upper triangular");
    const int w = static_cast<int>(d.window_hi - d.window_lo);
    CMatrix r(w, w);
    for (const AnchoredBlock& b : d.blocks) {
        const int off = static_cast<int>(b.basis_offset - d.window_lo);
        for (int i = 0; i < b.interval.rank(); ++i)
            for (int j = i; j < b.interval.rank(); ++j)
                r(off + i, off + j) = x(b.interval.start + i, b.interval.start + j);
    }
    return r;
}

enum class IndexSetKind { DoublyInfinite, BoundedBelow, BoundedAbove, Undetermined };

struct IndexSetClass {
    IndexSetKind kind = IndexSetKind::Undetermined;
    int probe_depth = 0;
};

inline const char* to_string(IndexSetKind k) {
    switch (k) {
        case IndexSetKind::DoublyInfinite: return "doubly_infinite";
        case IndexSetKind::BoundedBelow: return "bounded_below";
        case IndexSetKind::BoundedAbove: return "bounded_above";
        default: return "undetermined";
    }
}

enum class CompactKind { NoCompacts, ContainsFiniteRank, Undetermined };

struct CompactClassification {
    CompactKind kind = CompactKind::Undetermined;
    int finite_rank = 0;  // the eventual constant y, when kind == ContainsFiniteRank
    int probe_depth = 0;
    std::string certificate;
};

inline const char* to_string(CompactKind k) {
    switch (k) {
        case CompactKind::NoCompacts: return "no_compacts";
        case CompactKind::ContainsFiniteRank: return "contains_finite_rank";
        default: return "undetermined";
    }
}

/// Materialized view of a SystemSpec.  Levels are 1-based; step(t) maps
/// level t to level t+1.
class DirectSystem {
public:
    explicit DirectSystem(SystemSpec spec) : spec_(std::move(spec)) {
        validate_spec(spec_);
        dims_.push_back(spec_.n1);
    }

    const SystemSpec& spec() const { return spec_; }
    int levels_materialized() const { return static_cast<int>(dims_.size()); }

    bool can_extend() const {
        return spec_.has_tail() || steps_.size() < spec_.prefix.size();
    }

    void ensure_level(int k) {
        if (k < 1) throw std::invalid_argument("ensure_level: levels are 1-based");
        while (static_cast<int>(dims_.size()) < k) {
            const std::size_t t = steps_.size();  // next step index, 0-based
            CompressionEmbedding step;
            if (t < spec_.prefix.size()) {
                step = spec_.prefix[t];
            } else if (spec_.stationary) {
                step = stationary_step(*spec_.stationary, dims_.back());
            } else if (spec_.parametric) {
                step = parametric_step(*spec_.parametric, dims_.back(),
                                       spec_.parametric->growth_at(t - spec_.prefix.size()));
            } else {
                throw std::out_of_range("level " + std::to_string(k) +
                                        " out of range for a spec with no tail rule");
            }
            const int target = step.target_dim();
            if (target > (1 << 26))
                throw std::runtime_error("materialization exceeds the dimension cap");
            steps_.push_back(std::move(step));
            dims_.push_back(target);
        }
    }

    int dim(int level) {
        ensure_level(level);
        return dims_[static_cast<std::size_t>(level) - 1];
    }

    const CompressionEmbedding& step(int t) {
        ensure_level(t + 1);
        return steps_[static_cast<std::size_t>(t) - 1];
    }

    /// Normal form of phi_{j,k}: the composition of steps j..k-1, mapping
    /// T_{n_j} into T_{n_k}.  j == k yields the trivial identity embedding.
    CompressionEmbedding compose_range(int j, int k) {
        if (j < 1 || j > k) throw std::invalid_argument("compose_range: need 1 <= j <= k");
        ensure_level(k);
        CompressionEmbedding cur = CompressionEmbedding::identity(dim(j));
        for (int t = j; t < k; ++t) cur = compose(step(t), cur);
        return cur;
    }

    /// A_1 = 0 and A_{t+1} = A_t + (diagonal offset of the distinguished
    /// block of step t): the absolute position of the anchored matrix unit
    /// inside each T_{n_t}.
    std::vector<long long> anchor_offsets(int depth) {
        ensure_level(depth);
        std::vector<long long> a(static_cast<std::size_t>(depth) + 1, 0);
        for (int t = 1; t < depth; ++t)
            a[static_cast<std::size_t>(t) + 1] = a[t] + step(t).distinguished_offset();
        return a;
    }

    /// The decomposition of phi_{k,depth} with basis offsets renamed so the
    /// anchored matrix unit sits at basis index 0.  Successive depths extend
    /// the window without moving existing blocks.
    AnchoredDecomposition representation_window(int k, int depth) {
        if (k < 1 || k > depth)
            throw std::invalid_argument("representation_window: need 1 <= level <= depth");
        const CompressionEmbedding emb = compose_range(k, depth);
        const long long anchor = anchor_offsets(depth)[static_cast<std::size_t>(depth)];
        AnchoredDecomposition d;
        d.level = k;
        d.depth = depth;
        d.anchor = anchor;
        d.window_lo = -anchor;
        d.window_hi = dim(depth) - anchor;
        const std::vector<int> offs = emb.block_offsets();
        d.blocks.reserve(emb.blocks.size());
        for (std::size_t i = 0; i < emb.blocks.size(); ++i)
            d.blocks.push_back(AnchoredBlock{emb.blocks[i], offs[i] - anchor});
        d.distinguished = emb.distinguished;
        // the distinguished identity block must contain basis index 0
        const AnchoredBlock& db = d.blocks[d.distinguished];
        if (!(db.basis_offset <= 0 && 0 < db.basis_offset + db.interval.rank()))
            throw std::logic_error("representation_window: anchor left the distinguished block");
        return d;
    }

    /// Index-set classification.  Certified from the tail rule alone (a
    /// finite prefix only contributes finitely many summands); undetermined
    /// when there is no tail rule.
    IndexSetClass classify_index_set(int probe_depth) {
        if (!spec_.has_tail()) {
            const int reachable =
                std::min(probe_depth, static_cast<int>(spec_.prefix.size()) + 1);
            return IndexSetClass{IndexSetKind::Undetermined, reachable};
        }
        ensure_level(std::max(1, std::min(probe_depth, 8)));
        bool first, last;
        if (spec_.stationary) {
            first = spec_.stationary->distinguished == 0;
            last = spec_.stationary->distinguished == spec_.stationary->atoms.size() - 1;
        } else {
            first = spec_.parametric->identity_first;
            last = !first;
        }
        IndexSetKind kind = first   ? IndexSetKind::BoundedBelow
                            : last  ? IndexSetKind::BoundedAbove
                                    : IndexSetKind::DoublyInfinite;
        return IndexSetClass{kind, probe_depth};
    }

    /// Least materialized level whose distinguished identity block covers
    /// the basis window [lo, hi], together with the matrix placing `data`
    /// there.  The window restriction of the probed rho_k image of that
    /// matrix equals data exactly.
    std::pair<int, CMatrix> density_preimage(long long lo, long long hi, const CMatrix& data) {
        if (!(lo <= 0 && 0 <= hi)) throw std::invalid_argument("density_preimage: window must contain 0");
        const int w = static_cast<int>(hi - lo + 1);
        if (!data.is_square() || data.rows() != w)
            throw std::invalid_argument("density_preimage: data must be square of the window size");
        if (!is_upper_triangular(data))
            throw std::invalid_argument("density_preimage: data must be upper triangular");
        ensure_finite(data, "density_preimage");

        long long anchor = 0;
        for (int k = 1;; ++k) {
            if (static_cast<int>(dims_.size()) < k) {
                if (!can_extend())
                    throw std::out_of_range(
                        "density_preimage: window not coverable (prefix exhausted, no tail rule)");
                ensure_level(k);
            }
            if (k >= 2) anchor += step(k - 1).distinguished_offset();
            const long long wlo = -anchor;
            const long long whi = dim(k) - anchor;  // exclusive
            if (wlo <= lo && hi < whi) {
                CMatrix x(dim(k), dim(k));
                for (long long r = lo; r <= hi; ++r)
                    for (long long c = r; c <= hi; ++c)
                        x(static_cast<int>(r + anchor), static_cast<int>(c + anchor)) =
                            data(static_cast<int>(r - lo), static_cast<int>(c - lo));
                return {k, x};
            }
            // frozen-side certificates once the tail governs
            if (static_cast<std::size_t>(k) > spec_.prefix.size() && spec_.has_tail()) {
                const IndexSetKind kind = classify_index_set(k).kind;
                if (kind == IndexSetKind::BoundedBelow && lo < wlo)
                    throw std::out_of_range(
                        "density_preimage: index set is bounded below; window requests index " +
                        std::to_string(lo) + " < " + std::to_string(wlo));
                if (kind == IndexSetKind::BoundedAbove && hi >= whi)
                    throw std::out_of_range(
                        "density_preimage: index set is bounded above; window requests index " +
                        std::to_string(hi) + " >= " + std::to_string(whi));
            }
            if (k > 4096 || dim(k) > (1 << 24))
                throw std::runtime_error("density_preimage: window not covered within the materialization cap");
        }
    }

    /// Number of identity summands in phi_{k,depth}: a lower bound for z_k,
    /// nondecreasing in depth.
    int identity_multiplicity(int k, int depth) {
        const CompressionEmbedding emb = compose_range(k, depth);
        int count = 0;
        for (const Interval& b : emb.blocks)
            if (b.is_identity()) ++count;
        return count;
    }

    CompactClassification compact_classification(int probe_depth);

private:
    SystemSpec spec_;
    std::vector<CompressionEmbedding> steps_;
    std::vector<int> dims_;
};

// --- compact-operator dichotomy -------------------------------------------
//
// z_k, the number of identity summands in rho_k, is decreasing in k; either
// all z_k are infinite (no nonzero compacts in the image) or z_k is
// eventually a finite constant y.  For tails the question is decidable:
// an identity copy of rank n_k sitting at offset p inside T_m survives one
// tail application once per summand whose interval contains [p, p+n_k).
// Identity summands always contain it; rank-1 summands never do (n_k >= 2);
// a last-half summand captures it iff 2p >= m.  Under the single identity
// successor the ratio x = p/m evolves by x' = (alpha + 2x)/R in half-unit
// weights (id/diag = 2, lh/dlh = 1), a contraction with fixed point
// x* = alpha/(R-2), so capture behaviour is decided by comparing x and x*
// against 1/2 with exact integer arithmetic.

inline CompactClassification DirectSystem::compact_classification(int probe_depth) {
    if (!spec_.has_tail()) {
        const int reachable = std::min(probe_depth, static_cast<int>(spec_.prefix.size()) + 1);
        ensure_level(reachable);
        return CompactClassification{CompactKind::Undetermined, 0, reachable,
                                     "no tail rule; prefix exhausted at depth " +
                                         std::to_string(reachable)};
    }
    ensure_level(probe_depth);

    // evaluation level: first tail-governed level of dimension >= 2 (rank-1
    // summands can capture identity copies only when n_k = 1)
    int k0 = static_cast<int>(spec_.prefix.size()) + 1;
    if (dim(k0) < 2) ++k0;
    if (k0 >= probe_depth)
        return CompactClassification{CompactKind::Undetermined, 0, probe_depth,
                                     "probe too shallow to evaluate the tail"};

    if (spec_.parametric) {
        const int y = identity_multiplicity(k0, probe_depth);
        return CompactClassification{
            CompactKind::ContainsFiniteRank, y, probe_depth,
            "parametric tail: one identity summand per step and rank-1 summands cannot "
            "contain an identity copy; z_k = " + std::to_string(y) +
                " for all k >= " + std::to_string(k0)};
    }

    const StationaryTail& tail = *spec_.stationary;
    int c_id = 0, c_lh = 0;
    long long r2 = 0, alpha2 = 0;
    for (std::size_t i = 0; i < tail.atoms.size(); ++i) {
        const long long w =
            (tail.atoms[i] == StationaryAtom::Identity || tail.atoms[i] == StationaryAtom::Diagonal)
                ? 2
                : 1;
        r2 += w;
        if (i < tail.distinguished) alpha2 += w;
        if (tail.atoms[i] == StationaryAtom::Identity) ++c_id;
        if (tail.atoms[i] == StationaryAtom::LastHalf) ++c_lh;
    }

    if (c_id >= 2)
        return CompactClassification{CompactKind::NoCompacts, 0, probe_depth,
                                     "stationary tail with " + std::to_string(c_id) +
                                         " identity summands: every identity copy at least "
                                         "doubles per step, so all z_k are infinite"};

    if (c_lh == 0) {
        const int y = identity_multiplicity(k0, probe_depth);
        return CompactClassification{
            CompactKind::ContainsFiniteRank, y, probe_depth,
            "stationary tail with a single identity summand and only rank-1 companions; "
            "each identity copy has exactly one successor, so z_k = " + std::to_string(y) +
                " for all k >= " + std::to_string(k0)};
    }

    // last-half summands present: exact drift analysis of the copy offsets
    const CompressionEmbedding probe = compose_range(k0, probe_depth);
    std::vector<long long> copies;
    {
        const std::vector<int> offs = probe.block_offsets();
        for (std::size_t i = 0; i < probe.blocks.size(); ++i)
            if (probe.blocks[i].is_identity()) copies.push_back(offs[i]);
    }
    long long mm = dim(probe_depth);

    if (2 * alpha2 > r2 - 2)
        return CompactClassification{CompactKind::NoCompacts, 0, probe_depth,
                                     "stationary tail: the identity copy drifts into the "
                                     "last-half capture region (x* = " + std::to_string(alpha2) +
                                         "/" + std::to_string(r2 - 2) +
                                         " > 1/2), so it spawns new copies cofinally"};
    if (2 * alpha2 == r2 - 2) {
        bool any_captured = false;
        for (long long p : copies)
            if (2 * p >= mm) any_captured = true;
        if (any_captured)
            return CompactClassification{CompactKind::NoCompacts, 0, probe_depth,
                                         "stationary tail: an identity copy sits at the "
                                         "boundary fixed point x* = 1/2 inside the capture "
                                         "region and respawns every step"};
        return CompactClassification{
            CompactKind::ContainsFiniteRank, static_cast<int>(copies.size()), probe_depth,
            "stationary tail: all identity copies stay strictly below the last half "
            "(x* = 1/2 approached from below); z_k = " + std::to_string(copies.size()) +
                " for all k >= " + std::to_string(k0)};
    }

    // x* < 1/2: captures are transient; simulate exactly until quiescent
    std::vector<long long> atom_off2(tail.atoms.size(), 0);  // offsets in half-units
    {
        long long acc = 0;
        for (std::size_t i = 0; i < tail.atoms.size(); ++i) {
            atom_off2[i] = acc;
            acc += (tail.atoms[i] == StationaryAtom::Identity ||
                    tail.atoms[i] == StationaryAtom::Diagonal)
                       ? 2
                       : 1;
        }
    }
    for (int round = 0; round < 64; ++round) {
        bool quiescent = true;
        for (long long p : copies)
            if (2 * p >= mm) quiescent = false;
        if (quiescent)
            return CompactClassification{
                CompactKind::ContainsFiniteRank, static_cast<int>(copies.size()), probe_depth,
                "stationary tail: after transient captures every identity copy stays in the "
                "first half (x* < 1/2); z_k = " + std::to_string(copies.size()) +
                    " for all large k"};
        if ((mm * r2) % 2 != 0 || copies.size() > (std::size_t{1} << 16) ||
            mm > (std::int64_t{1} << 55) / r2)
            break;
        std::vector<long long> next;
        for (long long p : copies) {
            next.push_back(atom_off2[tail.distinguished] * mm / 2 + p);
            if (2 * p >= mm)
                for (std::size_t i = 0; i < tail.atoms.size(); ++i)
                    if (tail.atoms[i] == StationaryAtom::LastHalf)
                        next.push_back(atom_off2[i] * mm / 2 + (p - mm / 2));
        }
        copies = std::move(next);
        mm = mm * r2 / 2;
    }
    return CompactClassification{CompactKind::Undetermined, 0, probe_depth,
                                 "drift simulation did not reach quiescence within its cap"};
}

}  // namespace calim

#pragma once

// The compression-embedding calculus: normal forms, validation,
// application, exact composition/decomposition, left inverses, regularity,
// and Schur cocycle validation.
//
// A compression embedding T_n -> T_m is a direct sum of interval
// compressions, at least one summand being the identity.  The normal form
// keeps blocks in target-diagonal order: the order IS the block layout of
// the target and is needed for anchoring and offsets downstream.

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "calim/matrix.hpp"
#include "calim/nest.hpp"

namespace calim {

struct CompressionEmbedding {
    int source_dim = 0;
    std::vector<Interval> blocks;   // intervals of T_source, in target order
    std::size_t distinguished = 0;  // index of the tracked identity block

    static CompressionEmbedding identity(int n) {
        return CompressionEmbedding{n, {full_interval(n)}, 0};
    }

    int target_dim() const {
        int t = 0;
        for (const Interval& b : blocks) t += b.rank();
        return t;
    }

    /// Diagonal offset of each block inside the target.
    std::vector<int> block_offsets() const {
        std::vector<int> off(blocks.size());
        int o = 0;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            off[i] = o;
            o += blocks[i].rank();
        }
        return off;
    }

    int distinguished_offset() const {
        int o = 0;
        for (std::size_t i = 0; i < distinguished; ++i) o += blocks[i].rank();
        return o;
    }
};

/// Checks all CompressionEmbedding invariants and returns the target
/// dimension.  The unitality convention (unit of the target = unit of the
/// image) holds by construction because the blocks tile the target diagonal.
inline int validate_embedding(const CompressionEmbedding& emb) {
    if (emb.source_dim < 1)
        throw std::invalid_argument("embedding: source dimension must be positive");
    if (emb.blocks.empty()) throw std::invalid_argument("embedding: no blocks");
    bool has_identity = false;
    for (std::size_t i = 0; i < emb.blocks.size(); ++i) {
        const Interval& b = emb.blocks[i];
        validate_interval(b);
        if (b.ambient != emb.source_dim)
            throw std::invalid_argument("embedding: block " + std::to_string(i) +
                                        " has wrong ambient dimension");
        if (b.rank() < 1)
            throw std::invalid_argument("embedding: block " + std::to_string(i) +
                                        " has rank 0");
        if (b.is_identity()) has_identity = true;
    }
    if (!has_identity)
        throw std::invalid_argument("embedding: missing identity block");
    if (emb.distinguished >= emb.blocks.size() ||
        !emb.blocks[emb.distinguished].is_identity())
        throw std::invalid_argument("embedding: distinguished index must name an identity block");
    return emb.target_dim();
}

/// phi(a): block-diagonal matrix whose i-th diagonal block is
/// compress(a, blocks[i]).  Entries are exact copies of entries of a.
inline CMatrix apply_embedding(const CompressionEmbedding& emb, const CMatrix& a) {
    if (!a.is_square() || a.rows() != emb.source_dim)
        throw std::invalid_argument("apply_embedding: dimension mismatch");
    if (!is_upper_triangular(a))
        throw std::invalid_argument("apply_embedding: input not upper triangular");
    const int m = emb.target_dim();
    CMatrix r(m, m);
    int off = 0;
    for (const Interval& b : emb.blocks) {
        for (int i = 0; i < b.rank(); ++i)
            for (int j = i; j < b.rank(); ++j)
                r(off + i, off + j) = a(b.start + i, b.start + j);
        off += b.rank();
    }
    return r;
}

/// Decomposes psi_q o phi as a sum of compressions on the source: walk the
/// block tiling of the target diagonal; each block overlapping [q.start,
/// q.end) contributes the corresponding sub-interval of its source
/// interval, in block order.  An empty result is valid and signals that
/// the compression annihilates the image.
inline std::vector<Interval> compose_single(const Interval& q,
                                            const CompressionEmbedding& emb) {
    validate_interval(q);
    if (q.ambient != emb.target_dim())
        throw std::invalid_argument("compose_single: interval ambient must equal target dim");
    std::vector<Interval> out;
    int off = 0;
    for (const Interval& b : emb.blocks) {
        const int lo = std::max(q.start, off);
        const int hi = std::min(q.end, off + b.rank());
        if (lo < hi) {
            const int u = lo - off;
            const int v = hi - off;
            out.push_back(Interval{emb.source_dim, b.start + u, b.start + v});
        }
        off += b.rank();
    }
    return out;
}

/// Normal form of later o earlier.  The distinguished block of the result
/// is the image of earlier's distinguished block inside later's
/// distinguished block, which keeps anchoring deterministic.
inline CompressionEmbedding compose(const CompressionEmbedding& later,
                                    const CompressionEmbedding& earlier) {
    if (earlier.target_dim() != later.source_dim)
        throw std::invalid_argument("compose: dimension mismatch");
    CompressionEmbedding r;
    r.source_dim = earlier.source_dim;
    std::size_t result_distinguished = 0;
    bool found = false;
    for (std::size_t j = 0; j < later.blocks.size(); ++j) {
        std::vector<Interval> pieces = compose_single(later.blocks[j], earlier);
        if (j == later.distinguished) {
            // later's distinguished block is the identity, so the pieces are
            // exactly earlier's blocks; select earlier's distinguished one.
            result_distinguished = r.blocks.size() + earlier.distinguished;
            found = true;
        }
        r.blocks.insert(r.blocks.end(), pieces.begin(), pieces.end());
    }
    if (!found) throw std::logic_error("compose: distinguished block not traced");
    r.distinguished = result_distinguished;
    validate_embedding(r);
    return r;
}

/// psi_k o phi_k = id: compressing the image back to the distinguished
/// block's target interval recovers the input exactly.
inline bool left_inverse_check(const CompressionEmbedding& emb, int trials) {
    validate_embedding(emb);
    const int n = emb.source_dim;
    const int o = emb.distinguished_offset();
    const Interval back{emb.target_dim(), o, o + n};
    auto round_trip = [&](const CMatrix& a) {
        return compress(apply_embedding(emb, a), back) == a;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (!round_trip(matrix_unit(n, i, j))) return false;
    std::mt19937_64 rng(0x1ef7ULL ^ static_cast<std::uint64_t>(n));
    for (int t = 0; t < trials; ++t)
        if (!round_trip(random_upper_triangular(n, rng))) return false;
    return true;
}

/// Regularity: every matrix unit maps to a 0-1 matrix, i.e. a sum of
/// matrix units.  True for every valid compression embedding; exposed as a
/// property-test hook.
inline bool is_regular(const CompressionEmbedding& emb) {
    validate_embedding(emb);
    const int n = emb.source_dim;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            CMatrix img = apply_embedding(emb, matrix_unit(n, i, j));
            for (const cplx& v : img.entries())
                if (v != cplx(0.0, 0.0) && v != cplx(1.0, 0.0)) return false;
        }
    return true;
}

/// (phi tensor id_t) applied to a t x t block matrix over T_n, given as a
/// (t*n) x (t*n) matrix whose (r,s) block is upper triangular.
inline CMatrix amplified_apply(const CompressionEmbedding& emb, const CMatrix& a, int t) {
    const int n = emb.source_dim;
    const int m = emb.target_dim();
    if (t < 1) throw std::invalid_argument("amplified_apply: t must be positive");
    if (a.rows() != t * n || a.cols() != t * n)
        throw std::invalid_argument("amplified_apply: shape mismatch");
    CMatrix r(t * m, t * m);
    for (int br = 0; br < t; ++br)
        for (int bs = 0; bs < t; ++bs) {
            int off = 0;
            for (const Interval& b : emb.blocks) {
                for (int i = 0; i < b.rank(); ++i)
                    for (int j = 0; j < b.rank(); ++j)
                        r(br * m + off + i, bs * m + off + j) =
                            a(br * n + b.start + i, bs * n + b.start + j);
                off += b.rank();
            }
        }
    return r;
}

/// Block matrix over T_n with each n x n block independently random and
/// upper triangular; the natural sample space for amplified isometry checks.
inline CMatrix random_amplified_upper_triangular(int n, int t, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix a(t * n, t * n);
    for (int br = 0; br < t; ++br)
        for (int bs = 0; bs < t; ++bs)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    a(br * n + i, bs * n + j) = cplx(u(rng), u(rng));
    return a;
}

/// Schur multiplier table supported on the upper-triangular incidence set
/// of T_n.  Entries below the diagonal are ignored.
struct SchurCocycle {
    int n = 0;
    std::vector<cplx> c;  // n x n, row-major

    cplx at(int i, int j) const { return c[static_cast<std::size_t>(i) * n + j]; }
    cplx& at(int i, int j) { return c[static_cast<std::size_t>(i) * n + j]; }

    static SchurCocycle ones(int n) {
        return SchurCocycle{n, std::vector<cplx>(static_cast<std::size_t>(n) * n, cplx(1.0, 0.0))};
    }

    /// c_ij = d_i / d_j for a diagonal potential d; always a valid cocycle.
    static SchurCocycle from_potential(const std::vector<cplx>& d) {
        const int n = static_cast<int>(d.size());
        SchurCocycle s{n, std::vector<cplx>(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0))};
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) s.at(i, j) = d[i] / d[j];
        return s;
    }
};

/// Entrywise multiplier map a_ij -> c_ij a_ij on T_n.
inline CMatrix schur_apply(const SchurCocycle& s, const CMatrix& a) {
    if (!a.is_square() || a.rows() != s.n)
        throw std::invalid_argument("schur_apply: dimension mismatch");
    CMatrix r(s.n, s.n);
    for (int i = 0; i < s.n; ++i)
        for (int j = i; j < s.n; ++j) r(i, j) = s.at(i, j) * a(i, j);
    return r;
}

/// Valid iff c_ii = 1 and c_ik = c_ij c_jk on the support, checked both
/// directly and by a brute-force homomorphism test of the multiplier map on
/// all matrix-unit products of T_n.  Floating potentials make the identity
/// hold only up to rounding, hence the relative tolerance.
inline bool schur_validate(const SchurCocycle& s, double tol = 1e-9) {
    if (s.n < 1 || s.c.size() != static_cast<std::size_t>(s.n) * s.n)
        throw std::invalid_argument("schur_validate: bad table");
    for (int i = 0; i < s.n; ++i)
        if (std::abs(s.at(i, i) - cplx(1.0, 0.0)) > tol) return false;
    bool cocycle = true;
    for (int i = 0; i < s.n && cocycle; ++i)
        for (int j = i; j < s.n && cocycle; ++j)
            for (int k = j; k < s.n && cocycle; ++k) {
                const cplx lhs = s.at(i, k);
                const cplx rhs = s.at(i, j) * s.at(j, k);
                if (std::abs(lhs - rhs) > tol * (1.0 + std::abs(rhs))) cocycle = false;
            }
    // cross-check: multiplicativity on matrix-unit products e_ij e_jk = e_ik
    bool homomorphism = true;
    for (int i = 0; i < s.n && homomorphism; ++i)
        for (int j = i; j < s.n && homomorphism; ++j)
            for (int k = j; k < s.n && homomorphism; ++k) {
                CMatrix lhs = schur_apply(s, matrix_unit(s.n, i, j) * matrix_unit(s.n, j, k));
                CMatrix rhs = schur_apply(s, matrix_unit(s.n, i, j)) *
                              schur_apply(s, matrix_unit(s.n, j, k));
                if (!approx_equal(lhs, rhs, tol * (1.0 + max_abs(rhs)))) homomorphism = false;
            }
    if (cocycle != homomorphism)
        throw std::logic_error("schur_validate: cocycle test and homomorphism test disagree");
    return cocycle;
}

}  // namespace calim

#pragma once

// Nests, intervals (semi-invariant projections), compressions, and
// digraph-algebra support.  Intervals are stored as half-open index pairs,
// never as projection matrices: the downstream calculus is combinatorial
// and must stay exact.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "calim/matrix.hpp"

namespace calim {

/// Semi-invariant projection of T_n, given by index bounds [start, end).
struct Interval {
    int ambient = 0;
    int start = 0;
    int end = 0;

    int rank() const { return end - start; }
    bool is_identity() const { return start == 0 && end == ambient; }

    auto operator<=>(const Interval&) const = default;
};

inline void validate_interval(const Interval& q) {
    if (!(0 <= q.start && q.start <= q.end && q.end <= q.ambient))
        throw std::invalid_argument("Interval: require 0 <= start <= end <= ambient");
}

inline Interval full_interval(int n) { return Interval{n, 0, n}; }

inline std::string to_string(const Interval& q) {
    return "[" + std::to_string(q.start) + "," + std::to_string(q.end) + ")";
}

/// All n(n+1)/2 nonzero intervals of the nest of T_n, in lexicographic
/// order by (start, end).
inline std::vector<Interval> intervals_of(int n) {
    if (n < 1) throw std::invalid_argument("intervals_of: n must be positive");
    std::vector<Interval> out;
    out.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (int s = 0; s < n; ++s)
        for (int e = s + 1; e <= n; ++e) out.push_back(Interval{n, s, e});
    return out;
}

/// Restriction of q a q to the range of q: the rank(q) x rank(q) submatrix
/// of a on rows and columns [start, end).
inline CMatrix compress(const CMatrix& a, const Interval& q) {
    validate_interval(q);
    if (!a.is_square() || a.rows() != q.ambient)
        throw std::invalid_argument("compress: dimension mismatch");
    CMatrix r(q.rank(), q.rank());
    for (int i = 0; i < q.rank(); ++i)
        for (int j = 0; j < q.rank(); ++j) r(i, j) = a(q.start + i, q.start + j);
    return r;
}

/// Submatrix of a on an arbitrary index set; the generalization that fails
/// to be multiplicative when the set is not an interval.
inline CMatrix mask_compress(const CMatrix& a, const std::vector<int>& idx) {
    const int m = static_cast<int>(idx.size());
    for (int i : idx)
        if (i < 0 || i >= a.rows()) throw std::out_of_range("mask_compress: index out of range");
    CMatrix r(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) r(i, j) = a(idx[i], idx[j]);
    return r;
}

namespace detail {

template <typename Extract>
bool multiplicative_on_tn(int n, int trials, std::uint64_t seed, Extract&& ext) {
    // all matrix-unit pairs of T_n, exactly
    for (int i = 0; i <= n - 1; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k <= n - 1; ++k)
                for (int l = k; l < n; ++l) {
                    CMatrix a = matrix_unit(n, i, j);
                    CMatrix b = matrix_unit(n, k, l);
                    if (ext(a * b) != ext(a) * ext(b)) return false;
                }
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        CMatrix a = random_upper_triangular(n, rng);
        CMatrix b = random_upper_triangular(n, rng);
        if (ext(a * b) != ext(a) * ext(b)) return false;
    }
    return true;
}

}  // namespace detail

/// True iff compression to q is multiplicative on T_n, checked exactly on
/// all matrix-unit pairs plus `trials` random upper-triangular pairs.
inline bool compression_is_homomorphism(int n, const Interval& q, int trials) {
    if (q.ambient != n) throw std::invalid_argument("compression_is_homomorphism: ambient mismatch");
    return detail::multiplicative_on_tn(n, trials, 0xc0117e5aULL ^ static_cast<std::uint64_t>(n),
                                        [&](const CMatrix& x) { return compress(x, q); });
}

/// Same check for a general index-set mask; false for non-intervals such as
/// {0,2} in T_3 (a = e_01, b = e_12: the product e_02 survives the mask but
/// both factors vanish).
inline bool mask_is_homomorphism(int n, const std::vector<int>& idx, int trials) {
    return detail::multiplicative_on_tn(n, trials, 0x3a5cULL ^ static_cast<std::uint64_t>(n),
                                        [&](const CMatrix& x) { return mask_compress(x, idx); });
}

/// Digraph algebra: subalgebra of M_n containing the diagonal, presented by
/// a reflexive-transitive incidence relation.
struct DigraphAlgebra {
    int n = 0;
    std::vector<std::uint8_t> rel;  // n x n, row-major

    bool related(int i, int j) const { return rel[static_cast<std::size_t>(i) * n + j] != 0; }

    static DigraphAlgebra total_order(int n) {
        DigraphAlgebra d{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n, 0)};
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) d.rel[static_cast<std::size_t>(i) * n + j] = 1;
        return d;
    }

    static DigraphAlgebra antichain(int n) {
        DigraphAlgebra d{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n, 0)};
        for (int i = 0; i < n; ++i) d.rel[static_cast<std::size_t>(i) * n + i] = 1;
        return d;
    }
};

inline void validate_digraph(const DigraphAlgebra& d) {
    if (d.n < 1 || d.rel.size() != static_cast<std::size_t>(d.n) * d.n)
        throw std::invalid_argument("DigraphAlgebra: bad relation table");
    for (int i = 0; i < d.n; ++i)
        if (!d.related(i, i)) throw std::invalid_argument("DigraphAlgebra: relation not reflexive");
    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j)
            for (int k = 0; k < d.n; ++k)
                if (d.related(i, j) && d.related(j, k) && !d.related(i, k))
                    throw std::invalid_argument("DigraphAlgebra: relation not transitive");
}

/// All distinct nonzero interval projections f - e of a digraph algebra,
/// as sorted index sets.  A diagonal projection p is invariant iff
/// p-perp A p = 0 on the incidence relation, i.e. the support set is closed
/// under predecessors; intervals are differences of nested invariant pairs.
/// For the total order this agrees with intervals_of.
inline std::vector<std::vector<int>> digraph_intervals(const DigraphAlgebra& d) {
    validate_digraph(d);
    if (d.n > 20) throw std::invalid_argument("digraph_intervals: n too large for enumeration");

    std::vector<std::uint32_t> invariant;
    for (std::uint32_t s = 0; s < (1u << d.n); ++s) {
        bool ok = true;
        for (int i = 0; ok && i < d.n; ++i)
            for (int j = 0; ok && j < d.n; ++j)
                if (d.related(i, j) && (s >> j & 1u) && !(s >> i & 1u)) ok = false;
        if (ok) invariant.push_back(s);
    }

    std::vector<std::uint32_t> diffs;
    for (std::uint32_t e : invariant)
        for (std::uint32_t f : invariant)
            if ((e & f) == e && e != f) diffs.push_back(f & ~e);
    std::sort(diffs.begin(), diffs.end());
    diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());

    std::vector<std::vector<int>> out;
    out.reserve(diffs.size());
    for (std::uint32_t m : diffs) {
        std::vector<int> set;
        for (int i = 0; i < d.n; ++i)
            if (m >> i & 1u) set.push_back(i);
        out.push_back(std::move(set));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace calim

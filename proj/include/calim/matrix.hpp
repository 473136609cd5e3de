#pragma once

// Dense complex matrices plus the numerical oracles (operator norm via
// power iteration, star-algebra span closure, span membership) that back
// the exact combinatorial layer.  Everything here is a pure function of
// its inputs; values are immutable after construction and safe to share
// across threads.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace calim {

using cplx = std::complex<double>;

/// Dense row-major complex matrix.  Small by design: the calculus lives on
/// matrices of a few hundred rows at most.
class CMatrix {
public:
    CMatrix() = default;

    CMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 0 || cols < 0)
            throw std::invalid_argument("CMatrix: negative dimension");
    }

    static CMatrix identity(int n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(int i, int j) { return a_[index(i, j)]; }
    const cplx& operator()(int i, int j) const { return a_[index(i, j)]; }

    const std::vector<cplx>& entries() const { return a_; }

    CMatrix adjoint() const {
        CMatrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    bool operator==(const CMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const CMatrix& o) const { return !(*this == o); }

private:
    std::size_t index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::out_of_range("CMatrix: index (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") out of range");
        return static_cast<std::size_t>(i) * cols_ + j;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> a_;
};

/// n x n matrix with a single 1 at (i, j).
inline CMatrix matrix_unit(int n, int i, int j) {
    if (n < 1) throw std::invalid_argument("matrix_unit: dimension must be positive");
    if (i < 0 || i >= n || j < 0 || j >= n)
        throw std::out_of_range("matrix_unit: index out of range");
    CMatrix m(n, n);
    m(i, j) = 1.0;
    return m;
}

inline CMatrix operator+(const CMatrix& x, const CMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw std::invalid_argument("matrix +: shape mismatch");
    CMatrix r(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) + y(i, j);
    return r;
}

inline CMatrix operator-(const CMatrix& x, const CMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw std::invalid_argument("matrix -: shape mismatch");
    CMatrix r(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) - y(i, j);
    return r;
}

inline CMatrix operator*(const cplx& s, const CMatrix& x) {
    CMatrix r(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) r(i, j) = s * x(i, j);
    return r;
}

// Accumulation runs over t in increasing order; exact zero terms do not
// perturb the sum, which is what makes the entry-relocation identities of
// the embedding calculus hold with exact equality.
inline CMatrix operator*(const CMatrix& x, const CMatrix& y) {
    if (x.cols() != y.rows()) throw std::invalid_argument("matrix *: shape mismatch");
    CMatrix r(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int t = 0; t < x.cols(); ++t) {
            const cplx xit = x(i, t);
            if (xit == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < y.cols(); ++j) r(i, j) += xit * y(t, j);
        }
    return r;
}

inline double frobenius_norm(const CMatrix& x) {
    double s = 0.0;
    for (const cplx& v : x.entries()) s += std::norm(v);
    return std::sqrt(s);
}

inline double max_abs(const CMatrix& x) {
    double s = 0.0;
    for (const cplx& v : x.entries()) s = std::max(s, std::abs(v));
    return s;
}

inline bool approx_equal(const CMatrix& x, const CMatrix& y, double tol) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            if (std::abs(x(i, j) - y(i, j)) > tol) return false;
    return true;
}

/// Exact test: entries strictly below the diagonal are 0.
inline bool is_upper_triangular(const CMatrix& x) {
    if (!x.is_square()) return false;
    for (int i = 1; i < x.rows(); ++i)
        for (int j = 0; j < i; ++j)
            if (x(i, j) != cplx(0.0, 0.0)) return false;
    return true;
}

/// Enforces the finiteness invariant (no NaN/Inf entries).
inline void ensure_finite(const CMatrix& x, const char* where) {
    for (const cplx& v : x.entries())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument(std::string(where) + ": non-finite entry");
}

/// diag(blocks[0], blocks[1], ...) as one square matrix.
inline CMatrix block_diag(const std::vector<CMatrix>& blocks) {
    int n = 0;
    for (const CMatrix& b : blocks) {
        if (!b.is_square()) throw std::invalid_argument("block_diag: non-square block");
        n += b.rows();
    }
    CMatrix r(n, n);
    int off = 0;
    for (const CMatrix& b : blocks) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) r(off + i, off + j) = b(i, j);
        off += b.rows();
    }
    return r;
}

/// Random upper-triangular matrix with entries uniform in [-1,1] + i[-1,1].
inline CMatrix random_upper_triangular(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = cplx(u(rng), u(rng));
    return m;
}

namespace detail {

// One power-iteration run on a Hermitian PSD matrix, from a given start.
// Returns the Rayleigh quotient at the stopping step.
inline double power_run(const CMatrix& c, std::vector<cplx> v, double tol, int cap) {
    const int n = c.rows();
    double nv = 0.0;
    for (const cplx& x : v) nv += std::norm(x);
    nv = std::sqrt(nv);
    if (nv == 0.0) return 0.0;
    for (cplx& x : v) x /= nv;

    double lambda_prev = -1.0;
    for (int it = 0; it < cap; ++it) {
        std::vector<cplx> w(n, cplx(0.0, 0.0));
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int j = 0; j < n; ++j) s += c(i, j) * v[j];
            w[i] = s;
        }
        double lambda = 0.0;  // <v, Cv> is real for Hermitian C
        for (int i = 0; i < n; ++i) lambda += (std::conj(v[i]) * w[i]).real();
        double wn = 0.0;
        for (const cplx& x : w) wn += std::norm(x);
        wn = std::sqrt(wn);
        if (wn < 1e-300) return 0.0;  // start vector lies in the kernel
        for (int i = 0; i < n; ++i) v[i] = w[i] / wn;
        if (lambda_prev >= 0.0 && std::abs(lambda - lambda_prev) <= tol * std::max(lambda, 1e-12))
            return lambda;
        lambda_prev = lambda;
    }
    throw std::runtime_error("operator_norm: power iteration did not converge within cap");
}

}  // namespace detail

/// Largest singular value of a, within relative error tol.
///
/// Deterministic by construction: power iteration on the Gram matrix a*a,
/// normalized and squared twice first (sharpens the spectral gap so the
/// fixed iteration cap of 10,000 suffices even for clustered spectra).
/// The primary start vector is all-ones; two further fixed starts guard
/// against a start orthogonal to the top eigenspace.
inline double operator_norm(const CMatrix& a, double tol = 1e-9) {
    if (a.empty()) throw std::invalid_argument("operator_norm: empty matrix");
    if (!(tol > 0.0)) throw std::invalid_argument("operator_norm: tol must be positive");
    ensure_finite(a, "operator_norm");

    CMatrix b = a.adjoint() * a;  // PSD, cols x cols
    const int n = b.rows();

    // b_k+1 = (b_k / fro(b_k))^2, twice; unwind at the end.
    double f0 = frobenius_norm(b);
    if (f0 == 0.0) return 0.0;
    CMatrix c1 = (cplx(1.0 / f0, 0.0) * b);
    c1 = c1 * c1;
    double f1 = frobenius_norm(c1);
    if (f1 == 0.0) return 0.0;
    CMatrix c2 = (cplx(1.0 / f1, 0.0) * c1);
    c2 = c2 * c2;
    double f2 = frobenius_norm(c2);
    if (f2 == 0.0) return 0.0;
    CMatrix c3 = (cplx(1.0 / f2, 0.0) * c2);

    const int cap = 10000;
    const double itol = std::min(tol, 1e-12);

    double mu = 0.0;
    {
        std::vector<cplx> ones(n, cplx(1.0, 0.0));
        mu = detail::power_run(c3, ones, itol, cap);
    }
    {
        // canonical basis vector at the heaviest diagonal entry
        int best = 0;
        for (int i = 1; i < n; ++i)
            if (c3(i, i).real() > c3(best, best).real()) best = i;
        std::vector<cplx> e(n, cplx(0.0, 0.0));
        e[best] = 1.0;
        mu = std::max(mu, detail::power_run(c3, e, itol, cap));
    }
    {
        std::mt19937_64 rng(0x5eedULL);  // fixed seed: reproducible runs
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<cplx> r(n);
        for (cplx& x : r) x = cplx(u(rng), u(rng));
        mu = std::max(mu, detail::power_run(c3, r, itol, cap));
    }

    // lambda_max(b) = f0 * sqrt(f1 * sqrt(f2 * mu)); sigma = sqrt(lambda).
    double lambda = f0 * std::sqrt(f1 * std::sqrt(f2 * mu));
    return std::sqrt(lambda);
}

namespace detail {

inline cplx frobenius_inner(const CMatrix& x, const CMatrix& y) {
    cplx s = 0.0;
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) s += std::conj(x(i, j)) * y(i, j);
    return s;
}

// Modified Gram-Schmidt over vectorized matrices.  Appends the normalized
// residual of v to basis when it clears the tolerance; two projection
// passes keep the loss of orthogonality harmless at these sizes.
inline bool mgs_append(std::vector<CMatrix>& basis, CMatrix v, double tol) {
    const double scale = 1.0 + frobenius_norm(v);
    for (int pass = 0; pass < 2; ++pass)
        for (const CMatrix& b : basis) v = v - (frobenius_inner(b, v) * b);
    const double r = frobenius_norm(v);
    if (r <= tol * scale) return false;
    basis.push_back(cplx(1.0 / r, 0.0) * v);
    return true;
}

}  // namespace detail

/// Linear dimension of the span of the given matrices (all same shape).
inline int span_dimension(const std::vector<CMatrix>& mats, double tol = 1e-8) {
    std::vector<CMatrix> basis;
    for (const CMatrix& m : mats) detail::mgs_append(basis, m, tol);
    return static_cast<int>(basis.size());
}

/// True iff the least-squares distance from x to span(basis) is below
/// tol * (1 + ||x||_F).  Invariant under rescaling the basis.
inline bool span_contains(const std::vector<CMatrix>& basis, const CMatrix& x,
                          double tol = 1e-8) {
    for (const CMatrix& b : basis)
        if (b.rows() != x.rows() || b.cols() != x.cols())
            throw std::invalid_argument("span_contains: shape mismatch");
    std::vector<CMatrix> ortho;
    for (const CMatrix& m : basis) detail::mgs_append(ortho, m, tol);
    CMatrix r = x;
    for (int pass = 0; pass < 2; ++pass)
        for (const CMatrix& b : ortho) r = r - (detail::frobenius_inner(b, r) * b);
    return frobenius_norm(r) <= tol * (1.0 + frobenius_norm(x));
}

/// Dimension of the smallest subspace of M_n containing the generators and
/// the identity, closed under product and adjoint.  Span closure: each
/// round rebuilds a full orthonormal basis, then adjoins all pairwise
/// products and adjoints, until the dimension stabilizes.
inline int generated_star_algebra_dim(const std::vector<CMatrix>& generators,
                                      double tol = 1e-8) {
    if (generators.empty())
        throw std::invalid_argument("generated_star_algebra_dim: no generators");
    const int n = generators.front().rows();
    for (const CMatrix& g : generators) {
        if (!g.is_square() || g.rows() != n)
            throw std::invalid_argument(
                "generated_star_algebra_dim: generators must be square of equal dimension");
        ensure_finite(g, "generated_star_algebra_dim");
    }

    std::vector<CMatrix> basis;
    detail::mgs_append(basis, CMatrix::identity(n), tol);
    for (const CMatrix& g : generators) {
        detail::mgs_append(basis, g, tol);
        detail::mgs_append(basis, g.adjoint(), tol);
    }

    while (true) {
        const std::size_t before = basis.size();
        std::vector<CMatrix> snapshot = basis;
        for (const CMatrix& x : snapshot) detail::mgs_append(basis, x.adjoint(), tol);
        for (const CMatrix& x : snapshot)
            for (const CMatrix& y : snapshot) detail::mgs_append(basis, x * y, tol);
        if (static_cast<int>(basis.size()) > n * n)
            throw std::runtime_error(
                "generated_star_algebra_dim: dimension exceeds n^2 (numerical rank fault)");
        if (basis.size() == before) break;
    }
    return static_cast<int>(basis.size());
}

}  // namespace calim

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "ldsolv/errors.hpp"

namespace ldsolv {

using cplx = std::complex<double>;

/// Thresholds governing every floating-point comparison in the library.
/// The defaults are overridable from the CLI; every report echoes the
/// values that were in force.
struct Tolerances {
    double eq_tol = 1e-9;        // scalar equality, relative to scale
    double rank_tol = 1e-9;      // pivot / residual threshold, relative to matrix norm
    double rational_tol = 1e-6;  // |x - p/q| acceptance for rational detection
    std::int64_t rational_denominator_bound = 1'000'000;
    int max_dim = 16;            // eigen solver size cap
    double divergence_cap = 1e12;  // gauge series norm guard
};

/// Dense complex matrix, row-major. Small sizes only; all operations are
/// value-semantic and leave their inputs untouched.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
    CMatrix(int rows, int cols, std::vector<cplx> entries);
    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMatrix identity(int n);
    static CMatrix zero(int rows, int cols) { return CMatrix(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return a_.empty(); }

    cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const std::vector<cplx>& entries() const { return a_; }

    CMatrix operator+(const CMatrix& o) const;
    CMatrix operator-(const CMatrix& o) const;
    CMatrix operator*(const CMatrix& o) const;
    CMatrix operator*(cplx s) const;
    CMatrix operator-() const { return *this * cplx(-1.0); }
    CMatrix& operator+=(const CMatrix& o) { return *this = *this + o; }
    CMatrix& operator-=(const CMatrix& o) { return *this = *this - o; }

    CMatrix adjoint() const;  // conjugate transpose
    CMatrix transpose() const;
    cplx trace() const;
    bool finite() const;

    CMatrix block(int i0, int j0, int nrows, int ncols) const;
    void set_block(int i0, int j0, const CMatrix& b);
    CMatrix col(int j) const;
    void set_col(int j, const CMatrix& v);

private:
    int rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

inline CMatrix operator*(cplx s, const CMatrix& m) { return m * s; }

/// Maximum absolute column sum (entrywise modulus).
double mat_norm1(const CMatrix& m);
/// Frobenius norm of the entry vector.
double mat_norm_fro(const CMatrix& m);
/// Commutator [a, b] = ab - ba.
CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// Scale-aware scalar comparison: |a - b| <= eq_tol * (1 + max(|a|,|b|)).
bool approx_eq(cplx a, cplx b, const Tolerances& tol);
/// Entrywise matrix comparison with the same scaling.
bool approx_eq(const CMatrix& a, const CMatrix& b, const Tolerances& tol);

/// Solve A x = b (b may have several columns) by partial-pivoted LU.
CMatrix lu_solve(const CMatrix& a, const CMatrix& b);
CMatrix inverse(const CMatrix& a);

struct EigenDecomposition {
    std::vector<cplx> eigenvalues;  // sorted by (re, im), with multiplicity
    CMatrix eigenvectors;           // column j pairs with eigenvalues[j]
};

/// Eigenvalues via shifted QR on a Hessenberg reduction; eigenvectors by
/// nullspace extraction per eigenvalue cluster with inverse-iteration
/// refinement. Columns are scaled to unit 1-norm with the first
/// significant component rotated positive-real.
EigenDecomposition eigen_decompose(const CMatrix& m, const Tolerances& tol);

/// True when the values are pairwise separated by more than
/// eq_tol * (1 + max |value|).
bool pairwise_distinct(const std::vector<cplx>& values, const Tolerances& tol);

struct RankNullspace {
    int rank = 0;
    CMatrix nullspace;  // one column per nullspace direction; may have 0 columns
};

/// Numerical rank and a nullspace basis via column-pivoted QR. Pivot
/// threshold is rank_tol relative to the largest column norm.
RankNullspace rank_and_nullspace(const CMatrix& m, const Tolerances& tol);

/// Same, with an absolute pivot threshold. Needed when m is a shifted or
/// restricted matrix whose own norm says nothing about the right scale.
RankNullspace rank_and_nullspace_abs(const CMatrix& m, double threshold);

struct LeastSquares {
    CMatrix solution;
    double residual = 0.0;  // 2-norm of A x - b, worst column
    int rank = 0;
};

/// Minimum-norm-flavoured least squares through the same pivoted QR.
LeastSquares least_squares(const CMatrix& a, const CMatrix& b, const Tolerances& tol);

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;  // > 0, gcd(num, den) == 1
};

/// Bounded-denominator rational detection by continued fractions.
/// Returns the reduced p/q with q <= rational_denominator_bound when
/// |x - p/q| <= rational_tol and |Im x| <= rational_tol; absent otherwise.
std::optional<Rational> is_rational(cplx x, const Tolerances& tol);

/// Orthonormalize the columns of m (modified Gram-Schmidt with
/// reorthogonalization), dropping columns whose residual falls below
/// rank_tol relative to the column norm.
CMatrix orthonormalize_columns(const CMatrix& m, const Tolerances& tol);

}  // namespace ldsolv

#include "ldsolv/numeric.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace ldsolv {

CMatrix::CMatrix(int rows, int cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != static_cast<size_t>(rows) * cols)
        throw DimensionMismatch("entry count does not match rows*cols");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    a_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_) throw DimensionMismatch("ragged initializer");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix addition");
    CMatrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix subtraction");
    CMatrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("matrix product");
    CMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const cplx aik = (*this)(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

CMatrix CMatrix::operator*(cplx s) const {
    CMatrix r = *this;
    for (auto& v : r.a_) v *= s;
    return r;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

CMatrix CMatrix::transpose() const {
    CMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

cplx CMatrix::trace() const {
    if (!square()) throw NonSquare();
    cplx t = 0.0;
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

bool CMatrix::finite() const {
    for (const auto& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

CMatrix CMatrix::block(int i0, int j0, int nrows, int ncols) const {
    CMatrix r(nrows, ncols);
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < ncols; ++j) r(i, j) = (*this)(i0 + i, j0 + j);
    return r;
}

void CMatrix::set_block(int i0, int j0, const CMatrix& b) {
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

CMatrix CMatrix::col(int j) const { return block(0, j, rows_, 1); }

void CMatrix::set_col(int j, const CMatrix& v) { set_block(0, j, v); }

double mat_norm1(const CMatrix& m) {
    double best = 0.0;
    for (int j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

double mat_norm_fro(const CMatrix& m) {
    double s = 0.0;
    for (const auto& v : m.entries()) s += std::norm(v);
    return std::sqrt(s);
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

bool approx_eq(cplx a, cplx b, const Tolerances& tol) {
    return std::abs(a - b) <= tol.eq_tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

bool approx_eq(const CMatrix& a, const CMatrix& b, const Tolerances& tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    const double scale = 1.0 + std::max(mat_norm1(a), mat_norm1(b));
    return mat_norm1(a - b) <= tol.eq_tol * scale;
}

// ---------------------------------------------------------------------------
// LU

CMatrix lu_solve(const CMatrix& a, const CMatrix& b) {
    if (!a.square()) throw NonSquare();
    if (a.rows() != b.rows()) throw DimensionMismatch("lu_solve right-hand side");
    const int n = a.rows();
    CMatrix lu = a, x = b;
    std::vector<int> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
        if (std::abs(lu(p, k)) < 1e-300) throw SingularMatrix();
        if (p != k)
            for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
        if (p != k)
            for (int j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(p, j));
        for (int i = k + 1; i < n; ++i) {
            const cplx f = lu(i, k) / lu(k, k);
            lu(i, k) = f;
            for (int j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
            for (int j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
        }
    }
    for (int k = n - 1; k >= 0; --k)
        for (int j = 0; j < x.cols(); ++j) {
            cplx s = x(k, j);
            for (int i = k + 1; i < n; ++i) s -= lu(k, i) * x(i, j);
            x(k, j) = s / lu(k, k);
        }
    return x;
}

CMatrix inverse(const CMatrix& a) { return lu_solve(a, CMatrix::identity(a.rows())); }

// ---------------------------------------------------------------------------
// Eigen solver: Hessenberg reduction + shifted QR, eigenvectors by nullspace.

namespace {

void hessenberg_reduce(CMatrix& h) {
    const int n = h.rows();
    for (int k = 0; k < n - 2; ++k) {
        // Householder on column k, rows k+1..n-1
        double xnorm = 0.0;
        for (int i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm < 1e-300) continue;
        cplx x1 = h(k + 1, k);
        cplx alpha = (std::abs(x1) > 0.0) ? -(x1 / std::abs(x1)) * xnorm : cplx(-xnorm);
        std::vector<cplx> v(n, 0.0);
        for (int i = k + 1; i < n; ++i) v[i] = h(i, k);
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 < 1e-300) continue;
        const double beta = 2.0 / vnorm2;
        // H <- (I - beta v v^H) H
        for (int j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
            s *= beta;
            for (int i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
        }
        // H <- H (I - beta v v^H)
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= beta;
            for (int j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
        }
        for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
        h(k + 1, k) = alpha;
    }
}

struct Givens {
    double c = 1.0;
    cplx s = 0.0;
};

// G^H [a; b] = [r; 0] with G = [[c, s], [-conj(s), c]], c real.
Givens make_givens(cplx a, cplx b, cplx& r) {
    Givens g;
    const double na = std::abs(a), nb = std::abs(b);
    if (nb == 0.0) {
        g.c = 1.0;
        g.s = 0.0;
        r = a;
        return g;
    }
    const double d = std::hypot(na, nb);
    if (na == 0.0) {
        g.c = 0.0;
        g.s = std::conj(b) / nb;
        r = nb;
        return g;
    }
    g.c = na / d;
    g.s = (a / na) * (std::conj(b) / d);
    r = (a / na) * d;
    return g;
}

std::vector<cplx> hessenberg_eigenvalues(CMatrix h, double hnorm) {
    const int n = h.rows();
    std::vector<cplx> eig(n);
    const double eps = 2.0 * DBL_EPSILON;
    int hi = n - 1;
    int iters = 0, window_iters = 0;
    const int max_total = 60 * std::max(n, 1);
    while (hi >= 0) {
        if (hi == 0) {
            eig[0] = h(0, 0);
            break;
        }
        // deflate tiny subdiagonals
        int lo = hi;
        while (lo > 0) {
            double thr = eps * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo)));
            if (thr == 0.0) thr = eps * hnorm;
            if (std::abs(h(lo, lo - 1)) <= thr) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig[hi] = h(hi, hi);
            --hi;
            window_iters = 0;
            continue;
        }
        if (++iters > max_total) throw ConvergenceFailure();
        // Wilkinson shift from the trailing 2x2 of the active window
        const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
        const cplx c = h(hi, hi - 1), d = h(hi, hi);
        cplx sigma;
        if (++window_iters % 12 == 0) {
            sigma = d + 0.75 * std::abs(c);  // exceptional shift against cycling
        } else {
            const cplx tr2 = (a + d) * 0.5;
            const cplx disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
            const cplx l1 = tr2 + disc, l2 = tr2 - disc;
            sigma = (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
        }
        for (int i = lo; i <= hi; ++i) h(i, i) -= sigma;
        std::vector<Givens> rots(hi - lo);
        for (int k = lo; k < hi; ++k) {
            cplx r;
            Givens g = make_givens(h(k, k), h(k + 1, k), r);
            rots[k - lo] = g;
            h(k, k) = r;
            h(k + 1, k) = 0.0;
            for (int j = k + 1; j <= hi; ++j) {
                const cplx t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = g.c * t1 + g.s * t2;
                h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
            }
        }
        for (int k = lo; k < hi; ++k) {
            const Givens& g = rots[k - lo];
            const int top = std::min(k + 1, hi);
            for (int i = lo; i <= top; ++i) {
                const cplx t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = g.c * t1 + std::conj(g.s) * t2;
                h(i, k + 1) = -g.s * t1 + g.c * t2;
            }
        }
        for (int i = lo; i <= hi; ++i) h(i, i) += sigma;
    }
    return eig;
}

bool lex_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// unit 1-norm, first significant component rotated positive-real
void normalize_vector(CMatrix& v) {
    double n1 = 0.0, vmax = 0.0;
    for (int i = 0; i < v.rows(); ++i) {
        n1 += std::abs(v(i, 0));
        vmax = std::max(vmax, std::abs(v(i, 0)));
    }
    if (n1 < 1e-300) return;
    for (int i = 0; i < v.rows(); ++i) {
        if (std::abs(v(i, 0)) > 1e-12 * vmax) {
            const cplx phase = v(i, 0) / std::abs(v(i, 0));
            for (int k = 0; k < v.rows(); ++k) v(k, 0) /= phase * n1;
            return;
        }
    }
}

}  // namespace

EigenDecomposition eigen_decompose(const CMatrix& m, const Tolerances& tol) {
    if (!m.square()) throw NonSquare();
    const int n = m.rows();
    if (n > tol.max_dim) throw SizeExceeded(n, tol.max_dim);
    EigenDecomposition out;
    if (n == 0) return out;
    const double mnorm = mat_norm1(m);

    CMatrix h = m;
    hessenberg_reduce(h);
    out.eigenvalues = hessenberg_eigenvalues(h, std::max(mnorm, 1.0));
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), lex_less);

    // cluster eigenvalues that are not distinct at the active tolerance
    double lmax = 0.0;
    for (const auto& l : out.eigenvalues) lmax = std::max(lmax, std::abs(l));
    const double gap = tol.eq_tol * (1.0 + lmax);
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < n; ++i) {
        bool merged = false;
        for (auto& cl : clusters) {
            for (int j : cl)
                if (std::abs(out.eigenvalues[i] - out.eigenvalues[j]) <= gap) {
                    cl.push_back(i);
                    merged = true;
                    break;
                }
            if (merged) break;
        }
        if (!merged) clusters.push_back({i});
    }

    out.eigenvectors = CMatrix(n, n);
    const double resid_target = tol.rank_tol * std::max(mnorm, 1e-30);
    for (const auto& cl : clusters) {
        cplx mu = 0.0;
        for (int j : cl) mu += out.eigenvalues[j];
        mu /= static_cast<double>(cl.size());
        CMatrix shifted = m;
        for (int i = 0; i < n; ++i) shifted(i, i) -= mu;
        RankNullspace rn = rank_and_nullspace(shifted, tol);
        for (size_t s = 0; s < cl.size(); ++s) {
            CMatrix v;
            if (rn.nullspace.cols() > 0) {
                v = rn.nullspace.col(static_cast<int>(s % rn.nullspace.cols()));
            } else {
                // near-defective: inverse iteration from a fixed seed
                v = CMatrix(n, 1);
                for (int i = 0; i < n; ++i) v(i, 0) = cplx(1.0, 0.37 * (i + 1));
                normalize_vector(v);
            }
            const cplx lam = out.eigenvalues[cl[s]];
            for (int pass = 0; pass < 3; ++pass) {
                CMatrix av = m * v;
                double resid = 0.0, vn = 0.0;
                for (int i = 0; i < n; ++i) {
                    resid += std::abs(av(i, 0) - lam * v(i, 0));
                    vn += std::abs(v(i, 0));
                }
                if (resid <= resid_target * std::max(vn, 1e-30)) break;
                CMatrix pert = m;
                const cplx jitter = (1.0 + mnorm) * 1e-13 * cplx(1.0, 0.5) * double(pass + 1);
                for (int i = 0; i < n; ++i) pert(i, i) -= lam + jitter;
                try {
                    v = lu_solve(pert, v);
                } catch (const SingularMatrix&) {
                    break;
                }
                normalize_vector(v);
            }
            normalize_vector(v);
            out.eigenvectors.set_col(cl[s], v);
        }
    }
    return out;
}

bool pairwise_distinct(const std::vector<cplx>& values, const Tolerances& tol) {
    double lmax = 0.0;
    for (const auto& v : values) lmax = std::max(lmax, std::abs(v));
    const double gap = tol.eq_tol * (1.0 + lmax);
    for (size_t i = 0; i < values.size(); ++i)
        for (size_t j = i + 1; j < values.size(); ++j)
            if (std::abs(values[i] - values[j]) <= gap) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Column-pivoted QR, rank, nullspace, least squares

namespace {

struct Qrcp {
    CMatrix r;                       // upper trapezoidal after elimination
    std::vector<std::vector<cplx>> vs;  // householder vectors
    std::vector<double> betas;
    std::vector<int> perm;           // r column j came from input column perm[j]
    int rank = 0;
    double scale = 0.0;              // largest initial column 2-norm
};

Qrcp qrcp_factor_thr(const CMatrix& a, double thr) {
    const int m = a.rows(), n = a.cols();
    Qrcp f;
    f.r = a;
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), 0);
    const int kmax = std::min(m, n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += std::norm(f.r(i, j));
        f.scale = std::max(f.scale, std::sqrt(s));
    }
    for (int k = 0; k < kmax; ++k) {
        // recompute trailing column norms (sizes are tiny; exactness wins)
        int best = k;
        double bestn = -1.0;
        for (int j = k; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += std::norm(f.r(i, j));
            if (s > bestn) {
                bestn = s;
                best = j;
            }
        }
        if (best != k) {
            for (int i = 0; i < m; ++i) std::swap(f.r(i, k), f.r(i, best));
            std::swap(f.perm[k], f.perm[best]);
        }
        const double colnorm = std::sqrt(std::max(bestn, 0.0));
        if (colnorm <= thr) break;
        cplx x1 = f.r(k, k);
        cplx alpha = (std::abs(x1) > 0.0) ? -(x1 / std::abs(x1)) * colnorm : cplx(-colnorm);
        std::vector<cplx> v(m, 0.0);
        for (int i = k; i < m; ++i) v[i] = f.r(i, k);
        v[k] -= alpha;
        double vnorm2 = 0.0;
        for (int i = k; i < m; ++i) vnorm2 += std::norm(v[i]);
        double beta = 0.0;
        if (vnorm2 > 1e-300) {
            beta = 2.0 / vnorm2;
            for (int j = k; j < n; ++j) {
                cplx s = 0.0;
                for (int i = k; i < m; ++i) s += std::conj(v[i]) * f.r(i, j);
                s *= beta;
                for (int i = k; i < m; ++i) f.r(i, j) -= s * v[i];
            }
        }
        f.r(k, k) = alpha;
        for (int i = k + 1; i < m; ++i) f.r(i, k) = 0.0;
        f.vs.push_back(std::move(v));
        f.betas.push_back(beta);
        f.rank = k + 1;
    }
    return f;
}

Qrcp qrcp_factor(const CMatrix& a, const Tolerances& tol) {
    double scale = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < a.rows(); ++i) s += std::norm(a(i, j));
        scale = std::max(scale, std::sqrt(s));
    }
    return qrcp_factor_thr(a, tol.rank_tol * scale);
}

void apply_qh(const Qrcp& f, CMatrix& b) {
    const int m = b.rows();
    for (size_t k = 0; k < f.vs.size(); ++k) {
        if (f.betas[k] == 0.0) continue;
        for (int j = 0; j < b.cols(); ++j) {
            cplx s = 0.0;
            for (int i = 0; i < m; ++i) s += std::conj(f.vs[k][i]) * b(i, j);
            s *= f.betas[k];
            for (int i = 0; i < m; ++i) b(i, j) -= s * f.vs[k][i];
        }
    }
}

}  // namespace

namespace {

RankNullspace nullspace_from_factor(const Qrcp& f, int n);

}  // namespace

RankNullspace rank_and_nullspace(const CMatrix& m, const Tolerances& tol) {
    if (!m.finite()) throw Error("matrix has non-finite entries");
    return nullspace_from_factor(qrcp_factor(m, tol), m.cols());
}

RankNullspace rank_and_nullspace_abs(const CMatrix& m, double threshold) {
    if (!m.finite()) throw Error("matrix has non-finite entries");
    return nullspace_from_factor(qrcp_factor_thr(m, threshold), m.cols());
}

namespace {

RankNullspace nullspace_from_factor(const Qrcp& f, int n) {
    RankNullspace out;
    out.rank = f.rank;
    const int nul = n - f.rank;
    out.nullspace = CMatrix(n, nul);
    for (int t = 0; t < nul; ++t) {
        const int j = f.rank + t;
        // solve R11 w = -R12 e_t by back substitution
        std::vector<cplx> w(f.rank, 0.0);
        for (int i = f.rank - 1; i >= 0; --i) {
            cplx s = -f.r(i, j);
            for (int k = i + 1; k < f.rank; ++k) s -= f.r(i, k) * w[k];
            w[i] = s / f.r(i, i);
        }
        CMatrix v(n, 1);
        for (int i = 0; i < f.rank; ++i) v(f.perm[i], 0) = w[i];
        v(f.perm[j], 0) = 1.0;
        normalize_vector(v);
        out.nullspace.set_col(t, v);
    }
    return out;
}

}  // namespace

LeastSquares least_squares(const CMatrix& a, const CMatrix& b, const Tolerances& tol) {
    if (a.rows() != b.rows()) throw DimensionMismatch("least_squares right-hand side");
    Qrcp f = qrcp_factor(a, tol);
    LeastSquares out;
    out.rank = f.rank;
    CMatrix qb = b;
    apply_qh(f, qb);
    out.solution = CMatrix(a.cols(), b.cols());
    for (int j = 0; j < b.cols(); ++j) {
        std::vector<cplx> w(f.rank, 0.0);
        for (int i = f.rank - 1; i >= 0; --i) {
            cplx s = qb(i, j);
            for (int k = i + 1; k < f.rank; ++k) s -= f.r(i, k) * w[k];
            w[i] = s / f.r(i, i);
        }
        for (int i = 0; i < f.rank; ++i) out.solution(f.perm[i], j) = w[i];
    }
    // residual from scratch, worst column 2-norm
    CMatrix res = a * out.solution - b;
    double worst = 0.0;
    for (int j = 0; j < res.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < res.rows(); ++i) s += std::norm(res(i, j));
        worst = std::max(worst, std::sqrt(s));
    }
    out.residual = worst;
    return out;
}

CMatrix orthonormalize_columns(const CMatrix& m, const Tolerances& tol) {
    const int rows = m.rows();
    std::vector<std::vector<cplx>> q;
    for (int j = 0; j < m.cols(); ++j) {
        std::vector<cplx> v(rows);
        double orig = 0.0;
        for (int i = 0; i < rows; ++i) {
            v[i] = m(i, j);
            orig += std::norm(v[i]);
        }
        orig = std::sqrt(orig);
        if (orig < 1e-300) continue;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : q) {
                cplx dot = 0.0;
                for (int i = 0; i < rows; ++i) dot += std::conj(u[i]) * v[i];
                for (int i = 0; i < rows; ++i) v[i] -= dot * u[i];
            }
        double vn = 0.0;
        for (int i = 0; i < rows; ++i) vn += std::norm(v[i]);
        vn = std::sqrt(vn);
        if (vn <= std::max(tol.rank_tol * orig, 1e-300)) continue;
        for (int i = 0; i < rows; ++i) v[i] /= vn;
        q.push_back(std::move(v));
    }
    CMatrix out(rows, static_cast<int>(q.size()));
    for (int j = 0; j < out.cols(); ++j)
        for (int i = 0; i < rows; ++i) out(i, j) = q[j][i];
    return out;
}

// ---------------------------------------------------------------------------
// Rational detection by continued fractions

namespace {

std::optional<Rational> reduced(std::int64_t p, std::int64_t q) {
    if (q < 0) {
        p = -p;
        q = -q;
    }
    std::int64_t g = std::gcd(p < 0 ? -p : p, q);
    if (g > 1) {
        p /= g;
        q /= g;
    }
    return Rational{p, q};
}

bool within(double x, std::int64_t p, std::int64_t q, double tol) {
    return std::abs(x - static_cast<double>(p) / static_cast<double>(q)) <= tol;
}

}  // namespace

std::optional<Rational> is_rational(cplx x, const Tolerances& tol) {
    if (std::abs(x.imag()) > tol.rational_tol) return std::nullopt;
    const double xr = x.real();
    if (!std::isfinite(xr) || std::abs(xr) > 4.5e15) return std::nullopt;
    const std::int64_t bound = std::max<std::int64_t>(tol.rational_denominator_bound, 1);

    // convergents p_k/q_k; the first one inside the tolerance has the
    // smallest denominator among all candidates
    std::int64_t pk1 = 1, qk1 = 0;  // p_{-1}, q_{-1}
    std::int64_t pk = static_cast<std::int64_t>(std::floor(xr)), qk = 1;
    if (within(xr, pk, qk, tol.rational_tol)) return reduced(pk, qk);
    double frac = xr - std::floor(xr);
    for (int it = 0; it < 64; ++it) {
        if (frac < 1e-18) break;
        const double y = 1.0 / frac;
        if (y > 9.2e18) break;
        std::int64_t a = static_cast<std::int64_t>(std::floor(y));
        if (a < 1) a = 1;
        // next convergent would be a*qk + qk1; clamp to the bound with a
        // final semiconvergent if it overshoots
        if (a > (bound - qk1) / std::max<std::int64_t>(qk, 1) || a * qk + qk1 > bound) {
            const std::int64_t amax = (bound - qk1) / std::max<std::int64_t>(qk, 1);
            if (amax >= 1) {
                const std::int64_t ps = amax * pk + pk1, qs = amax * qk + qk1;
                if (within(xr, ps, qs, tol.rational_tol)) return reduced(ps, qs);
            }
            return std::nullopt;
        }
        const std::int64_t pn = a * pk + pk1, qn = a * qk + qk1;
        if (within(xr, pn, qn, tol.rational_tol)) return reduced(pn, qn);
        pk1 = pk;
        qk1 = qk;
        pk = pn;
        qk = qn;
        frac = y - std::floor(y);
    }
    return std::nullopt;
}

}  // namespace ldsolv

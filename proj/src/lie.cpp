#include "ldsolv/lie.hpp"

#include <algorithm>
#include <cmath>

namespace ldsolv {

namespace {

std::vector<cplx> vectorize(const CMatrix& m) { return m.entries(); }

double vec_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

/// Incremental orthonormal frame over vectorized matrices.
struct Frame {
    std::vector<std::vector<cplx>> q;

    // residual of v after projection (two passes), in place
    double project_out(std::vector<cplx>& v) const {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : q) {
                cplx dot = 0.0;
                for (size_t i = 0; i < v.size(); ++i) dot += std::conj(u[i]) * v[i];
                for (size_t i = 0; i < v.size(); ++i) v[i] -= dot * u[i];
            }
        return vec_norm(v);
    }

    void push(std::vector<cplx> v, double norm) {
        for (auto& x : v) x /= norm;
        q.push_back(std::move(v));
    }
};

bool lex_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

/// Deterministic clustering of eigenvalues at the distinctness gap;
/// representatives sorted by (re, im).
std::vector<std::pair<cplx, int>> eigenvalue_clusters(const std::vector<cplx>& vals,
                                                      const Tolerances& tol) {
    double lmax = 0.0;
    for (const auto& v : vals) lmax = std::max(lmax, std::abs(v));
    const double gap = tol.eq_tol * (1.0 + lmax);
    std::vector<std::pair<cplx, int>> clusters;  // (mean, count)
    std::vector<cplx> sorted = vals;
    std::sort(sorted.begin(), sorted.end(), lex_less);
    for (const auto& v : sorted) {
        bool merged = false;
        for (auto& [rep, cnt] : clusters) {
            if (std::abs(v - rep) <= gap) {
                rep = (rep * static_cast<double>(cnt) + v) / static_cast<double>(cnt + 1);
                ++cnt;
                merged = true;
                break;
            }
        }
        if (!merged) clusters.emplace_back(v, 1);
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
    return clusters;
}

struct SpanBuilder {
    Frame frame;
    std::vector<CMatrix> basis;  // Frobenius-normalized accepted elements
    double max_raw_norm = 0.0;

    bool try_add(const CMatrix& m, const Tolerances& tol) {
        std::vector<cplx> v = vectorize(m);
        const double raw = vec_norm(v);
        const double floor_scale = std::max({max_raw_norm, raw, 1.0});
        const double res = frame.project_out(v);
        if (res <= tol.rank_tol * floor_scale) return false;
        frame.push(std::move(v), res);
        basis.push_back(m * cplx(1.0 / mat_norm_fro(m)));
        max_raw_norm = std::max(max_raw_norm, raw);
        return true;
    }
};

}  // namespace

double LieBasis::span_residual(const CMatrix& m) const {
    std::vector<cplx> v = m.entries();
    const double n0 = vec_norm(v);
    if (n0 == 0.0) return 0.0;
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& u : qvecs) {
            cplx dot = 0.0;
            for (size_t i = 0; i < v.size(); ++i) dot += std::conj(u[i]) * v[i];
            for (size_t i = 0; i < v.size(); ++i) v[i] -= dot * u[i];
        }
    return vec_norm(v) / n0;
}

LieBasis lie_closure(const std::vector<CMatrix>& gens, const Tolerances& tol) {
    LieBasis out;
    out.generators = gens;
    if (gens.empty()) {
        out.closed = true;
        return out;
    }
    const int p = gens.front().rows();
    for (const auto& g : gens)
        if (!g.square() || g.rows() != p) throw SizeMismatch();
    if (p > tol.max_dim) throw SizeExceeded(p, tol.max_dim);

    SpanBuilder sb;
    for (const auto& g : gens) sb.try_add(g, tol);
    // adjoin rank-increasing brackets until no pair produces a new direction
    size_t done = 0;  // every pair (i, j) with j < done has been bracketed
    while (done < sb.basis.size()) {
        const size_t j = done++;
        for (size_t i = 0; i < j; ++i) {
            sb.try_add(commutator(sb.basis[i], sb.basis[j]), tol);
            if (sb.basis.size() >= static_cast<size_t>(p) * p) break;
        }
    }
    out.basis = std::move(sb.basis);
    out.qvecs = std::move(sb.frame.q);
    out.dim = static_cast<int>(out.basis.size());
    out.max_raw_norm = sb.max_raw_norm;
    out.closed = true;
    return out;
}

DerivedSeriesResult derived_series_solvable(const LieBasis& lb, const Tolerances& tol) {
    if (!lb.closed) throw NotClosed();
    DerivedSeriesResult out;
    std::vector<CMatrix> current = lb.basis;
    out.series_dims.push_back(static_cast<int>(current.size()));
    const int p = current.empty() ? 0 : current.front().rows();
    const int guard = std::max(1, p * p + 1);
    for (int step = 0; step < guard; ++step) {
        SpanBuilder next;
        for (size_t j = 0; j < current.size(); ++j)
            for (size_t i = 0; i < j; ++i) next.try_add(commutator(current[i], current[j]), tol);
        out.series_dims.push_back(static_cast<int>(next.basis.size()));
        if (next.basis.empty()) {
            out.solvable = true;
            return out;
        }
        if (next.basis.size() >= current.size()) {
            out.solvable = false;  // stabilized at a perfect subalgebra
            return out;
        }
        current = std::move(next.basis);
    }
    out.solvable = false;
    return out;
}

namespace {

std::vector<CMatrix> derived_basis(const LieBasis& lb, const Tolerances& tol) {
    SpanBuilder d;
    for (size_t j = 0; j < lb.basis.size(); ++j)
        for (size_t i = 0; i < j; ++i) d.try_add(commutator(lb.basis[i], lb.basis[j]), tol);
    return d.basis;
}

}  // namespace

CartanResult cartan_solvable(const LieBasis& lb, const Tolerances& tol) {
    if (!lb.closed) throw NotClosed();
    CartanResult out;
    const std::vector<CMatrix> derived = derived_basis(lb, tol);
    double umax = 0.0, vmax = 0.0;
    for (const auto& u : lb.basis) umax = std::max(umax, mat_norm1(u));
    for (const auto& v : derived) vmax = std::max(vmax, mat_norm1(v));
    for (const auto& u : lb.basis)
        for (const auto& v : derived)
            out.max_pairing = std::max(out.max_pairing, std::abs((u * v).trace()));
    out.solvable = out.max_pairing <= tol.eq_tol * std::max(1.0, umax * vmax);
    return out;
}

CartanResult cartan_solvable_ad(const LieBasis& lb, const Tolerances& tol) {
    if (!lb.closed) throw NotClosed();
    CartanResult out;
    const int dim = lb.dim;
    if (dim == 0) {
        out.solvable = true;
        return out;
    }
    // coordinates in the orthonormal frame; basis change is invertible so
    // vanishing of the form is unaffected
    const size_t nn = lb.qvecs.front().size();
    auto coords = [&](const CMatrix& m) {
        std::vector<cplx> c(dim, 0.0);
        const auto& v = m.entries();
        for (int k = 0; k < dim; ++k) {
            cplx dot = 0.0;
            for (size_t i = 0; i < nn; ++i) dot += std::conj(lb.qvecs[k][i]) * v[i];
            c[k] = dot;
        }
        return c;
    };
    // ad of each q-frame element as a dim x dim matrix
    std::vector<CMatrix> ad(dim);
    std::vector<CMatrix> qmats(dim);
    const int p = lb.basis.front().rows();
    for (int k = 0; k < dim; ++k) {
        std::vector<cplx> qv(lb.qvecs[k].begin(), lb.qvecs[k].end());
        qmats[k] = CMatrix(p, p, std::move(qv));
    }
    for (int k = 0; k < dim; ++k) {
        ad[k] = CMatrix(dim, dim);
        for (int j = 0; j < dim; ++j) {
            const std::vector<cplx> c = coords(commutator(qmats[k], qmats[j]));
            for (int i = 0; i < dim; ++i) ad[k](i, j) = c[i];
        }
    }
    const std::vector<CMatrix> derived = derived_basis(lb, tol);
    double umax = 0.0, vmax = 0.0;
    for (const auto& u : qmats) umax = std::max(umax, mat_norm1(u));
    for (const auto& v : derived) {
        // ad(v) from linearity over the frame coordinates
        const std::vector<cplx> c = coords(v);
        CMatrix adv(dim, dim);
        for (int k = 0; k < dim; ++k) adv += ad[k] * c[k];
        vmax = std::max(vmax, mat_norm1(v));
        for (int k = 0; k < dim; ++k) {
            const double f = std::abs((ad[k] * adv).trace());
            out.max_pairing = std::max(out.max_pairing, f);
        }
    }
    // ad matrices scale like dim * |u|, fold that into the comparison scale
    const double adscale = std::max(1.0, static_cast<double>(dim) * umax * vmax);
    out.solvable = out.max_pairing <= 1e2 * tol.eq_tol * adscale;
    return out;
}

double cartan_pairing_indicator(const LieBasis& lb, const Tolerances& tol) {
    const std::vector<CMatrix> derived = derived_basis(lb, tol);
    double worst = 0.0;
    for (const auto& u : lb.basis)
        for (const auto& v : derived) {
            const double nu = mat_norm1(u), nv = mat_norm1(v);
            if (nu == 0.0 || nv == 0.0) continue;
            worst = std::max(worst, std::abs((u * v).trace()) / (nu * nv));
        }
    return worst;
}

// ---------------------------------------------------------------------------
// Common eigenvector and the witnesses built on it

namespace {

struct EigSearch {
    const std::vector<CMatrix>& ms;
    const Tolerances& tol;
    long nodes = 0;

    std::optional<CMatrix> descend(const CMatrix& w, size_t idx) {
        if (++nodes > 200000) return std::nullopt;
        if (idx == ms.size()) return w.col(0);
        const CMatrix& m = ms[idx];
        const CMatrix s = w.adjoint() * (m * w);  // restriction, w orthonormal
        EigenDecomposition ed = eigen_decompose(s, tol);
        const double mscale = std::max(1.0, mat_norm1(m));
        for (const auto& [mu, cnt] : eigenvalue_clusters(ed.eigenvalues, tol)) {
            CMatrix shifted = m * w;
            for (int i = 0; i < w.rows(); ++i)
                for (int j = 0; j < w.cols(); ++j) shifted(i, j) -= mu * w(i, j);
            RankNullspace rn = rank_and_nullspace_abs(shifted, tol.rank_tol * mscale);
            if (rn.nullspace.cols() == 0) continue;
            CMatrix refined = orthonormalize_columns(w * rn.nullspace, tol);
            if (refined.cols() == 0) continue;
            if (auto r = descend(refined, idx + 1)) return r;
        }
        return std::nullopt;
    }
};

void normalize_unit1(CMatrix& v) {
    double n1 = 0.0, vmax = 0.0;
    for (int i = 0; i < v.rows(); ++i) {
        n1 += std::abs(v(i, 0));
        vmax = std::max(vmax, std::abs(v(i, 0)));
    }
    if (n1 == 0.0) return;
    for (int i = 0; i < v.rows(); ++i) {
        if (std::abs(v(i, 0)) > 1e-12 * vmax) {
            const cplx phase = v(i, 0) / std::abs(v(i, 0));
            for (int k = 0; k < v.rows(); ++k) v(k, 0) /= phase * n1;
            return;
        }
    }
}

bool common_eigenvector_residual_ok(const std::vector<CMatrix>& ms, const CMatrix& v,
                                    const Tolerances& tol) {
    double v2 = 0.0, v1 = 0.0;
    for (int i = 0; i < v.rows(); ++i) {
        v2 += std::norm(v(i, 0));
        v1 += std::abs(v(i, 0));
    }
    for (const auto& m : ms) {
        const CMatrix mv = m * v;
        cplx mu = 0.0;
        for (int i = 0; i < v.rows(); ++i) mu += std::conj(v(i, 0)) * mv(i, 0);
        mu /= v2;
        double resid = 0.0;
        for (int i = 0; i < v.rows(); ++i) resid += std::abs(mv(i, 0) - mu * v(i, 0));
        if (resid > 1e2 * tol.rank_tol * (1.0 + mat_norm1(m)) * v1) return false;
    }
    return true;
}

}  // namespace

std::optional<CMatrix> common_eigenvector(const std::vector<CMatrix>& ms, const Tolerances& tol) {
    if (ms.empty()) return std::nullopt;
    const int p = ms.front().rows();
    for (const auto& m : ms)
        if (!m.square() || m.rows() != p) throw SizeMismatch();
    EigSearch search{ms, tol, 0};
    auto r = search.descend(CMatrix::identity(p), 0);
    if (!r) return std::nullopt;
    CMatrix v = *r;
    normalize_unit1(v);
    if (!common_eigenvector_residual_ok(ms, v, tol)) return std::nullopt;
    return v;
}

namespace {

/// Unitary basis completion of v: v first, then the standard vectors in
/// index order with the most collinear one dropped, Gram-Schmidt applied.
std::pair<CMatrix, int> complete_basis(const CMatrix& v) {
    const int p = v.rows();
    CMatrix q(p, p);
    double v2 = 0.0;
    for (int i = 0; i < p; ++i) v2 += std::norm(v(i, 0));
    v2 = std::sqrt(v2);
    for (int i = 0; i < p; ++i) q(i, 0) = v(i, 0) / v2;
    int drop = 0;
    double best = -1.0;
    for (int i = 0; i < p; ++i)
        if (std::abs(v(i, 0)) > best) {
            best = std::abs(v(i, 0));
            drop = i;
        }
    int col = 1;
    for (int e = 0; e < p; ++e) {
        if (e == drop) continue;
        std::vector<cplx> w(p, 0.0);
        w[e] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (int c = 0; c < col; ++c) {
                cplx dot = 0.0;
                for (int i = 0; i < p; ++i) dot += std::conj(q(i, c)) * w[i];
                for (int i = 0; i < p; ++i) w[i] -= dot * q(i, c);
            }
        double wn = 0.0;
        for (int i = 0; i < p; ++i) wn += std::norm(w[i]);
        wn = std::sqrt(wn);
        for (int i = 0; i < p; ++i) q(i, col) = w[i] / wn;
        ++col;
    }
    return {q, drop};
}

}  // namespace

bool verify_triangular_witness(const std::vector<CMatrix>& ms, const CMatrix& p,
                               const Tolerances& tol) {
    CMatrix pinv;
    try {
        pinv = inverse(p);
    } catch (const SingularMatrix&) {
        return false;
    }
    const double cond = mat_norm1(p) * mat_norm1(pinv);
    for (const auto& m : ms) {
        const CMatrix t = pinv * m * p;
        const double thr = 1e2 * tol.rank_tol * (1.0 + mat_norm1(m)) * std::max(1.0, cond);
        for (int i = 0; i < t.rows(); ++i)
            for (int j = 0; j < i; ++j)
                if (std::abs(t(i, j)) > thr) return false;
    }
    return true;
}

std::optional<TriangularWitness> simultaneous_triangularize(const std::vector<CMatrix>& ms,
                                                            const Tolerances& tol) {
    if (ms.empty()) return std::nullopt;
    const int p = ms.front().rows();
    for (const auto& m : ms)
        if (!m.square() || m.rows() != p) throw SizeMismatch();

    TriangularWitness w;
    w.p_matrix = CMatrix::identity(p);
    std::vector<CMatrix> work = ms;
    for (int level = 0; level + 1 < p; ++level) {
        const int d = p - level;
        std::vector<CMatrix> blocks;
        blocks.reserve(work.size());
        for (const auto& m : work) blocks.push_back(m.block(level, level, d, d));
        auto v = common_eigenvector(blocks, tol);
        if (!v) return std::nullopt;
        auto [qsub, dropped] = complete_basis(*v);
        w.flag_order.push_back(dropped);
        CMatrix q = CMatrix::identity(p);
        q.set_block(level, level, qsub);
        const CMatrix qh = q.adjoint();
        for (auto& m : work) m = qh * m * q;
        w.p_matrix = w.p_matrix * q;
    }
    if (!verify_triangular_witness(ms, w.p_matrix, tol)) return std::nullopt;
    return w;
}

bool verify_diagonal_witness(const std::vector<CMatrix>& ms, const CMatrix& c,
                             const Tolerances& tol) {
    CMatrix cinv;
    try {
        cinv = inverse(c);
    } catch (const SingularMatrix&) {
        return false;
    }
    const double cond = mat_norm1(c) * mat_norm1(cinv);
    for (const auto& m : ms) {
        const CMatrix d = c * m * cinv;
        const double thr = 1e2 * tol.rank_tol * (1.0 + mat_norm1(m)) * std::max(1.0, cond);
        for (int i = 0; i < d.rows(); ++i)
            for (int j = 0; j < d.cols(); ++j)
                if (i != j && std::abs(d(i, j)) > thr) return false;
    }
    return true;
}

std::optional<CMatrix> simultaneous_diagonalize(const std::vector<CMatrix>& ms,
                                                const Tolerances& tol) {
    if (ms.empty()) return std::nullopt;
    const int p = ms.front().rows();
    for (const auto& m : ms)
        if (!m.square() || m.rows() != p) throw SizeMismatch();
    for (size_t i = 0; i < ms.size(); ++i)
        for (size_t j = i + 1; j < ms.size(); ++j) {
            const double scale = std::max(1.0, mat_norm1(ms[i]) * mat_norm1(ms[j]));
            if (mat_norm1(commutator(ms[i], ms[j])) > tol.eq_tol * scale) return std::nullopt;
        }

    // simultaneous eigenspace refinement over the commuting family
    std::vector<CMatrix> blocks = {CMatrix::identity(p)};
    for (const auto& m : ms) {
        std::vector<CMatrix> next;
        for (const auto& w : blocks) {
            const int d = w.cols();
            if (d == 1) {
                next.push_back(w);
                continue;
            }
            const CMatrix s = w.adjoint() * (m * w);
            EigenDecomposition ed = eigen_decompose(s, tol);
            int found = 0;
            const double mscale = std::max(1.0, mat_norm1(m));
            for (const auto& [mu, cnt] : eigenvalue_clusters(ed.eigenvalues, tol)) {
                CMatrix shifted = s;
                for (int i = 0; i < d; ++i) shifted(i, i) -= mu;
                RankNullspace rn = rank_and_nullspace_abs(shifted, tol.rank_tol * mscale);
                if (rn.nullspace.cols() == 0) return std::nullopt;  // defective
                CMatrix sub = orthonormalize_columns(w * rn.nullspace, tol);
                found += sub.cols();
                next.push_back(std::move(sub));
            }
            if (found != d) return std::nullopt;
        }
        blocks = std::move(next);
    }
    CMatrix v(p, p);
    int col = 0;
    for (const auto& w : blocks)
        for (int j = 0; j < w.cols(); ++j) v.set_col(col++, w.col(j));
    if (col != p) return std::nullopt;
    CMatrix c;
    try {
        c = inverse(v);
    } catch (const SingularMatrix&) {
        return std::nullopt;
    }
    if (!verify_diagonal_witness(ms, c, tol)) return std::nullopt;
    return c;
}

}  // namespace ldsolv

#include "ldsolv/splitting.hpp"

#include <cmath>
#include <limits>

namespace ldsolv {

namespace {

/// Diagonalize the leading term and run the order-by-order recursion on
/// the given coefficient list (index k holds B^(k); missing indices are
/// zero).
LocalFormalData run_recursion(const std::vector<CMatrix>& coeffs, int rank, int order,
                              const Tolerances& tol) {
    if (rank < 1) throw ResonantPoint();
    if (order < rank) order = rank;
    const CMatrix& leading = coeffs.front();
    const int p = leading.rows();

    EigenDecomposition ed = eigen_decompose(leading, tol);
    if (!pairwise_distinct(ed.eigenvalues, tol)) throw ResonantPoint();
    const std::vector<cplx>& alpha = ed.eigenvalues;
    const CMatrix& v = ed.eigenvectors;
    const CMatrix vinv = inverse(v);

    // coefficients in the eigenbasis, zero-padded through the requested order
    std::vector<CMatrix> b(order + 1, CMatrix::zero(p, p));
    for (size_t k = 0; k < coeffs.size() && static_cast<int>(k) <= order; ++k)
        b[k] = vinv * coeffs[k] * v;

    LocalFormalData out;
    out.leading_eigenvalues = alpha;
    out.leading_eigvecs = v;
    out.order = order;

    std::vector<CMatrix> a(order + 1, CMatrix::zero(p, p));
    std::vector<CMatrix> t(order + 1, CMatrix::zero(p, p));
    for (int j = 0; j < p; ++j) a[0](j, j) = alpha[j];

    double scale = 1.0;
    for (const auto& m : coeffs) scale = std::max(scale, mat_norm1(m));

    for (int k = 1; k <= order; ++k) {
        CMatrix h = CMatrix::zero(p, p);
        for (int l = 1; l <= k - 1; ++l) h += t[l] * a[k - l] - b[k - l] * t[l];
        if (k - rank >= 1) h += t[k - rank] * static_cast<double>(k - rank);
        for (int j = 0; j < p; ++j) a[k](j, j) = b[k](j, j) - h(j, j);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                if (i == j) continue;
                t[k](i, j) = (b[k](i, j) - h(i, j)) / (alpha[j] - alpha[i]);
            }
        if (mat_norm1(t[k]) > tol.divergence_cap * scale) throw DivergenceGuard(k);
    }

    out.exponents.resize(p);
    for (int j = 0; j < p; ++j) out.exponents[j] = a[rank](j, j);
    out.q_coeffs.assign(a.begin(), a.begin() + rank);
    out.a_series.assign(a.begin() + 1, a.end());
    out.t_series.assign(t.begin() + 1, t.end());
    return out;
}

}  // namespace

LocalFormalData split(const SingularPoint& s, int order, const Tolerances& tol) {
    return run_recursion(s.coeffs, s.poincare_rank, order, tol);
}

LocalFormalData split_in_system(const LinearSystem& sys, size_t point_index, int order,
                                const Tolerances& tol) {
    const SingularPoint& pt = sys.points.at(point_index);
    const int eff = std::max(order, pt.poincare_rank);
    return run_recursion(local_coefficients(sys, point_index, eff), pt.poincare_rank, eff, tol);
}

std::vector<cplx> fuchsian_exponents(const SingularPoint& s, const Tolerances& tol) {
    if (s.poincare_rank != 0) throw NotFuchsian();
    return eigen_decompose(s.residue(), tol).eigenvalues;
}

std::vector<double> pk_polynomial(int k) {
    if (k < 1) throw Error("pk_polynomial requires k >= 1");
    // P_1 = 2x;  P_k = 2kx + sum_{l=2..k} 3x P_{l-1} + sum_{l=2..k-1} x P_{l-1} P_{k-l}
    std::vector<std::vector<double>> p(k + 1);
    p[1] = {0.0, 2.0};
    for (int m = 2; m <= k; ++m) {
        std::vector<double> c(m + 1, 0.0);
        c[1] = 2.0 * m;
        for (int l = 2; l <= m; ++l)
            for (size_t i = 1; i < p[l - 1].size(); ++i) c[i + 1] += 3.0 * p[l - 1][i];
        for (int l = 2; l <= m - 1; ++l)
            for (size_t i = 1; i < p[l - 1].size(); ++i)
                for (size_t j = 1; j < p[m - l].size(); ++j)
                    c[i + j + 1] += p[l - 1][i] * p[m - l][j];
        p[m] = std::move(c);
    }
    return p[k];
}

double pk_evaluate(int k, double x) {
    if (k <= 0) return 0.0;  // P_0 == 0
    const std::vector<double> c = pk_polynomial(k);
    double v = 0.0;
    for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

ExponentBound exponent_bound(const SingularPoint& s, const Tolerances& tol) {
    const int r = s.poincare_rank;
    if (r < 1) throw ResonantPoint();
    EigenDecomposition ed = eigen_decompose(s.leading(), tol);
    if (!pairwise_distinct(ed.eigenvalues, tol)) throw ResonantPoint();
    const CMatrix vinv = inverse(ed.eigenvectors);

    ExponentBound out;
    out.rho = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < ed.eigenvalues.size(); ++i)
        for (size_t j = i + 1; j < ed.eigenvalues.size(); ++j)
            out.rho = std::min(out.rho, std::abs(ed.eigenvalues[i] - ed.eigenvalues[j]));
    for (int k = 1; k <= r && k < static_cast<int>(s.coeffs.size()); ++k)
        out.delta = std::max(out.delta, mat_norm1(vinv * s.coeffs[k] * ed.eigenvectors));
    out.bound = out.delta * (1.0 + pk_evaluate(r - 1, out.delta / out.rho));
    return out;
}

}  // namespace ldsolv

#pragma once

#include <vector>

#include "ldsolv/system.hpp"

namespace ldsolv {

/// Output of the order-by-order diagonalizing gauge transformation at a
/// non-resonant irregular point.
struct LocalFormalData {
    std::vector<cplx> leading_eigenvalues;  // alpha^j, sorted by (re, im)
    std::vector<cplx> exponents;            // lambda^j, paired with alpha^j
    std::vector<CMatrix> q_coeffs;          // A^(0) .. A^(r-1), diagonal
    std::vector<CMatrix> t_series;          // T^(1) .. T^(K), zero diagonal
    std::vector<CMatrix> a_series;          // A^(1) .. A^(K), diagonal
    CMatrix leading_eigvecs;                // columns diagonalize B^(0)
    int order = 0;                          // K
};

/// Smallness certificate for the formal exponents at one irregular point.
struct ExponentBound {
    double delta = 0.0;  // max norm of the non-leading principal coefficients
    double rho = 0.0;    // min pairwise gap of the leading eigenvalues
    double bound = 0.0;  // delta * (1 + P_{r-1}(delta/rho))
};

/// Run the diagonalizing recursion up to order K >= r. Coefficients past
/// the given list are taken as zero (local principal part only).
LocalFormalData split(const SingularPoint& s, int order, const Tolerances& tol);

/// Same recursion, but with the higher-order coefficients of the point's
/// local expansion filled in from the rest of the system.
LocalFormalData split_in_system(const LinearSystem& sys, size_t point_index, int order,
                                const Tolerances& tol);

/// Exponents at a Fuchsian point: eigenvalues of the residue matrix.
std::vector<cplx> fuchsian_exponents(const SingularPoint& s, const Tolerances& tol);

/// Coefficients (ascending, constant term zero) of the majorant
/// polynomial P_k from the norm recursion; P_1 = 2x.
std::vector<double> pk_polynomial(int k);

double pk_evaluate(int k, double x);

ExponentBound exponent_bound(const SingularPoint& s, const Tolerances& tol);

}  // namespace ldsolv

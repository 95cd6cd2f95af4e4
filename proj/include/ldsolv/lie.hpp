#pragma once

#include <optional>
#include <vector>

#include "ldsolv/numeric.hpp"

namespace ldsolv {

/// Independent spanning set of the matrix Lie algebra generated by a
/// finite set. Basis elements are Frobenius-normalized; qvecs is the
/// orthonormal frame used for membership tests (closure metadata).
struct LieBasis {
    std::vector<CMatrix> generators;
    std::vector<CMatrix> basis;
    std::vector<std::vector<cplx>> qvecs;
    int dim = 0;
    bool closed = false;
    double max_raw_norm = 0.0;  // largest unnormalized norm seen while closing

    /// Frobenius norm of M minus its projection onto span(basis),
    /// divided by the Frobenius norm of M (0 for the zero matrix).
    double span_residual(const CMatrix& m) const;
};

LieBasis lie_closure(const std::vector<CMatrix>& gens, const Tolerances& tol);

struct DerivedSeriesResult {
    bool solvable = false;
    std::vector<int> series_dims;  // dims of g, [g,g], ... until stabilization
};

DerivedSeriesResult derived_series_solvable(const LieBasis& lb, const Tolerances& tol);

struct CartanResult {
    bool solvable = false;
    double max_pairing = 0.0;  // max |Tr(u v)| over basis u of g, v of [g,g]
};

/// Trace-form solvability test: zero pairing of g with its derived
/// algebra.
CartanResult cartan_solvable(const LieBasis& lb, const Tolerances& tol);

/// Same criterion through the adjoint representation (K(u,v) =
/// Tr(ad u ad v)); kept as an independent cross-check.
CartanResult cartan_solvable_ad(const LieBasis& lb, const Tolerances& tol);

/// Scale-free sweep indicator: max |Tr(u v)| / (|u|_1 |v|_1).
double cartan_pairing_indicator(const LieBasis& lb, const Tolerances& tol);

/// A vector v with M v parallel to v for every matrix in ms, found by
/// backtracking over eigenvalue branches with subspace refinement.
std::optional<CMatrix> common_eigenvector(const std::vector<CMatrix>& ms, const Tolerances& tol);

struct TriangularWitness {
    CMatrix p_matrix;             // invertible; P^-1 M P upper triangular
    std::vector<int> flag_order;  // per level, index of the basis vector replaced
};

std::optional<TriangularWitness> simultaneous_triangularize(const std::vector<CMatrix>& ms,
                                                            const Tolerances& tol);

/// Witness C with every C M C^-1 diagonal; present iff the matrices
/// pairwise commute and each is diagonalizable.
std::optional<CMatrix> simultaneous_diagonalize(const std::vector<CMatrix>& ms,
                                                const Tolerances& tol);

/// Independent verification helpers (re-multiply from scratch).
bool verify_triangular_witness(const std::vector<CMatrix>& ms, const CMatrix& p,
                               const Tolerances& tol);
bool verify_diagonal_witness(const std::vector<CMatrix>& ms, const CMatrix& c,
                             const Tolerances& tol);

}  // namespace ldsolv

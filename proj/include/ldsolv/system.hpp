#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ldsolv/numeric.hpp"

namespace ldsolv {

/// Either a finite complex location or the point at infinity.
struct PointLocation {
    bool at_infinity = false;
    cplx value{};

    static PointLocation infinity() { return {true, cplx{}}; }
    static PointLocation finite(cplx a) { return {false, a}; }
    std::string str() const;
};

/// One singular point with its principal-part data.
///
/// Finite point of Poincare rank r: coeffs = [B0, ..., Br], leading term
/// first, so the local coefficient matrix is
///   (B0 + B1 (z-a) + ... + Br (z-a)^r) / (z-a)^(r+1).
/// A point at infinity uses the local variable t = 1/z and stores its
/// principal part in that chart with the same convention.
struct SingularPoint {
    PointLocation location;
    int poincare_rank = 0;
    std::vector<CMatrix> coeffs;

    const CMatrix& leading() const { return coeffs.front(); }
    const CMatrix& residue() const { return coeffs.back(); }
};

enum class PointClass { FUCHSIAN, IRREGULAR_NONRESONANT, IRREGULAR_RESONANT };

std::string to_string(PointClass c);

/// A linear differential system in partial-fraction form, fully numeric
/// (parameters bound at ingestion).
struct LinearSystem {
    int dimension = 0;
    std::vector<SingularPoint> points;
    std::map<std::string, cplx> parameters;
    /// Optional entire part of the coefficient matrix, coefficients of
    /// z^0, z^1, ... ; nonempty only when infinity is an irregular
    /// singular point given in the z chart.
    std::vector<CMatrix> polynomial_part;
    bool infinity_regular = true;

    bool has_explicit_infinity_point() const;
    /// Sum of the residue matrices of the finite points.
    CMatrix finite_residue_sum() const;
};

PointClass classify_point(const SingularPoint& s, const Tolerances& tol);

/// True iff the finite residues cancel, i.e. infinity carries no
/// singularity (assuming no polynomial part). Throws if the system
/// already declares a point at infinity.
bool check_infinity_regular(const LinearSystem& sys, const Tolerances& tol);

/// Change of variable t = 1/z for the point at infinity. The input point
/// must be at infinity with coeffs holding the polynomial part of the
/// coefficient matrix in z (ascending powers). residue_sum is the sum of
/// the finite points' residues; it lands in the 1/t slot. Returns the
/// equivalent point at t = 0, or nothing when the result has no pole.
std::optional<SingularPoint> invert_variable(const SingularPoint& s,
                                             const CMatrix& residue_sum,
                                             const Tolerances& tol);
std::optional<SingularPoint> invert_variable(const SingularPoint& s, const Tolerances& tol);

/// Local Taylor data at sys.points[index]: coefficients B^(0..order) of
/// the full system expanded at that point, i.e. the principal part plus
/// the analytic contribution of every other point (geometric series) and
/// of the polynomial part.
std::vector<CMatrix> local_coefficients(const LinearSystem& sys, size_t index, int order);

}  // namespace ldsolv

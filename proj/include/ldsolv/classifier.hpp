#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ldsolv/lie.hpp"
#include "ldsolv/system.hpp"

namespace ldsolv {

enum class SolvType {
    GENERALIZED_QUADRATURES,
    EXP_OF_INTEGRALS_AND_ALGEBRAIC,
    INTEGRALS_AND_ALGEBRAIC,
    INTEGRALS,
    ALGEBRAIC,
};
constexpr std::array<SolvType, 5> all_solv_types = {
    SolvType::GENERALIZED_QUADRATURES,   SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC,
    SolvType::INTEGRALS_AND_ALGEBRAIC,   SolvType::INTEGRALS,
    SolvType::ALGEBRAIC,
};
std::string to_string(SolvType t);

enum class Verdict { YES, NO, INAPPLICABLE };
std::string to_string(Verdict v);

struct PointExponents {
    PointLocation location;
    int poincare_rank = 0;
    PointClass cls = PointClass::FUCHSIAN;
    std::vector<cplx> exponents;
    double cond1_margin = 0.0;  // min over exponents of Re(lambda) + threshold
};

/// Smallness and genericity diagnostics feeding every verdict.
struct HypothesisReport {
    bool generic = false;
    bool cond1_ok = false;       // Re(lambda) > -1/(n(p-1)) everywhere
    bool cond1prime_ok = false;  // real-part spread < 1/(n(p-1)) at each point
    bool fuchsian_diff_ok = false;
    bool threshold_defined = false;
    double threshold = 0.0;  // 1/(n(p-1))
    int n_points = 0;        // singular points counted with infinity
    std::vector<PointExponents> exponent_table;
    std::string cond1_failure;  // first violation, for report text
    std::string cond1prime_failure;
    std::string fuchsian_diff_failure;
};

struct TypeVerdict {
    Verdict verdict = Verdict::INAPPLICABLE;
    std::string reason;
};

struct SolvabilityReport {
    HypothesisReport hypothesis;
    std::array<TypeVerdict, 5> verdicts;  // indexed by SolvType order
    std::optional<TriangularWitness> triangular_witness;
    std::optional<CMatrix> diagonalizer;
    bool scalar_system = false;

    const TypeVerdict& of(SolvType t) const { return verdicts[static_cast<size_t>(t)]; }
    TypeVerdict& of(SolvType t) { return verdicts[static_cast<size_t>(t)]; }
};

/// Exponents at every singular point (infinity included, through the
/// t = 1/z chart when it is singular) plus the smallness flags.
HypothesisReport gather_exponents(const LinearSystem& sys, const Tolerances& tol);

/// Full per-type classification.
SolvabilityReport classify(const LinearSystem& sys, const Tolerances& tol);

/// Rank-1 shortcut: every residue-adjacent coefficient small enough in
/// norm, bypassing exponent computation.
bool check_corollary1(const LinearSystem& sys, const Tolerances& tol);

/// Every coefficient matrix the criteria quantify over: principal parts
/// of all points plus the polynomial part.
std::vector<CMatrix> coefficient_matrices(const LinearSystem& sys);

}  // namespace ldsolv

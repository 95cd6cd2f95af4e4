#include "ldsolv/classifier.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ldsolv/splitting.hpp"

namespace ldsolv {

std::string to_string(SolvType t) {
    switch (t) {
        case SolvType::GENERALIZED_QUADRATURES: return "GENERALIZED_QUADRATURES";
        case SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC: return "EXP_OF_INTEGRALS_AND_ALGEBRAIC";
        case SolvType::INTEGRALS_AND_ALGEBRAIC: return "INTEGRALS_AND_ALGEBRAIC";
        case SolvType::INTEGRALS: return "INTEGRALS";
        case SolvType::ALGEBRAIC: return "ALGEBRAIC";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::YES: return "YES";
        case Verdict::NO: return "NO";
        case Verdict::INAPPLICABLE: return "INAPPLICABLE";
    }
    return "?";
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

/// The points the hypotheses quantify over: the listed ones plus the
/// singularity at infinity when the data forces one (explicit points stay
/// as given; a polynomial part goes through the t = 1/z chart; leftover
/// residues give a Fuchsian point there).
std::vector<SingularPoint> effective_points(const LinearSystem& sys, const Tolerances& tol) {
    std::vector<SingularPoint> pts = sys.points;
    if (sys.has_explicit_infinity_point()) return pts;
    const CMatrix rsum = sys.finite_residue_sum();
    if (!sys.polynomial_part.empty()) {
        SingularPoint raw;
        raw.location = PointLocation::infinity();
        raw.coeffs = sys.polynomial_part;
        raw.poincare_rank = static_cast<int>(sys.polynomial_part.size());
        auto inverted = invert_variable(raw, rsum, tol);
        if (inverted) {
            inverted->location = PointLocation::infinity();  // report under its own name
            pts.push_back(std::move(*inverted));
        }
        return pts;
    }
    double scale = 0.0;
    for (const auto& p : sys.points) scale = std::max(scale, mat_norm1(p.residue()));
    if (mat_norm1(rsum) > tol.eq_tol * (1.0 + scale)) {
        SingularPoint inf;
        inf.location = PointLocation::infinity();
        inf.poincare_rank = 0;
        inf.coeffs = {-rsum};
        pts.push_back(std::move(inf));
    }
    return pts;
}

bool is_integer_diff(cplx d, const Tolerances& tol) {
    return std::abs(d.imag()) <= tol.eq_tol * (1.0 + std::abs(d)) &&
           std::abs(d.real() - std::round(d.real())) <= tol.eq_tol * (1.0 + std::abs(d));
}

}  // namespace

HypothesisReport gather_exponents(const LinearSystem& sys, const Tolerances& tol) {
    HypothesisReport hr;
    if (sys.dimension == 1) throw DimensionOne();
    const std::vector<SingularPoint> pts = effective_points(sys, tol);
    hr.n_points = static_cast<int>(pts.size());
    hr.threshold = 1.0 / (hr.n_points * (sys.dimension - 1));
    hr.threshold_defined = true;

    hr.generic = true;
    for (const auto& pt : pts) {
        PointExponents pe;
        pe.location = pt.location;
        pe.poincare_rank = pt.poincare_rank;
        pe.cls = classify_point(pt, tol);
        if (pe.cls == PointClass::IRREGULAR_RESONANT) throw ResonantPointPresent(pt.location.str());
        pe.exponents = (pe.cls == PointClass::FUCHSIAN)
                           ? fuchsian_exponents(pt, tol)
                           : split(pt, pt.poincare_rank, tol).exponents;
        hr.exponent_table.push_back(std::move(pe));
    }

    hr.cond1_ok = true;
    hr.cond1prime_ok = true;
    hr.fuchsian_diff_ok = true;
    for (auto& pe : hr.exponent_table) {
        double margin = std::numeric_limits<double>::infinity();
        for (const auto& lam : pe.exponents) {
            margin = std::min(margin, lam.real() + hr.threshold);
            if (lam.real() <= -hr.threshold && hr.cond1_ok) {
                hr.cond1_ok = false;
                hr.cond1_failure = "Re lambda = " + fmt(lam.real()) + " <= -" +
                                   fmt(hr.threshold) + " at point " + pe.location.str();
            }
        }
        pe.cond1_margin = margin;
        for (size_t i = 0; i < pe.exponents.size(); ++i)
            for (size_t j = i + 1; j < pe.exponents.size(); ++j) {
                const double spread =
                    std::abs(pe.exponents[i].real() - pe.exponents[j].real());
                if (spread >= hr.threshold && hr.cond1prime_ok) {
                    hr.cond1prime_ok = false;
                    hr.cond1prime_failure = "|Re spread| = " + fmt(spread) + " >= " +
                                            fmt(hr.threshold) + " at point " + pe.location.str();
                }
                if (pe.cls == PointClass::FUCHSIAN) {
                    const cplx d = pe.exponents[i] - pe.exponents[j];
                    if (is_integer_diff(d, tol)) continue;
                    auto rat = is_rational(d, tol);
                    if (rat && rat->den >= 2 && hr.fuchsian_diff_ok) {
                        hr.fuchsian_diff_ok = false;
                        hr.fuchsian_diff_failure =
                            "exponent difference " + fmt(d.real()) + " is rational (" +
                            std::to_string(rat->num) + "/" + std::to_string(rat->den) +
                            ") but not integer at Fuchsian point " + pe.location.str();
                    }
                }
            }
    }
    return hr;
}

std::vector<CMatrix> coefficient_matrices(const LinearSystem& sys) {
    std::vector<CMatrix> out;
    for (const auto& pt : sys.points)
        for (const auto& m : pt.coeffs) out.push_back(m);
    for (const auto& m : sys.polynomial_part) out.push_back(m);
    return out;
}

bool check_corollary1(const LinearSystem& sys, const Tolerances& tol) {
    (void)tol;
    for (const auto& pt : sys.points)
        if (pt.poincare_rank != 1) throw RankNotOne();
    const int n = static_cast<int>(sys.points.size());
    const int p = sys.dimension;
    if (p == 1) throw DimensionOne();
    const double threshold = 1.0 / (n * (p - 1));
    for (const auto& pt : sys.points)
        if (mat_norm1(pt.coeffs[1]) >= threshold) return false;
    return true;
}

namespace {

const char kIrregularReason[] = "irregular singular point present";

}  // namespace

SolvabilityReport classify(const LinearSystem& sys, const Tolerances& tol) {
    SolvabilityReport rep;
    if (sys.dimension == 1) {
        // a scalar equation integrates by one quadrature; the remaining
        // Kolchin types sit outside the smallness criteria entirely
        rep.scalar_system = true;
        rep.hypothesis.threshold_defined = false;
        rep.of(SolvType::GENERALIZED_QUADRATURES) = {Verdict::YES, "scalar system"};
        rep.of(SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC) = {Verdict::YES, "scalar system"};
        rep.of(SolvType::INTEGRALS_AND_ALGEBRAIC) = {Verdict::YES, "scalar system"};
        rep.of(SolvType::INTEGRALS) = {
            Verdict::INAPPLICABLE, "scalar system: outside the smallness criteria"};
        rep.of(SolvType::ALGEBRAIC) = {
            Verdict::INAPPLICABLE, "scalar system: outside the smallness criteria"};
        return rep;
    }

    rep.hypothesis = gather_exponents(sys, tol);
    const HypothesisReport& hr = rep.hypothesis;

    const std::vector<CMatrix> gens = coefficient_matrices(sys);
    rep.triangular_witness = simultaneous_triangularize(gens, tol);
    rep.diagonalizer = simultaneous_diagonalize(gens, tol);

    bool any_irregular = false;
    for (const auto& pe : hr.exponent_table)
        if (pe.cls != PointClass::FUCHSIAN) any_irregular = true;

    std::string hypothesis_failure;
    if (!hr.generic) {
        hypothesis_failure = "genericity violated";
    } else if (!hr.cond1_ok && !hr.cond1prime_ok) {
        hypothesis_failure = "condition (cond1) violated: " + hr.cond1_failure +
                             "; condition (cond1') violated: " + hr.cond1prime_failure;
    } else if (!hr.fuchsian_diff_ok) {
        hypothesis_failure = hr.fuchsian_diff_failure;
    }
    const bool hyp_ok = hypothesis_failure.empty();
    const std::string smallness_note =
        hr.cond1_ok ? "condition (cond1) holds" : "condition (cond1') holds";

    // solvability by generalized quadratures (Liouvillian)
    if (!hyp_ok) {
        rep.of(SolvType::GENERALIZED_QUADRATURES) = {Verdict::INAPPLICABLE, hypothesis_failure};
    } else if (rep.triangular_witness) {
        rep.of(SolvType::GENERALIZED_QUADRATURES) = {
            Verdict::YES,
            "simultaneously triangularizable; " + smallness_note};
    } else {
        rep.of(SolvType::GENERALIZED_QUADRATURES) = {
            Verdict::NO, "not simultaneously triangularizable; " + smallness_note};
    }

    // exponentials of integrals and algebraic functions
    if (!hyp_ok) {
        rep.of(SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC) = {Verdict::INAPPLICABLE,
                                                            hypothesis_failure};
    } else if (rep.diagonalizer) {
        rep.of(SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC) = {
            Verdict::YES, "simultaneously diagonalizable; " + smallness_note};
    } else {
        rep.of(SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC) = {
            Verdict::NO, "not simultaneously diagonalizable; " + smallness_note};
    }

    // the remaining Kolchin types need every point Fuchsian; an irregular
    // point rules them out regardless of any smallness condition
    if (any_irregular) {
        rep.of(SolvType::INTEGRALS_AND_ALGEBRAIC) = {Verdict::NO, kIrregularReason};
        rep.of(SolvType::INTEGRALS) = {Verdict::NO, kIrregularReason};
        rep.of(SolvType::ALGEBRAIC) = {Verdict::NO, kIrregularReason};
        return rep;
    }
    if (!hyp_ok) {
        rep.of(SolvType::INTEGRALS_AND_ALGEBRAIC) = {Verdict::INAPPLICABLE, hypothesis_failure};
        rep.of(SolvType::INTEGRALS) = {Verdict::INAPPLICABLE, hypothesis_failure};
        rep.of(SolvType::ALGEBRAIC) = {Verdict::INAPPLICABLE, hypothesis_failure};
        return rep;
    }

    bool all_zero = true, all_rational_integer_diff = true;
    for (const auto& pe : hr.exponent_table) {
        for (const auto& lam : pe.exponents) {
            if (std::abs(lam) > tol.eq_tol) all_zero = false;
            if (!is_rational(lam, tol)) all_rational_integer_diff = false;
        }
        for (size_t i = 0; i < pe.exponents.size() && all_rational_integer_diff; ++i)
            for (size_t j = i + 1; j < pe.exponents.size(); ++j)
                if (!is_integer_diff(pe.exponents[i] - pe.exponents[j], tol))
                    all_rational_integer_diff = false;
    }

    const bool tri = rep.triangular_witness.has_value();
    const bool diag = rep.diagonalizer.has_value();
    rep.of(SolvType::INTEGRALS_AND_ALGEBRAIC) =
        (tri && all_rational_integer_diff)
            ? TypeVerdict{Verdict::YES, "triangularizable with rational, integer-spaced exponents"}
            : TypeVerdict{Verdict::NO, tri ? "exponents not rational with integer differences"
                                           : "not simultaneously triangularizable"};
    rep.of(SolvType::INTEGRALS) =
        (tri && all_zero)
            ? TypeVerdict{Verdict::YES, "triangularizable with all exponents zero"}
            : TypeVerdict{Verdict::NO,
                          tri ? "some exponent is nonzero" : "not simultaneously triangularizable"};
    rep.of(SolvType::ALGEBRAIC) =
        (diag && all_rational_integer_diff)
            ? TypeVerdict{Verdict::YES, "diagonalizable with rational, integer-spaced exponents"}
            : TypeVerdict{Verdict::NO, diag ? "exponents not rational with integer differences"
                                            : "not simultaneously diagonalizable"};
    return rep;
}

}  // namespace ldsolv

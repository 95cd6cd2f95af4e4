#include "ldsolv/system.hpp"

#include <cmath>
#include <sstream>

namespace ldsolv {

std::string PointLocation::str() const {
    if (at_infinity) return "inf";
    std::ostringstream os;
    if (value.imag() == 0.0) {
        os << value.real();
    } else {
        os << value.real() << (value.imag() < 0 ? "-" : "+") << std::abs(value.imag()) << "i";
    }
    return os.str();
}

std::string to_string(PointClass c) {
    switch (c) {
        case PointClass::FUCHSIAN: return "fuchsian";
        case PointClass::IRREGULAR_NONRESONANT: return "irregular_nonresonant";
        case PointClass::IRREGULAR_RESONANT: return "irregular_resonant";
    }
    return "?";
}

bool LinearSystem::has_explicit_infinity_point() const {
    for (const auto& p : points)
        if (p.location.at_infinity) return true;
    return false;
}

CMatrix LinearSystem::finite_residue_sum() const {
    CMatrix sum = CMatrix::zero(dimension, dimension);
    for (const auto& p : points)
        if (!p.location.at_infinity) sum += p.residue();
    return sum;
}

PointClass classify_point(const SingularPoint& s, const Tolerances& tol) {
    if (s.poincare_rank == 0) return PointClass::FUCHSIAN;
    EigenDecomposition ed = eigen_decompose(s.leading(), tol);
    return pairwise_distinct(ed.eigenvalues, tol) ? PointClass::IRREGULAR_NONRESONANT
                                                  : PointClass::IRREGULAR_RESONANT;
}

bool check_infinity_regular(const LinearSystem& sys, const Tolerances& tol) {
    if (sys.has_explicit_infinity_point() || !sys.polynomial_part.empty())
        throw InfinityAlreadySingular();
    double scale = 0.0;
    for (const auto& p : sys.points) scale = std::max(scale, mat_norm1(p.residue()));
    return mat_norm1(sys.finite_residue_sum()) <= tol.eq_tol * (1.0 + scale);
}

std::optional<SingularPoint> invert_variable(const SingularPoint& s, const CMatrix& residue_sum,
                                             const Tolerances& tol) {
    if (!s.location.at_infinity) throw NotInfinity();
    // s.coeffs = polynomial part P0 + P1 z + ... in the z chart.
    // With t = 1/z the coefficient matrix becomes
    //   -(Pd/t^(d+2) + ... + P0/t^2) - (sum of finite residues)/t + analytic.
    std::vector<CMatrix> poly = s.coeffs;
    double scale = mat_norm1(residue_sum);
    for (const auto& c : poly) scale = std::max(scale, mat_norm1(c));
    const double zero_thr = tol.eq_tol * (1.0 + scale);
    while (!poly.empty() && mat_norm1(poly.back()) <= zero_thr) poly.pop_back();

    const bool residues_vanish = mat_norm1(residue_sum) <= zero_thr;
    if (poly.empty() && residues_vanish) return std::nullopt;  // no pole left

    SingularPoint out;
    out.location = PointLocation::finite(0.0);
    if (poly.empty()) {
        // only the 1/t residue survives: a Fuchsian point
        out.poincare_rank = 0;
        out.coeffs = {-residue_sum};
        return out;
    }
    const int d = static_cast<int>(poly.size()) - 1;
    out.poincare_rank = d + 1;
    out.coeffs.resize(d + 2);
    for (int k = 0; k <= d; ++k) out.coeffs[k] = -poly[d - k];
    out.coeffs[d + 1] = -residue_sum;
    return out;
}

std::optional<SingularPoint> invert_variable(const SingularPoint& s, const Tolerances& tol) {
    const int n = s.coeffs.empty() ? 0 : s.coeffs.front().rows();
    return invert_variable(s, CMatrix::zero(n, n), tol);
}

namespace {
cplx ipow(cplx base, int e) {
    cplx r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}
}  // namespace

std::vector<CMatrix> local_coefficients(const LinearSystem& sys, size_t index, int order) {
    const SingularPoint& pt = sys.points.at(index);
    if (pt.location.at_infinity) throw NotInfinity();  // expansion only at finite points
    const int p = sys.dimension;
    const cplx a = pt.location.value;
    std::vector<CMatrix> out(order + 1, CMatrix::zero(p, p));

    const int r = pt.poincare_rank;
    for (int k = 0; k <= r && k <= order; ++k) out[k] = pt.coeffs[k];

    // Analytic part at a: Taylor coefficients C_s land in slot r+1+s.
    for (size_t j = 0; j < sys.points.size(); ++j) {
        if (j == index) continue;
        const SingularPoint& other = sys.points[j];
        if (other.location.at_infinity)
            throw Error("local expansion with an explicit infinity point is not supported");
        const cplx b = other.location.value;
        const cplx dz = a - b;
        for (int l = 0; l <= other.poincare_rank; ++l) {
            const int m = other.poincare_rank + 1 - l;  // pole order of this term
            // 1/(z-b)^m around a: sum_s binom(m+s-1, s) (-1)^s ... with
            // (z-b) = dz (1 + (z-a)/dz):
            //   coefficient of (z-a)^s is (-1)^s C(m+s-1, s) dz^(-m-s)
            cplx pw = ipow(1.0 / dz, m);
            double binom = 1.0;
            for (int s = 0; r + 1 + s <= order; ++s) {
                if (s > 0) {
                    binom *= static_cast<double>(m + s - 1) / s;
                    pw /= dz;
                }
                const double sgn = (s % 2 == 0) ? 1.0 : -1.0;
                out[r + 1 + s] += other.coeffs[l] * (sgn * binom * pw);
            }
        }
    }
    // Polynomial part P(z) around a: coefficient of (z-a)^s is
    // sum_j P_j C(j, s) a^(j-s).
    for (int s = 0; r + 1 + s <= order; ++s) {
        for (int j = s; j < static_cast<int>(sys.polynomial_part.size()); ++j) {
            double binom = 1.0;
            for (int t = 0; t < s; ++t) binom *= static_cast<double>(j - t) / (t + 1);
            out[r + 1 + s] += sys.polynomial_part[j] * (binom * ipow(a, j - s));
        }
    }
    return out;
}

}  // namespace ldsolv

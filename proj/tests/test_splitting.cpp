#include <doctest.h>

#include <cmath>

#include "ldsolv/fixtures.hpp"
#include "ldsolv/ingest.hpp"
#include "ldsolv/splitting.hpp"
#include "test_support.hpp"

using namespace ldsolv;
using tsup::rng;

namespace {

const Tolerances kTol;

std::map<std::string, cplx> abc(double a, double b, double c) {
    return {{"a", cplx(a)}, {"b", cplx(b)}, {"c", cplx(c)}};
}

}  // namespace

TEST_CASE("exponents of the three-point fixture match the published values") {
    const LinearSystem sys =
        ingest(fixture_document("sec4-example1"), abc(0.1, 0.05, -0.05), kTol);

    LocalFormalData d0 = split(sys.points[0], 2, kTol);
    CHECK(tsup::multiset_match(d0.exponents, {cplx(0.0), cplx(0.1), cplx(-0.05)}, 1e-9));

    LocalFormalData d1 = split(sys.points[1], 1, kTol);
    CHECK(tsup::multiset_match(d1.exponents, {cplx(0.0), cplx(0.0), cplx(0.05)}, 1e-9));

    LocalFormalData d2 = split(sys.points[2], 1, kTol);
    CHECK(tsup::multiset_match(d2.exponents, {cplx(-0.1), cplx(0.05), cplx(-0.05)}, 1e-9));
}

TEST_CASE("exponent-to-leading-eigenvalue pairing at the first point") {
    // the diagonalized local form pairs alpha=-1 with exponent a,
    // alpha=1 with 0, alpha=2 with c
    const LinearSystem sys =
        ingest(fixture_document("sec4-example1"), abc(0.1, 0.05, -0.05), kTol);
    LocalFormalData d = split(sys.points[0], 2, kTol);
    REQUIRE(d.leading_eigenvalues.size() == 3);
    // sorted by (re, im): -1, 1, 2
    CHECK(d.leading_eigenvalues[0].real() == doctest::Approx(-1.0));
    CHECK(d.leading_eigenvalues[1].real() == doctest::Approx(1.0));
    CHECK(d.leading_eigenvalues[2].real() == doctest::Approx(2.0));
    CHECK(std::abs(d.exponents[0] - cplx(0.1)) <= 1e-9);
    CHECK(std::abs(d.exponents[1]) <= 1e-9);
    CHECK(std::abs(d.exponents[2] - cplx(-0.05)) <= 1e-9);
}

TEST_CASE("structural invariants of the formal data") {
    const LinearSystem sys = ingest(fixture_document("sec4-example1"), abc(0.1, 0.2, 0.3), kTol);
    LocalFormalData d = split(sys.points[0], 4, kTol);
    CHECK(d.order == 4);
    CHECK(d.t_series.size() == 4);
    CHECK(d.a_series.size() == 4);
    CHECK(d.q_coeffs.size() == 2);  // A^(0), A^(1) for rank 2
    for (const auto& a : d.a_series)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) CHECK(std::abs(a(i, j)) == 0.0);
    for (const auto& t : d.t_series)
        for (int i = 0; i < 3; ++i) CHECK(std::abs(t(i, i)) == 0.0);
    // exponents are the diagonal of A^(r)
    for (int j = 0; j < 3; ++j) CHECK(d.exponents[j] == d.a_series[1](j, j));
}

TEST_CASE("corollary-2 shaped point: all exponents exactly zero") {
    const LinearSystem sys = ingest(fixture_document("sec4-example2"),
                                    {{"a", cplx(1.0)}, {"b", cplx(1.0)}}, kTol);
    for (const auto& pt : sys.points) {
        LocalFormalData d = split(pt, pt.poincare_rank, kTol);
        for (const auto& lam : d.exponents) CHECK(std::abs(lam) == 0.0);
        for (const auto& t : d.t_series) CHECK(mat_norm1(t) == 0.0);
    }
}

TEST_CASE("split rejects resonant points and guards divergence") {
    SingularPoint nil;
    nil.location = PointLocation::finite(0.0);
    nil.poincare_rank = 1;
    nil.coeffs = {CMatrix{{0, 1}, {0, 0}}, CMatrix::zero(2, 2)};
    CHECK_THROWS_AS(split(nil, 1, kTol), ResonantPoint);

    // gap barely above the distinctness threshold: the gauge series blows
    // through the cap within two orders
    SingularPoint tight;
    tight.location = PointLocation::finite(0.0);
    tight.poincare_rank = 1;
    tight.coeffs = {CMatrix{{0, 0}, {0, cplx(3e-9, 0)}}, CMatrix{{0, 1}, {1, 0}}};
    CHECK_THROWS_AS(split(tight, 3, kTol), DivergenceGuard);
}

TEST_CASE("fuchsian exponents") {
    const LinearSystem sheared = ingest(fixture_document("sec2-example1"), {{"c", cplx(3)}}, kTol);
    REQUIRE(sheared.points.size() == 2);
    const SingularPoint& inf = sheared.points[1];
    REQUIRE(inf.location.at_infinity);
    CHECK(tsup::multiset_match(fuchsian_exponents(inf, kTol), {cplx(0.0), cplx(-1.0)}, 1e-12));

    SingularPoint zero;
    zero.location = PointLocation::finite(0.0);
    zero.poincare_rank = 0;
    zero.coeffs = {CMatrix::zero(3, 3)};
    CHECK(tsup::multiset_match(fuchsian_exponents(zero, kTol), {cplx(0), cplx(0), cplx(0)},
                               1e-15));

    SingularPoint diag;
    diag.location = PointLocation::finite(0.0);
    diag.poincare_rank = 0;
    diag.coeffs = {CMatrix{{0.5, 0}, {0, cplx(1.0 / 3)}}};
    CHECK(tsup::multiset_match(fuchsian_exponents(diag, kTol), {cplx(0.5), cplx(1.0 / 3)},
                               1e-12));

    SingularPoint irr;
    irr.location = PointLocation::finite(0.0);
    irr.poincare_rank = 1;
    irr.coeffs = {CMatrix::identity(2), CMatrix::zero(2, 2)};
    CHECK_THROWS_AS(fuchsian_exponents(irr, kTol), NotFuchsian);
}

TEST_CASE("majorant polynomial values") {
    CHECK(pk_polynomial(1) == std::vector<double>{0.0, 2.0});
    CHECK(pk_polynomial(2) == std::vector<double>{0.0, 4.0, 6.0});
    CHECK(pk_polynomial(3) == std::vector<double>{0.0, 6.0, 18.0, 22.0});
    for (int k = 1; k <= 12; ++k) {
        const std::vector<double> c = pk_polynomial(k);
        CHECK(static_cast<int>(c.size()) == k + 1);
        CHECK(c[0] == 0.0);
        CHECK(c[1] == 2.0 * k);
        if (k >= 2) CHECK(c[2] == 3.0 * k * (k - 1));
    }
    CHECK(pk_evaluate(0, 0.7) == 0.0);
    CHECK(pk_evaluate(1, 0.25) == doctest::Approx(0.5));
}

TEST_CASE("exponent_bound") {
    // rank 1: the bound collapses to delta
    SingularPoint r1;
    r1.location = PointLocation::finite(0.0);
    r1.poincare_rank = 1;
    r1.coeffs = {CMatrix{{0, 0}, {0, 1}}, CMatrix{{0.0, 0.03}, {0.02, 0.01}}};
    ExponentBound b1 = exponent_bound(r1, kTol);
    CHECK(b1.bound == doctest::Approx(b1.delta));
    CHECK(b1.rho == doctest::Approx(1.0));

    // rank 2 with delta = 0.1, rho = 1: bound = 0.1 * (1 + P_1(0.1)) = 0.12
    SingularPoint r2;
    r2.location = PointLocation::finite(0.0);
    r2.poincare_rank = 2;
    r2.coeffs = {CMatrix{{0, 0}, {0, 1}}, CMatrix{{0, 0.1}, {0, 0}}, CMatrix{{0, 0}, {0.05, 0}}};
    ExponentBound b2 = exponent_bound(r2, kTol);
    CHECK(b2.delta == doctest::Approx(0.1));
    CHECK(b2.rho == doctest::Approx(1.0));
    CHECK(b2.bound == doctest::Approx(0.12));

    // only a leading term: everything collapses to zero
    SingularPoint c2;
    c2.location = PointLocation::finite(0.0);
    c2.poincare_rank = 2;
    c2.coeffs = {CMatrix{{0, 0}, {0, 1}}, CMatrix::zero(2, 2), CMatrix::zero(2, 2)};
    ExponentBound b3 = exponent_bound(c2, kTol);
    CHECK(b3.delta == 0.0);
    CHECK(b3.bound == 0.0);

    SingularPoint fuchs;
    fuchs.location = PointLocation::finite(0.0);
    fuchs.poincare_rank = 0;
    fuchs.coeffs = {CMatrix::identity(2)};
    CHECK_THROWS_AS(exponent_bound(fuchs, kTol), ResonantPoint);
}

TEST_CASE("exponent smallness bound holds over a random corpus") {
    auto& gen = rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const SingularPoint pt = tsup::random_nonresonant_point(gen);
        ExponentBound eb = exponent_bound(pt, kTol);
        CHECK(eb.rho >= 0.5 - 1e-9);
        LocalFormalData d = split(pt, pt.poincare_rank, kTol);
        for (const auto& lam : d.exponents) CHECK(std::abs(lam) <= eb.bound + 1e-9);
    }
}

TEST_CASE("re-expansion of the transformed series is diagonal") {
    auto& gen = rng(32);
    for (int trial = 0; trial < 60; ++trial) {
        const SingularPoint pt = tsup::random_nonresonant_point(gen);
        const int order = pt.poincare_rank + 2;
        LocalFormalData d = split(pt, order, kTol);
        CHECK(tsup::reexpansion_residual(pt.coeffs, pt.poincare_rank, d) <= 1e2 * kTol.eq_tol);
    }
}

TEST_CASE("re-expansion holds with in-system higher-order coefficients") {
    const LinearSystem sys = ingest(fixture_document("sec4-example1"), abc(0.1, 0.2, 0.3), kTol);
    for (size_t idx = 0; idx < sys.points.size(); ++idx) {
        const int r = sys.points[idx].poincare_rank;
        const int order = r + 2;
        LocalFormalData d = split_in_system(sys, idx, order, kTol);
        const std::vector<CMatrix> coeffs = local_coefficients(sys, idx, order);
        CHECK(tsup::reexpansion_residual(coeffs, r, d) <= 1e2 * kTol.eq_tol);
        // the exponents do not depend on the padding
        LocalFormalData dloc = split(sys.points[idx], r, kTol);
        CHECK(tsup::multiset_match(d.exponents, dloc.exponents, 1e-12));
    }
}

TEST_CASE("exponents are invariant under conjugation of the inputs") {
    auto& gen = rng(33);
    for (int trial = 0; trial < 25; ++trial) {
        const SingularPoint pt = tsup::random_nonresonant_point(gen);
        const int p = pt.coeffs.front().rows();
        const CMatrix c = tsup::random_well_conditioned(p, gen);
        const CMatrix cinv = inverse(c);
        SingularPoint conj = pt;
        for (auto& m : conj.coeffs) m = cinv * m * c;
        LocalFormalData d1 = split(pt, pt.poincare_rank, kTol);
        LocalFormalData d2 = split(conj, conj.poincare_rank, kTol);
        CHECK(tsup::multiset_match(d1.exponents, d2.exponents, 10 * kTol.eq_tol));
    }
}

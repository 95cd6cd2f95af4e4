#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "ldsolv/classifier.hpp"
#include "ldsolv/fixtures.hpp"
#include "ldsolv/ingest.hpp"
#include "ldsolv/report.hpp"
#include "test_support.hpp"

using namespace ldsolv;
using tsup::rng;

namespace {

const Tolerances kTol;

LinearSystem example1(double a, double b, double c) {
    return ingest(fixture_document("sec4-example1"),
                  {{"a", cplx(a)}, {"b", cplx(b)}, {"c", cplx(c)}}, kTol);
}

LinearSystem example2(double a, double b) {
    return ingest(fixture_document("sec4-example2"), {{"a", cplx(a)}, {"b", cplx(b)}}, kTol);
}

LinearSystem sheared(double c) {
    return ingest(fixture_document("sec2-example1"), {{"c", cplx(c)}}, kTol);
}

/// Fuchsian two-point system with opposite residues R, -R.
LinearSystem fuchsian_pair(const CMatrix& r, const Tolerances& tol) {
    LinearSystem sys;
    sys.dimension = r.rows();
    SingularPoint p0, p1;
    p0.location = PointLocation::finite(0.0);
    p0.poincare_rank = 0;
    p0.coeffs = {r};
    p1.location = PointLocation::finite(1.0);
    p1.poincare_rank = 0;
    p1.coeffs = {-r};
    sys.points = {p0, p1};
    sys.infinity_regular = check_infinity_regular(sys, tol);
    return sys;
}

}  // namespace

TEST_CASE("gather_exponents on the three-point fixture") {
    HypothesisReport hr = gather_exponents(example1(0.1, 0.05, -0.05), kTol);
    CHECK(hr.n_points == 3);
    CHECK(hr.threshold == doctest::Approx(1.0 / 6));
    CHECK(hr.generic);
    CHECK(hr.cond1_ok);
    CHECK(hr.cond1prime_ok);
    CHECK(hr.fuchsian_diff_ok);  // no Fuchsian point at all
    REQUIRE(hr.exponent_table.size() == 3);
    CHECK(tsup::multiset_match(hr.exponent_table[0].exponents,
                               {cplx(0), cplx(0.1), cplx(-0.05)}, 1e-9));
    CHECK(tsup::multiset_match(hr.exponent_table[1].exponents,
                               {cplx(0), cplx(0), cplx(0.05)}, 1e-9));
    CHECK(tsup::multiset_match(hr.exponent_table[2].exponents,
                               {cplx(-0.1), cplx(0.05), cplx(-0.05)}, 1e-9));
}

TEST_CASE("gather_exponents on the sheared fixture: threshold 1/2, both conditions fail") {
    HypothesisReport hr = gather_exponents(sheared(3.0), kTol);
    CHECK(hr.n_points == 2);
    CHECK(hr.threshold == doctest::Approx(0.5));
    CHECK_FALSE(hr.cond1_ok);       // the exponent -1 at infinity
    CHECK_FALSE(hr.cond1prime_ok);  // spread 1 >= 1/2 there as well
    CHECK(hr.generic);
    // the infinity row carries {0, -1}
    bool found_inf = false;
    for (const auto& pe : hr.exponent_table)
        if (pe.location.at_infinity) {
            found_inf = true;
            CHECK(tsup::multiset_match(pe.exponents, {cplx(0), cplx(-1)}, 1e-12));
            CHECK(pe.cond1_margin == doctest::Approx(-0.5));
        }
    CHECK(found_inf);
}

TEST_CASE("gather_exponents counts an implicit Fuchsian point at infinity") {
    // one Fuchsian point with a nonzero residue: infinity picks up the
    // opposite residue and joins the count
    LinearSystem sys = ingest(R"({"dimension": 2, "points": [
        {"location": [0,0], "rank": 0, "coeffs": [[[0.125, 0],[0, -0.125]]]}]})",
                              {}, kTol);
    HypothesisReport hr = gather_exponents(sys, kTol);
    CHECK(hr.n_points == 2);
    CHECK(hr.threshold == doctest::Approx(0.5));
    REQUIRE(hr.exponent_table.size() == 2);
    CHECK(hr.exponent_table[1].location.at_infinity);
    CHECK(tsup::multiset_match(hr.exponent_table[1].exponents, {cplx(-0.125), cplx(0.125)},
                               1e-12));
}

TEST_CASE("system singular only at infinity, through the polynomial part") {
    // u'' = (z^2 + c) u as a first-order system: the only singular point
    // sits at infinity and its leading term there is nilpotent, so the
    // analysis must refuse it as resonant
    const std::string quartic = R"({
      "dimension": 2,
      "parameters": ["c"],
      "points": [],
      "polynomial_part": [
        [[0, 1], ["c", 0]],
        [[0, 0], [0, 0]],
        [[0, 0], [1, 0]]
      ]
    })";
    LinearSystem sys = ingest(quartic, {{"c", cplx(1.0)}}, kTol);
    CHECK(sys.points.empty());
    CHECK(sys.polynomial_part.size() == 3);
    CHECK_FALSE(sys.infinity_regular);
    CHECK_THROWS_AS(gather_exponents(sys, kTol), ResonantPointPresent);

    // a constant diagonal matrix: irregular non-resonant at infinity,
    // solvable by exponentials
    const std::string expsys = R"({
      "dimension": 2,
      "polynomial_part": [[[1, 0], [0, 2]]]
    })";
    LinearSystem diag = ingest(expsys, {}, kTol);
    HypothesisReport hr = gather_exponents(diag, kTol);
    CHECK(hr.n_points == 1);
    REQUIRE(hr.exponent_table.size() == 1);
    CHECK(hr.exponent_table[0].location.at_infinity);
    CHECK(hr.exponent_table[0].poincare_rank == 1);
    CHECK(tsup::multiset_match(hr.exponent_table[0].exponents, {cplx(0), cplx(0)}, 1e-12));
    SolvabilityReport rep = classify(diag, kTol);
    CHECK(rep.of(SolvType::GENERALIZED_QUADRATURES).verdict == Verdict::YES);
    CHECK(rep.of(SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC).verdict == Verdict::YES);
    CHECK(rep.of(SolvType::INTEGRALS).verdict == Verdict::NO);  // irregular point present
}

TEST_CASE("finite points and a polynomial part combine at infinity") {
    // one Fuchsian point with residue R plus a constant polynomial part:
    // the inverted infinity point is rank 1 with residue slot -R
    const std::string doc = R"({
      "dimension": 2,
      "points": [
        {"location": [0,0], "rank": 0, "coeffs": [[[0.125, 0],[0, -0.25]]]}
      ],
      "polynomial_part": [[[0.5, 0], [0, 0.25]]]
    })";
    LinearSystem sys = ingest(doc, {}, kTol);
    HypothesisReport hr = gather_exponents(sys, kTol);
    CHECK(hr.n_points == 2);
    REQUIRE(hr.exponent_table.size() == 2);
    const PointExponents& inf = hr.exponent_table[1];
    CHECK(inf.location.at_infinity);
    CHECK(inf.poincare_rank == 1);
    CHECK(inf.cls == PointClass::IRREGULAR_NONRESONANT);
}

TEST_CASE("gather_exponents error paths") {
    // resonant: nilpotent leading term at a positive-rank point
    LinearSystem bad = ingest(R"({"dimension": 2, "points": [
        {"location": [0,0], "rank": 1, "coeffs": [[[0, 1],[0, 0]], [[0,0],[0,0]]]}]})",
                              {}, kTol);
    CHECK_THROWS_AS(gather_exponents(bad, kTol), ResonantPointPresent);

    LinearSystem scalar = ingest(R"({"dimension": 1, "points": [
        {"location": [0,0], "rank": 0, "coeffs": [[[2]]]}]})",
                                 {}, kTol);
    CHECK_THROWS_AS(gather_exponents(scalar, kTol), DimensionOne);
}

TEST_CASE("classify the three-point fixture at small bindings") {
    SolvabilityReport rep = classify(example1(0.1, 0.05, -0.05), kTol);
    CHECK(rep.of(SolvType::GENERALIZED_QUADRATURES).verdict == Verdict::YES);
    REQUIRE(rep.triangular_witness.has_value());
    CHECK(verify_triangular_witness(coefficient_matrices(example1(0.1, 0.05, -0.05)),
                                    rep.triangular_witness->p_matrix, kTol));
    CHECK(rep.of(SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC).verdict == Verdict::NO);
    // irregular points rule out the remaining types outright
    CHECK(rep.of(SolvType::INTEGRALS_AND_ALGEBRAIC).verdict == Verdict::NO);
    CHECK(rep.of(SolvType::INTEGRALS).verdict == Verdict::NO);
    CHECK(rep.of(SolvType::ALGEBRAIC).verdict == Verdict::NO);
    CHECK(rep.of(SolvType::INTEGRALS).reason == "irregular singular point present");
}

TEST_CASE("classify the rank-one family across the locus") {
    SolvabilityReport r0 = classify(example2(1.0, 0.0), kTol);
    CHECK(r0.of(SolvType::GENERALIZED_QUADRATURES).verdict == Verdict::YES);

    SolvabilityReport rm5 = classify(example2(1.0, -5.0), kTol);
    CHECK(rm5.of(SolvType::GENERALIZED_QUADRATURES).verdict == Verdict::YES);

    SolvabilityReport r11 = classify(example2(1.0, 1.0), kTol);
    CHECK(r11.of(SolvType::GENERALIZED_QUADRATURES).verdict == Verdict::NO);
    CHECK_FALSE(r11.triangular_witness.has_value());
}

TEST_CASE("classify the sheared fixture: INAPPLICABLE with the right reason") {
    SolvabilityReport rep = classify(sheared(3.0), kTol);
    const TypeVerdict& gq = rep.of(SolvType::GENERALIZED_QUADRATURES);
    CHECK(gq.verdict == Verdict::INAPPLICABLE);
    CHECK(gq.reason.find("cond1") != std::string::npos);
    CHECK(gq.reason.find("0.5") != std::string::npos);
    CHECK_FALSE(rep.triangular_witness.has_value());  // c=3: no common eigenvector either

    // at c=1 the witness exists and is attached even though the verdict
    // stays INAPPLICABLE
    SolvabilityReport rep1 = classify(sheared(1.0), kTol);
    CHECK(rep1.of(SolvType::GENERALIZED_QUADRATURES).verdict == Verdict::INAPPLICABLE);
    CHECK(rep1.triangular_witness.has_value());
}

TEST_CASE("all-zero coefficients: every type YES with identity witnesses") {
    LinearSystem sys = ingest(R"({"dimension": 2, "points": [
        {"location": [0,0], "rank": 0, "coeffs": [[[0,0],[0,0]]]},
        {"location": [1,0], "rank": 0, "coeffs": [[[0,0],[0,0]]]}]})",
                              {}, kTol);
    SolvabilityReport rep = classify(sys, kTol);
    for (SolvType t : all_solv_types) CHECK(rep.of(t).verdict == Verdict::YES);
    REQUIRE(rep.triangular_witness.has_value());
    REQUIRE(rep.diagonalizer.has_value());
}

TEST_CASE("fuchsian systems with rational exponents") {
    // equal eighth-integer exponents: integer differences, rational values
    CMatrix r8(2, 2);
    r8(0, 0) = 0.125;
    r8(1, 1) = 0.125;
    SolvabilityReport rep = classify(fuchsian_pair(r8, kTol), kTol);
    CHECK(rep.of(SolvType::GENERALIZED_QUADRATURES).verdict == Verdict::YES);
    CHECK(rep.of(SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC).verdict == Verdict::YES);
    CHECK(rep.of(SolvType::INTEGRALS_AND_ALGEBRAIC).verdict == Verdict::YES);
    CHECK(rep.of(SolvType::INTEGRALS).verdict == Verdict::NO);  // exponents nonzero
    CHECK(rep.of(SolvType::ALGEBRAIC).verdict == Verdict::YES);

    // nilpotent residues: all exponents zero, so integrals as well
    CMatrix nil(2, 2);
    nil(0, 1) = 0.125;
    SolvabilityReport rep_nil = classify(fuchsian_pair(nil, kTol), kTol);
    CHECK(rep_nil.of(SolvType::GENERALIZED_QUADRATURES).verdict == Verdict::YES);
    CHECK(rep_nil.of(SolvType::INTEGRALS).verdict == Verdict::YES);
    CHECK(rep_nil.of(SolvType::INTEGRALS_AND_ALGEBRAIC).verdict == Verdict::YES);
    // nilpotent nonzero residue is not diagonalizable
    CHECK(rep_nil.of(SolvType::ALGEBRAIC).verdict == Verdict::NO);

    // a quarter-integer spread trips the rational-but-not-integer gate
    CMatrix rq(2, 2);
    rq(0, 0) = 0.25;
    rq(1, 1) = 0.0;
    SolvabilityReport rep_q = classify(fuchsian_pair(rq, kTol), kTol);
    CHECK(rep_q.of(SolvType::GENERALIZED_QUADRATURES).verdict == Verdict::INAPPLICABLE);
    CHECK(rep_q.of(SolvType::GENERALIZED_QUADRATURES).reason.find("rational") !=
          std::string::npos);
}

TEST_CASE("implications between verdicts") {
    auto check_implications = [](const SolvabilityReport& rep) {
        if (rep.of(SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC).verdict == Verdict::YES)
            CHECK(rep.of(SolvType::GENERALIZED_QUADRATURES).verdict == Verdict::YES);
        if (rep.of(SolvType::INTEGRALS).verdict == Verdict::YES)
            CHECK(rep.of(SolvType::INTEGRALS_AND_ALGEBRAIC).verdict == Verdict::YES);
    };
    CMatrix r8(2, 2);
    r8(0, 0) = 0.125;
    r8(1, 1) = 0.125;
    check_implications(classify(fuchsian_pair(r8, kTol), kTol));
    CMatrix nil(2, 2);
    nil(0, 1) = 0.125;
    check_implications(classify(fuchsian_pair(nil, kTol), kTol));
    check_implications(classify(example1(0.1, 0.05, -0.05), kTol));
    check_implications(classify(example2(1.0, 0.0), kTol));
}

TEST_CASE("classification is invariant under simultaneous conjugation") {
    auto& gen = rng(51);
    for (int trial = 0; trial < 5; ++trial) {
        const CMatrix p = tsup::random_well_conditioned(3, gen);
        const CMatrix pinv = inverse(p);
        LinearSystem sys = example1(0.1, 0.05, -0.05);
        LinearSystem conj = sys;
        for (auto& pt : conj.points)
            for (auto& m : pt.coeffs) m = pinv * m * p;
        SolvabilityReport r1 = classify(sys, kTol);
        SolvabilityReport r2 = classify(conj, kTol);
        CHECK(r1.of(SolvType::GENERALIZED_QUADRATURES).verdict ==
              r2.of(SolvType::GENERALIZED_QUADRATURES).verdict);
        CHECK(r1.of(SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC).verdict ==
              r2.of(SolvType::EXP_OF_INTEGRALS_AND_ALGEBRAIC).verdict);
    }
}

TEST_CASE("scalar systems short-circuit") {
    LinearSystem scalar = ingest(R"({"dimension": 1, "points": [
        {"location": [0,0], "rank": 1, "coeffs": [[[1]], [[0.5]]]}]})",
                                 {}, kTol);
    SolvabilityReport rep = classify(scalar, kTol);
    CHECK(rep.scalar_system);
    CHECK(rep.of(SolvType::GENERALIZED_QUADRATURES).verdict == Verdict::YES);
    CHECK(rep.of(SolvType::GENERALIZED_QUADRATURES).reason == "scalar system");
    CHECK(rep.of(SolvType::ALGEBRAIC).verdict == Verdict::INAPPLICABLE);
    CHECK(rep.of(SolvType::INTEGRALS).verdict == Verdict::INAPPLICABLE);
}

TEST_CASE("check_corollary1") {
    // two rank-1 points, p = 2: threshold 1/2, norms 0.4 pass
    CMatrix b1(2, 2);
    b1(0, 1) = 0.4;
    LinearSystem sys;
    sys.dimension = 2;
    SingularPoint p0, p1;
    p0.location = PointLocation::finite(0.0);
    p0.poincare_rank = 1;
    p0.coeffs = {CMatrix{{1, 0}, {0, 2}}, b1};
    p1.location = PointLocation::finite(1.0);
    p1.poincare_rank = 1;
    p1.coeffs = {CMatrix{{3, 0}, {0, 4}}, -b1};
    sys.points = {p0, p1};
    CHECK(check_corollary1(sys, kTol));

    // zero coefficients always pass
    sys.points[0].coeffs[1] = CMatrix::zero(2, 2);
    sys.points[1].coeffs[1] = CMatrix::zero(2, 2);
    CHECK(check_corollary1(sys, kTol));

    // three points, p = 3: threshold 1/6, one norm 0.2 fails
    LinearSystem sys3 = ingest(fixture_document("sec4-example2"),
                               {{"a", cplx(1)}, {"b", cplx(1)}}, kTol);
    CMatrix big(3, 3);
    big(0, 0) = 0.2;
    sys3.points[1].coeffs[1] = big;
    CHECK_FALSE(check_corollary1(sys3, kTol));

    // wrong rank
    LinearSystem bad = example1(0.1, 0.2, 0.3);
    CHECK_THROWS_AS(check_corollary1(bad, kTol), RankNotOne);
}

TEST_CASE("machine report carries the full schema") {
    const LinearSystem sys = example1(0.1, 0.05, -0.05);
    const SolvabilityReport rep = classify(sys, kTol);
    const std::string text = report_json(sys, rep, kTol);
    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["dimension"] == 3);
    CHECK(j["points"].size() == 3);
    for (const auto& pt : j["points"]) {
        CHECK(pt.contains("location"));
        CHECK(pt.contains("rank"));
        CHECK(pt.contains("class"));
        CHECK(pt.contains("exponents"));
    }
    for (const char* key :
         {"threshold", "cond1_ok", "cond1prime_ok", "fuchsian_diff_ok", "generic"})
        CHECK(j["hypotheses"].contains(key));
    for (SolvType t : all_solv_types) {
        CHECK(j["verdicts"].contains(to_string(t)));
        CHECK(j["verdicts"][to_string(t)].contains("verdict"));
        CHECK(j["verdicts"][to_string(t)].contains("reason"));
    }
    CHECK(j["witnesses"].contains("P"));
    // byte-stable: a second serialization is identical
    CHECK(report_json(sys, classify(sys, kTol), kTol) == text);
}

#include "ldsolv/report.hpp"

#include <json.hpp>
#include <sstream>

namespace ldsolv {

using json = nlohmann::json;

namespace {

json loc_json(const PointLocation& loc) {
    if (loc.at_infinity) return "inf";
    return json::array({loc.value.real(), loc.value.imag()});
}

json matrix_json(const CMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string report_json(const LinearSystem& sys, const SolvabilityReport& rep,
                        const Tolerances& tol) {
    json j;
    j["dimension"] = sys.dimension;
    json pts = json::array();
    for (const auto& pe : rep.hypothesis.exponent_table) {
        json p;
        p["location"] = loc_json(pe.location);
        p["rank"] = pe.poincare_rank;
        p["class"] = to_string(pe.cls);
        json ex = json::array();
        for (const auto& lam : pe.exponents) ex.push_back(json::array({lam.real(), lam.imag()}));
        p["exponents"] = std::move(ex);
        p["cond1_margin"] = pe.cond1_margin;
        pts.push_back(std::move(p));
    }
    j["points"] = std::move(pts);
    json hyp;
    hyp["threshold"] =
        rep.hypothesis.threshold_defined ? json(rep.hypothesis.threshold) : json(nullptr);
    hyp["cond1_ok"] = rep.hypothesis.cond1_ok;
    hyp["cond1prime_ok"] = rep.hypothesis.cond1prime_ok;
    hyp["fuchsian_diff_ok"] = rep.hypothesis.fuchsian_diff_ok;
    hyp["generic"] = rep.hypothesis.generic;
    j["hypotheses"] = std::move(hyp);
    json verdicts;
    for (SolvType t : all_solv_types) {
        json v;
        v["verdict"] = to_string(rep.of(t).verdict);
        v["reason"] = rep.of(t).reason;
        verdicts[to_string(t)] = std::move(v);
    }
    j["verdicts"] = std::move(verdicts);
    json wit = json::object();
    if (rep.triangular_witness) wit["P"] = matrix_json(rep.triangular_witness->p_matrix);
    if (rep.diagonalizer) wit["C"] = matrix_json(*rep.diagonalizer);
    j["witnesses"] = std::move(wit);
    json tj;
    tj["eq_tol"] = tol.eq_tol;
    tj["rank_tol"] = tol.rank_tol;
    tj["rational_tol"] = tol.rational_tol;
    tj["rational_denominator_bound"] = tol.rational_denominator_bound;
    j["tolerances"] = std::move(tj);
    return j.dump(2) + "\n";
}

namespace {

void print_matrix(std::ostringstream& os, const CMatrix& m, const char* indent) {
    for (int i = 0; i < m.rows(); ++i) {
        os << indent << "[";
        for (int j = 0; j < m.cols(); ++j) {
            const cplx v = m(i, j);
            if (j) os << ", ";
            os << v.real();
            if (v.imag() != 0.0) os << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
        }
        os << "]\n";
    }
}

}  // namespace

std::string report_text(const LinearSystem& sys, const SolvabilityReport& rep,
                        const Tolerances& tol) {
    std::ostringstream os;
    os << "system: dimension " << sys.dimension << ", " << rep.hypothesis.exponent_table.size()
       << " singular point(s)\n";
    if (rep.scalar_system) {
        os << "scalar system; smallness threshold 1/n(p-1) undefined\n";
    } else {
        os << "smallness threshold 1/n(p-1) = " << rep.hypothesis.threshold << "\n";
        for (const auto& pe : rep.hypothesis.exponent_table) {
            os << "  point " << pe.location.str() << ": rank " << pe.poincare_rank << ", "
               << to_string(pe.cls) << ", exponents {";
            for (size_t i = 0; i < pe.exponents.size(); ++i) {
                if (i) os << ", ";
                os << pe.exponents[i].real();
                if (pe.exponents[i].imag() != 0.0)
                    os << (pe.exponents[i].imag() < 0 ? "-" : "+")
                       << std::abs(pe.exponents[i].imag()) << "i";
            }
            os << "}, margin to -threshold " << pe.cond1_margin << "\n";
        }
        os << "hypotheses: generic=" << (rep.hypothesis.generic ? "yes" : "no")
           << " cond1=" << (rep.hypothesis.cond1_ok ? "yes" : "no")
           << " cond1'=" << (rep.hypothesis.cond1prime_ok ? "yes" : "no")
           << " fuchsian_diffs=" << (rep.hypothesis.fuchsian_diff_ok ? "ok" : "violated") << "\n";
    }
    os << "verdicts:\n";
    for (SolvType t : all_solv_types)
        os << "  " << to_string(t) << ": " << to_string(rep.of(t).verdict) << " ("
           << rep.of(t).reason << ")\n";
    if (rep.triangular_witness) {
        os << "triangularizing P:\n";
        print_matrix(os, rep.triangular_witness->p_matrix, "  ");
    }
    if (rep.diagonalizer) {
        os << "diagonalizing C:\n";
        print_matrix(os, *rep.diagonalizer, "  ");
    }
    os << "tolerances: eq_tol=" << tol.eq_tol << " rank_tol=" << tol.rank_tol
       << " rational_tol=" << tol.rational_tol << "\n";
    return os.str();
}

}  // namespace ldsolv

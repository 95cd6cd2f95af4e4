#include "ldsolv/ingest.hpp"

#include <cctype>
#include <cmath>
#include <json.hpp>
#include <set>

namespace ldsolv {

using json = nlohmann::json;

namespace {

// expr   := term (('+'|'-') term)*
// term   := factor (('*'|'/') factor)*
// factor := ('+'|'-')* power          so -b^2 means -(b^2)
// power  := primary ('^' factor)?     right associative, integer exponents
// primary:= number | name | '(' expr ')'
class ExprParser {
public:
    ExprParser(const std::string& text, const std::map<std::string, cplx>& bindings,
               const std::string& context)
        : s_(text), bindings_(bindings), ctx_(context) {}

    cplx run() {
        cplx v = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    const std::string& s_;
    const std::map<std::string, cplx>& bindings_;
    const std::string& ctx_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, ctx_.empty() ? "expression '" + s_ + "'" : ctx_,
                         static_cast<long>(pos_));
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    cplx expr() {
        cplx v = term();
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }

    cplx term() {
        cplx v = factor();
        for (;;) {
            if (eat('*')) {
                v *= factor();
            } else if (eat('/')) {
                const cplx d = factor();
                if (std::abs(d) == 0.0) fail("division by zero");
                v /= d;
            } else {
                return v;
            }
        }
    }

    cplx factor() {
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        return power();
    }

    cplx power() {
        cplx base = primary();
        if (!eat('^')) return base;
        const cplx e = factor();
        if (std::abs(e.imag()) > 1e-9 || std::abs(e.real() - std::round(e.real())) > 1e-9)
            fail("exponent must be an integer");
        long n = std::lround(e.real());
        if (std::abs(n) > 64) fail("exponent out of range");
        cplx r = 1.0;
        const bool neg = n < 0;
        for (long i = 0; i < std::abs(n); ++i) r *= base;
        if (neg) {
            if (std::abs(r) == 0.0) fail("division by zero in negative power");
            r = 1.0 / r;
        }
        return r;
    }

    cplx primary() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            cplx v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        fail("expected a number, a name or '('");
    }

    cplx number() {
        const size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
            ++pos_;
        // exponent suffix: 1e-3, 2.5E+4
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    ++pos_;
            } else {
                pos_ = save;
            }
        }
        try {
            return cplx(std::stod(s_.substr(start, pos_ - start)), 0.0);
        } catch (const std::exception&) {
            pos_ = start;
            fail("malformed number");
        }
    }

    cplx name() {
        const size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '_'))
            ++pos_;
        const std::string id = s_.substr(start, pos_ - start);
        auto it = bindings_.find(id);
        if (it == bindings_.end()) {
            pos_ = start;
            fail("unknown name '" + id + "'");
        }
        return it->second;
    }
};

cplx parse_entry(const json& j, const std::map<std::string, cplx>& bindings,
                 const std::string& ctx) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array()) {
        if (j.size() != 2 || !j[0].is_number() || !j[1].is_number())
            throw ParseError("entry pair must be [re, im]", ctx);
        return cplx(j[0].get<double>(), j[1].get<double>());
    }
    if (j.is_string()) {
        const std::string text = j.get<std::string>();
        const cplx v = ExprParser(text, bindings, ctx).run();
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ParseError("entry evaluates to a non-finite value", ctx);
        return v;
    }
    throw ParseError("entry must be a number, [re, im] or an expression string", ctx);
}

CMatrix parse_matrix(const json& j, int p, const std::map<std::string, cplx>& bindings,
                     const std::string& ctx) {
    if (!j.is_array() || static_cast<int>(j.size()) != p)
        throw DimensionMismatch(ctx + " must have " + std::to_string(p) + " rows");
    CMatrix m(p, p);
    for (int i = 0; i < p; ++i) {
        const json& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != p)
            throw DimensionMismatch(ctx + " row " + std::to_string(i) + " must have " +
                                    std::to_string(p) + " entries");
        for (int k = 0; k < p; ++k)
            m(i, k) = parse_entry(row[k], bindings,
                                  ctx + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return m;
}

}  // namespace

cplx eval_expression(const std::string& text, const std::map<std::string, cplx>& bindings,
                     const std::string& context) {
    return ExprParser(text, bindings, context).run();
}

LinearSystem ingest(const std::string& document, const std::map<std::string, cplx>& bindings,
                    const Tolerances& tol) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_object()) throw ParseError("document must be a JSON object");
    if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
        throw ParseError("missing integer field 'dimension'");
    LinearSystem sys;
    sys.dimension = doc["dimension"].get<int>();
    if (sys.dimension < 1) throw DimensionMismatch("dimension must be >= 1");

    std::set<std::string> declared;
    if (doc.contains("parameters")) {
        if (!doc["parameters"].is_array()) throw ParseError("'parameters' must be an array");
        for (const auto& nj : doc["parameters"]) {
            if (!nj.is_string()) throw ParseError("parameter names must be strings");
            declared.insert(nj.get<std::string>());
        }
    }
    for (const auto& name : declared) {
        auto it = bindings.find(name);
        if (it == bindings.end()) throw UnboundParameter(name);
        sys.parameters[name] = it->second;
    }

    // points may be empty only for a system whose sole singularity is at
    // infinity (pure polynomial part)
    const json empty_points = json::array();
    const json& points = doc.contains("points") ? doc["points"] : empty_points;
    if (!points.is_array()) throw ParseError("'points' must be an array");
    int idx = 0;
    for (const auto& pj : points) {
        const std::string ctx = "points[" + std::to_string(idx) + "]";
        ++idx;
        if (!pj.is_object()) throw ParseError(ctx + " must be an object");
        SingularPoint pt;
        if (!pj.contains("location")) throw ParseError(ctx + " missing 'location'");
        const json& loc = pj["location"];
        if (loc.is_string() && loc.get<std::string>() == "inf") {
            pt.location = PointLocation::infinity();
        } else if (loc.is_array() && loc.size() == 2 && loc[0].is_number() && loc[1].is_number()) {
            pt.location = PointLocation::finite(cplx(loc[0].get<double>(), loc[1].get<double>()));
        } else {
            throw ParseError(ctx + ".location must be [re, im] or \"inf\"");
        }
        if (!pj.contains("rank") || !pj["rank"].is_number_integer())
            throw ParseError(ctx + " missing integer 'rank'");
        pt.poincare_rank = pj["rank"].get<int>();
        if (pt.poincare_rank < 0) throw DimensionMismatch(ctx + ".rank must be >= 0");
        if (!pj.contains("coeffs") || !pj["coeffs"].is_array())
            throw ParseError(ctx + " missing 'coeffs' array");
        if (static_cast<int>(pj["coeffs"].size()) != pt.poincare_rank + 1)
            throw DimensionMismatch(ctx + " needs rank+1 = " +
                                    std::to_string(pt.poincare_rank + 1) +
                                    " coefficient matrices, got " +
                                    std::to_string(pj["coeffs"].size()));
        int cidx = 0;
        for (const auto& mj : pj["coeffs"]) {
            pt.coeffs.push_back(parse_matrix(mj, sys.dimension, sys.parameters,
                                             ctx + ".coeffs[" + std::to_string(cidx++) + "]"));
        }
        sys.points.push_back(std::move(pt));
    }

    if (doc.contains("polynomial_part")) {
        if (!doc["polynomial_part"].is_array())
            throw ParseError("'polynomial_part' must be an array of matrices");
        int cidx = 0;
        for (const auto& mj : doc["polynomial_part"]) {
            sys.polynomial_part.push_back(parse_matrix(
                mj, sys.dimension, sys.parameters,
                "polynomial_part[" + std::to_string(cidx++) + "]"));
        }
    }
    if (!sys.polynomial_part.empty() && sys.has_explicit_infinity_point())
        throw ParseError("'polynomial_part' and an explicit point at infinity are exclusive");
    if (sys.points.empty() && sys.polynomial_part.empty())
        throw ParseError("a system needs at least one point or a polynomial part");

    // pairwise-distinct locations
    for (size_t i = 0; i < sys.points.size(); ++i)
        for (size_t j = i + 1; j < sys.points.size(); ++j) {
            const auto& a = sys.points[i].location;
            const auto& b = sys.points[j].location;
            if (a.at_infinity && b.at_infinity) throw DuplicatePoint("inf");
            if (!a.at_infinity && !b.at_infinity && approx_eq(a.value, b.value, tol))
                throw DuplicatePoint(a.str());
        }

    if (!sys.has_explicit_infinity_point() && sys.polynomial_part.empty()) {
        double scale = 0.0;
        for (const auto& p : sys.points) scale = std::max(scale, mat_norm1(p.residue()));
        sys.infinity_regular =
            mat_norm1(sys.finite_residue_sum()) <= tol.eq_tol * (1.0 + scale);
    } else {
        sys.infinity_regular = false;
    }
    return sys;
}

}  // namespace ldsolv

#include "ldsolv/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>
#include <sstream>

#include "ldsolv/classifier.hpp"
#include "ldsolv/ingest.hpp"
#include "ldsolv/lie.hpp"

namespace ldsolv {

using json = nlohmann::json;

namespace {

double evaluate_indicator(const std::string& document, const SweepSpec& spec, double value,
                          const Tolerances& tol) {
    std::map<std::string, cplx> bindings = spec.fixed_bindings;
    bindings[spec.parameter] = cplx(value, 0.0);
    const LinearSystem sys = ingest(document, bindings, tol);
    const std::vector<CMatrix> gens = coefficient_matrices(sys);
    if (spec.indicator == SweepIndicator::TRIANGULARIZABLE)
        return simultaneous_triangularize(gens, tol) ? 1.0 : 0.0;
    return cartan_pairing_indicator(lie_closure(gens, tol), tol);
}

/// Golden-section minimization of the pairing over [a, b]; returns the
/// best abscissa. Stops once the value sinks under `target` with the
/// interval already small, or when the interval is below 1e-9.
double refine_root(const std::string& document, const SweepSpec& spec, const Tolerances& tol,
                   double a, double b, double target) {
    const double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = evaluate_indicator(document, spec, x1, tol);
    double f2 = evaluate_indicator(document, spec, x2, tol);
    double xbest = f1 < f2 ? x1 : x2, fbest = std::min(f1, f2);
    for (int it = 0; it < 200; ++it) {
        if (b - a <= 1e-9) break;
        if (fbest <= target && b - a <= 1e-7) break;
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = evaluate_indicator(document, spec, x1, tol);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = evaluate_indicator(document, spec, x2, tol);
        }
        if (f1 < fbest) {
            fbest = f1;
            xbest = x1;
        }
        if (f2 < fbest) {
            fbest = f2;
            xbest = x2;
        }
    }
    return fbest <= target ? xbest : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SweepResult run_sweep(const std::string& document, const SweepSpec& spec, const Tolerances& tol) {
    if (spec.steps < 2) throw Error("sweep needs at least 2 steps");
    if (spec.fixed_bindings.count(spec.parameter))
        throw Error("swept parameter '" + spec.parameter + "' also appears in --fix");
    SweepResult out;
    const double h = (spec.stop - spec.start) / (spec.steps - 1);
    for (int i = 0; i < spec.steps; ++i) {
        SweepSample s;
        s.value = spec.start + h * i;
        try {
            s.indicator = evaluate_indicator(document, spec, s.value, tol);
        } catch (const Error& e) {
            s.ok = false;
            s.error = e.what();
        }
        out.samples.push_back(std::move(s));
    }
    if (spec.indicator == SweepIndicator::TRIANGULARIZABLE) return out;

    const double thr = 10.0 * tol.eq_tol;
    int good = 0, below = 0;
    for (const auto& s : out.samples)
        if (s.ok) {
            ++good;
            if (s.indicator <= thr) ++below;
        }
    if (good > 0 && below == good) {
        out.all_below_threshold = true;  // vanishes identically, no isolated roots
        return out;
    }

    // candidate cells: below-threshold samples and strict local minima
    auto fval = [&](int i) {
        return out.samples[i].ok ? out.samples[i].indicator
                                 : std::numeric_limits<double>::infinity();
    };
    std::vector<double> roots;
    int i = 0;
    const int n = spec.steps;
    std::vector<bool> used(n, false);
    while (i < n) {
        if (!out.samples[i].ok || fval(i) > thr) {
            ++i;
            continue;
        }
        int j = i;  // run of below-threshold samples
        int arg = i;
        while (j + 1 < n && out.samples[j + 1].ok && fval(j + 1) <= thr) {
            ++j;
            if (fval(j) < fval(arg)) arg = j;
        }
        const double a = out.samples[std::max(arg - 1, 0)].value;
        const double b = out.samples[std::min(arg + 1, n - 1)].value;
        const double r = refine_root(document, spec, tol, a, b, thr);
        if (!std::isnan(r)) roots.push_back(r);
        for (int k = i; k <= j; ++k) used[k] = true;
        i = j + 1;
    }
    for (int k = 1; k + 1 < n; ++k) {
        if (used[k] || !out.samples[k].ok) continue;
        if (fval(k) < fval(k - 1) && fval(k) < fval(k + 1)) {
            const double r = refine_root(document, spec, tol, out.samples[k - 1].value,
                                         out.samples[k + 1].value, thr);
            if (!std::isnan(r)) roots.push_back(r);
        }
    }
    std::sort(roots.begin(), roots.end());
    for (double r : roots)
        if (out.roots.empty() || r - out.roots.back() > 1e-7) out.roots.push_back(r);
    return out;
}

std::string sweep_json(const SweepSpec& spec, const SweepResult& result) {
    json j;
    j["parameter"] = spec.parameter;
    j["from"] = spec.start;
    j["to"] = spec.stop;
    j["steps"] = spec.steps;
    j["indicator"] =
        spec.indicator == SweepIndicator::CARTAN_PAIRING ? "cartan" : "triangularizable";
    json samples = json::array();
    for (const auto& s : result.samples) {
        json sj;
        sj["value"] = s.value;
        if (s.ok) {
            if (spec.indicator == SweepIndicator::TRIANGULARIZABLE)
                sj["indicator"] = s.indicator != 0.0;
            else
                sj["indicator"] = s.indicator;
        } else {
            sj["error"] = s.error;
        }
        samples.push_back(std::move(sj));
    }
    j["samples"] = std::move(samples);
    j["roots"] = result.roots;
    j["vanishes_identically"] = result.all_below_threshold;
    return j.dump(2) + "\n";
}

std::string sweep_text(const SweepSpec& spec, const SweepResult& result) {
    std::ostringstream os;
    os << "sweep " << spec.parameter << " in [" << spec.start << ", " << spec.stop << "], "
       << spec.steps << " samples, indicator "
       << (spec.indicator == SweepIndicator::CARTAN_PAIRING ? "cartan" : "triangularizable")
       << "\n";
    for (const auto& s : result.samples) {
        os << "  " << spec.parameter << " = " << s.value << ": ";
        if (!s.ok)
            os << "error: " << s.error;
        else if (spec.indicator == SweepIndicator::TRIANGULARIZABLE)
            os << (s.indicator != 0.0 ? "triangularizable" : "not triangularizable");
        else
            os << s.indicator;
        os << "\n";
    }
    if (result.all_below_threshold) {
        os << "indicator vanishes on the whole grid; no isolated roots\n";
    } else {
        os << "roots:";
        if (result.roots.empty()) os << " none";
        for (double r : result.roots) os << " " << r;
        os << "\n";
    }
    return os.str();
}

}  // namespace ldsolv

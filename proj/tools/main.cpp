#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ldsolv/classifier.hpp"
#include "ldsolv/fixtures.hpp"
#include "ldsolv/ingest.hpp"
#include "ldsolv/report.hpp"
#include "ldsolv/sweep.hpp"

namespace {

using namespace ldsolv;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::map<std::string, cplx> parse_bindings(const std::vector<std::string>& defs) {
    std::map<std::string, cplx> out;
    for (const auto& def : defs) {
        const size_t eq = def.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error("binding '" + def + "' must look like name=value");
        const std::string name = def.substr(0, eq);
        out[name] = eval_expression(def.substr(eq + 1), {}, "binding " + name);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solvability analysis of linear differential systems with small exponents"};
    app.require_subcommand(1);

    std::string file;
    std::vector<std::string> param_defs;
    bool as_json = false;
    double opt_eq_tol = -1.0, opt_rank_tol = -1.0;

    auto* analyze = app.add_subcommand("analyze", "classify one system document");
    analyze->add_option("file", file, "system document (JSON)")->required();
    analyze->add_option("-p,--param", param_defs, "parameter binding name=value");
    analyze->add_flag("--json", as_json, "emit the machine report");
    analyze->add_option("--tol", opt_eq_tol, "override eq_tol");
    analyze->add_option("--rank-tol", opt_rank_tol, "override rank_tol");

    std::string sweep_param;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_steps = 0;
    std::vector<std::string> fix_defs;
    std::string indicator_name = "cartan";

    auto* sweep = app.add_subcommand("sweep", "scan one parameter for the solvability locus");
    sweep->add_option("file", file, "system document (JSON)")->required();
    sweep->add_option("--param", sweep_param, "parameter to sweep")->required();
    sweep->add_option("--from", sweep_from, "grid start")->required();
    sweep->add_option("--to", sweep_to, "grid stop")->required();
    sweep->add_option("--steps", sweep_steps, "number of samples (>= 2)")->required();
    sweep->add_option("--fix", fix_defs, "fixed binding name=value");
    sweep->add_option("--indicator", indicator_name, "cartan | triangularizable");
    sweep->add_flag("--json", as_json, "emit the machine result");

    std::string fixture_name;
    auto* fixtures = app.add_subcommand("fixtures", "print a bundled example document");
    fixtures->add_option("name", fixture_name, "fixture name")->required();

    CLI11_PARSE(app, argc, argv);

    Tolerances tol;
    if (opt_eq_tol > 0.0) tol.eq_tol = opt_eq_tol;
    if (opt_rank_tol > 0.0) tol.rank_tol = opt_rank_tol;

    try {
        if (analyze->parsed()) {
            const LinearSystem sys = ingest(read_file(file), parse_bindings(param_defs), tol);
            const SolvabilityReport rep = classify(sys, tol);
            std::cout << (as_json ? report_json(sys, rep, tol) : report_text(sys, rep, tol));
            return 0;
        }
        if (sweep->parsed()) {
            SweepSpec spec;
            spec.parameter = sweep_param;
            spec.start = sweep_from;
            spec.stop = sweep_to;
            spec.steps = sweep_steps;
            spec.fixed_bindings = parse_bindings(fix_defs);
            if (indicator_name == "cartan") {
                spec.indicator = SweepIndicator::CARTAN_PAIRING;
            } else if (indicator_name == "triangularizable") {
                spec.indicator = SweepIndicator::TRIANGULARIZABLE;
            } else {
                throw Error("indicator must be 'cartan' or 'triangularizable'");
            }
            const SweepResult res = run_sweep(read_file(file), spec, tol);
            std::cout << (as_json ? sweep_json(spec, res) : sweep_text(spec, res));
            return 0;
        }
        if (fixtures->parsed()) {
            std::cout << fixture_document(fixture_name) << "\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "ldsolv: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ldsolv: internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

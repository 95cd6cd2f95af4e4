#pragma once

#include <map>
#include <string>
#include <vector>

#include "ldsolv/numeric.hpp"

namespace ldsolv {

enum class SweepIndicator { CARTAN_PAIRING, TRIANGULARIZABLE };

/// One-parameter grid scan of the solvability indicator.
struct SweepSpec {
    std::string parameter;
    double start = 0.0;
    double stop = 0.0;
    int steps = 2;  // number of samples, >= 2
    std::map<std::string, cplx> fixed_bindings;
    SweepIndicator indicator = SweepIndicator::CARTAN_PAIRING;
};

struct SweepSample {
    double value = 0.0;
    double indicator = 0.0;  // pairing value, or 1/0 for the boolean indicator
    bool ok = true;
    std::string error;
};

struct SweepResult {
    std::vector<SweepSample> samples;
    std::vector<double> roots;     // refined locations where the pairing vanishes
    bool all_below_threshold = false;  // indicator vanished on the whole grid
};

SweepResult run_sweep(const std::string& document, const SweepSpec& spec, const Tolerances& tol);

std::string sweep_json(const SweepSpec& spec, const SweepResult& result);
std::string sweep_text(const SweepSpec& spec, const SweepResult& result);

}  // namespace ldsolv

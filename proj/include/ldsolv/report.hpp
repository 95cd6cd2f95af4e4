#pragma once

#include <string>

#include "ldsolv/classifier.hpp"

namespace ldsolv {

/// Machine report (stable JSON, alphabetical keys).
std::string report_json(const LinearSystem& sys, const SolvabilityReport& rep,
                        const Tolerances& tol);

/// Human-readable report mirroring the verdict vocabulary.
std::string report_text(const LinearSystem& sys, const SolvabilityReport& rep,
                        const Tolerances& tol);

}  // namespace ldsolv

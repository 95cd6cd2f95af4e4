#pragma once

#include <map>
#include <string>

#include "ldsolv/system.hpp"

namespace ldsolv {

/// Parse a system document (UTF-8 JSON, schema in the README) and bind
/// every declared parameter, producing a fully numeric LinearSystem.
LinearSystem ingest(const std::string& document, const std::map<std::string, cplx>& bindings,
                    const Tolerances& tol);

/// Evaluate one entry expression (+ - * / ^, parentheses, decimal
/// literals, parameter names; integer exponents only). Exposed for tests
/// and for parsing CLI binding values.
cplx eval_expression(const std::string& text, const std::map<std::string, cplx>& bindings,
                     const std::string& context = {});

}  // namespace ldsolv

#pragma once

#include <string>
#include <vector>

namespace ldsolv {

/// Bundled example documents (parameters left symbolic). Throws
/// UnknownFixture for anything not in fixture_names().
std::string fixture_document(const std::string& name);

std::vector<std::string> fixture_names();

}  // namespace ldsolv

#pragma once

#include <string>
#include <vector>

namespace rcf {

struct SuiteResult {
    std::string name;
    int passed = 0;
    int total = 0;
    bool ok = false;
};

// Oracle suites: zero-forcing identities, closed-form phase vs dense grid
// search, coordinate sweep vs exhaustive enumeration, analytic derivatives
// vs central finite differences. Deterministic; `fast` shrinks instance
// counts for quick smoke checks.
std::vector<SuiteResult> run_validation(bool fast);

}  // namespace rcf

#pragma once

#include <string>
#include <vector>

namespace lnrg
{

struct CheckResult
{
    std::string suite; // module name
    std::string name;
    bool pass = false;
    std::string detail; // measured value against its bound
};

/// Every module invariant, evaluated in a fixed order. Deterministic.
std::vector<CheckResult> run_invariant_suite();

} // namespace lnrg

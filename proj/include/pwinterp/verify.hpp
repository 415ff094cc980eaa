#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pwinterp {

// One cross-check: a residual against its tolerance.
struct Check {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

enum class Suite { littmann, shifted, vaaler, dynamical, diffquot, twonode };

const char* suite_name(Suite s);
std::optional<Suite> suite_from_name(const std::string& name);

// Runs the closed-form cross-check suite for one scheme family.
std::vector<Check> run_suite(Suite s);

bool all_pass(const std::vector<Check>& checks);

}  // namespace pwinterp

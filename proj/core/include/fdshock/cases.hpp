#pragma once

#include "fdshock/solver.hpp"

#include <string>
#include <vector>

namespace fdshock {

/// One of the three reference scenarios: flux, upstream state, initial
/// data and the default moving-frame domain.
struct CaseDefinition {
    int id = 1;
    std::string title;
    std::vector<double> flux;  // constant term first
    double u_minus = 0.0;
    InitialData initial;
    SimConfig config;
};

/// Throws ValidationError for ids outside 1..3.
CaseDefinition builtin_case(int id);

}  // namespace fdshock

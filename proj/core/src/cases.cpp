#include "fdshock/cases.hpp"

#include "fdshock/error.hpp"

#include <string>

namespace fdshock {

CaseDefinition builtin_case(int id) {
    CaseDefinition c;
    c.id = id;
    switch (id) {
        case 1:
            c.title = "f(u) = u^2/2, u- = 2, oscillatory data";
            c.flux = {0.0, 0.0, 0.5};
            c.u_minus = 2.0;
            c.initial.kind = InitialData::Kind::Case1;
            break;
        case 2:
            c.title = "f(u) = u^3 - 2u^2 + 2u - 1, u- = 2, f'(0) = s";
            c.flux = {-1.0, 2.0, -2.0, 1.0};
            c.u_minus = 2.0;
            c.initial.kind = InitialData::Kind::Case2;
            break;
        case 3:
            c.title = "f(u) = -u^3 + 2u^2 - u/2, u- = 1, s = f'(u-)";
            c.flux = {0.0, -0.5, 2.0, -1.0};
            c.u_minus = 1.0;
            c.initial.kind = InitialData::Kind::Case3;
            break;
        default:
            throw ValidationError("case: unknown built-in case " + std::to_string(id) + " (expected 1, 2 or 3)");
    }
    c.config.z_left = -30.0;
    c.config.z_right = 20.0;
    c.config.n_cells = 800;
    c.config.t_end = 20.0;
    return c;
}

}  // namespace fdshock

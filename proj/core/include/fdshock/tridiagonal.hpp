#pragma once

#include "fdshock/error.hpp"

#include <cmath>
#include <span>
#include <sstream>
#include <vector>

namespace fdshock {

/// Thomas algorithm for lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
///
/// lower[0] and upper[n-1] are ignored. The matrix must be (weakly)
/// diagonally dominant; anything else is rejected with a SolverError
/// naming the offending row, since the elimination is then unstable.
inline std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                             std::span<const double> upper, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double off = (i > 0 ? std::abs(lower[i]) : 0.0) + (i + 1 < n ? std::abs(upper[i]) : 0.0);
        if (!(std::abs(diag[i]) >= off) || diag[i] == 0.0) {
            std::ostringstream os;
            os << "tridiagonal system is not diagonally dominant at row " << i << " (|diag| = " << std::abs(diag[i])
               << ", off-diagonal sum = " << off << ")";
            throw SolverError(os.str());
        }
    }
    std::vector<double> c(n);
    std::vector<double> x(n);
    double denom = diag[0];
    c[0] = n > 1 ? upper[0] / denom : 0.0;
    x[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower[i] * c[i - 1];
        c[i] = i + 1 < n ? upper[i] / denom : 0.0;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= c[i] * x[i + 1];
    }
    return x;
}

}  // namespace fdshock

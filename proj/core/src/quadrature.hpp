#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace fdshock::detail {

/// Adaptive 15-point Gauss-Kronrod on [a, b] with bisection until the
/// Kronrod/Gauss difference is below rel_tol times the panel L1 norm.
/// Each panel is mapped onto [-1, 1] before the fixed rule is applied,
/// so the error estimate and the tolerance share the same scale.
template <typename F>
double adaptive_gk(F f, double a, double b, double rel_tol, unsigned max_depth = 18) {
    using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto mapped = [&](double t) { return half * f(mid + half * t); };
    double error = 0.0;
    double l1 = 0.0;
    const double value = Rule::integrate(mapped, -1.0, 1.0, 0, rel_tol, &error, &l1);
    if (max_depth == 0 || error <= rel_tol * l1 || !(error == error)) {
        return value;
    }
    return adaptive_gk(f, a, mid, rel_tol, max_depth - 1) + adaptive_gk(f, mid, b, rel_tol, max_depth - 1);
}

}  // namespace fdshock::detail

#include "fdshock/hermite.hpp"

#include "fdshock/error.hpp"

#include <algorithm>
#include <cmath>

namespace fdshock {

MonotoneHermite::MonotoneHermite(std::vector<double> x, std::vector<double> y, std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(slopes)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n || m_.size() != n) {
        throw Error("MonotoneHermite: need at least two nodes with matching values and slopes");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) {
            throw Error("MonotoneHermite: abscissae must be strictly increasing");
        }
    }

    std::vector<bool> touched(n, false);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double secant = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
        if (secant == 0.0) {
            touched[k] = touched[k] || m_[k] != 0.0;
            touched[k + 1] = touched[k + 1] || m_[k + 1] != 0.0;
            m_[k] = 0.0;
            m_[k + 1] = 0.0;
            continue;
        }
        // Slopes of the wrong sign are flattened.
        if (m_[k] / secant < 0.0) {
            m_[k] = 0.0;
            touched[k] = true;
        }
        if (m_[k + 1] / secant < 0.0) {
            m_[k + 1] = 0.0;
            touched[k + 1] = true;
        }
        const double a = m_[k] / secant;
        const double b = m_[k + 1] / secant;
        const double r2 = a * a + b * b;
        if (r2 > 9.0) {
            const double tau = 3.0 / std::sqrt(r2);
            m_[k] = tau * a * secant;
            m_[k + 1] = tau * b * secant;
            touched[k] = true;
            touched[k + 1] = true;
        }
    }
    limited_ = static_cast<int>(std::count(touched.begin(), touched.end(), true));
}

std::size_t MonotoneHermite::interval(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(k, x_.size() - 2);
}

double MonotoneHermite::operator()(double x) const {
    const std::size_t k = interval(x);
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[k] + h10 * h * m_[k] + h01 * y_[k + 1] + h11 * h * m_[k + 1];
}

double MonotoneHermite::derivative(double x) const {
    const std::size_t k = interval(x);
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t;
    const double d00 = (6 * t2 - 6 * t) / h;
    const double d10 = 3 * t2 - 4 * t + 1;
    const double d01 = (-6 * t2 + 6 * t) / h;
    const double d11 = 3 * t2 - 2 * t;
    return d00 * y_[k] + d10 * m_[k] + d01 * y_[k + 1] + d11 * m_[k + 1];
}

}  // namespace fdshock

#pragma once

#include <span>
#include <vector>

namespace fdshock {

/// Piecewise cubic Hermite interpolant of monotone data.
///
/// Nodal slopes are supplied by the caller (typically exact derivatives)
/// and then limited with the Fritsch-Carlson circle criterion so that
/// every cubic piece stays inside the rectangle spanned by its two end
/// points. Abscissae must be strictly increasing.
class MonotoneHermite {
public:
    MonotoneHermite() = default;
    MonotoneHermite(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);

    double operator()(double x) const;
    double derivative(double x) const;

    std::span<const double> x() const { return x_; }
    std::span<const double> y() const { return y_; }
    /// Slopes after limiting.
    std::span<const double> slopes() const { return m_; }
    /// Number of nodes whose slope the limiter modified.
    int limited_count() const { return limited_; }

    bool empty() const { return x_.empty(); }
    double front_x() const { return x_.front(); }
    double back_x() const { return x_.back(); }

private:
    std::size_t interval(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
    int limited_ = 0;
};

}  // namespace fdshock

#pragma once

#include "fdshock/flux.hpp"
#include "fdshock/hermite.hpp"

#include <span>
#include <vector>

namespace fdshock {

/// Controls for build_profile(). Zero means "use the default".
struct ProfileOptions {
    /// Smallest tabulated U on the right tail. Default 1e-4 u-.
    double u_min = 0.0;
    /// Smallest tabulated deficit u- - U on the left tail. Default
    /// 1e-20 u- when the left tail is exponential, 1e-6 u- when algebraic.
    double deficit_min = 0.0;
    /// Total node count, split evenly between the two sides of the anchor.
    int n_nodes = 4001;
    /// Profile value pinned at z = 0. Default u_star = u- / 2.
    double anchor = 0.0;
    /// Relative tolerance of the adaptive Gauss-Kronrod rule per panel.
    double quadrature_tolerance = 1e-13;
};

struct ProfileDerivatives {
    double u = 0.0;
    double u_z = 0.0;
    double u_zz = 0.0;
};

/// Monotone tabulation of the shock profile U(z), z = 0 at U = anchor.
///
/// The table stores z(U) = int_anchor^U dy / h(y), h = U g(U), on a U grid
/// uniform in ln(x) + x / (0.05 x_anchor), x = U or u- - U: geometric toward
/// both end states, nearly uniform near the anchor. The left half is
/// parametrized by the deficit u- - U so that exponentially small deficits
/// keep their relative precision. Immutable after construction.
class ProfileTable {
public:
    const ShockData& shock() const { return shock_; }
    const ShockFunction& shock_function() const { return g_; }
    const FluxSpec& flux() const { return flux_; }

    /// Nodes sorted by increasing z (decreasing U).
    std::span<const double> z() const { return z_; }
    std::span<const double> u() const { return u_; }
    std::span<const double> deficit() const { return deficit_; }
    /// Exact U_z = h(U) at each node.
    std::span<const double> u_z() const { return uz_; }
    std::size_t size() const { return z_.size(); }
    std::size_t anchor_index() const { return anchor_index_; }

    double z_min() const { return z_.front(); }
    double z_max() const { return z_.back(); }
    double anchor() const { return u_[anchor_index_]; }

    /// U(z) for any real z; monotone cubic inside the table, matched
    /// asymptotic tails outside. Always in (0, u-).
    double eval(double z) const;
    /// u- - U(z), accurate far down the left tail.
    double deficit_at(double z) const;
    ProfileDerivatives derivatives(double z) const;

    /// H(U) = int_anchor^U dy / h(y) by quadrature from the nearest node.
    /// U must lie within the tabulated range.
    double coordinate_of(double u) const;
    /// Same as coordinate_of(u- - deficit) without forming U.
    double coordinate_of_deficit(double deficit) const;

    /// Number of nodes whose Hermite slope the monotonicity limiter changed.
    int limited_nodes() const { return left_.limited_count() + right_.limited_count(); }

private:
    friend ProfileTable build_profile(const ShockData&, const FluxSpec&, const ProfileOptions&);
    ProfileTable(const ShockData& shock, const FluxSpec& flux);

    double right_tail(double z) const;
    double left_tail_deficit(double z) const;
    double clamp_to_open_interval(double u) const;

    ShockData shock_;
    FluxSpec flux_;
    ShockFunction g_;
    double tolerance_ = 1e-13;
    std::vector<double> z_;
    std::vector<double> u_;
    std::vector<double> deficit_;
    std::vector<double> uz_;
    std::size_t anchor_index_ = 0;
    MonotoneHermite left_;   // deficit(z) on [z_min, 0]
    MonotoneHermite right_;  // U(z) on [0, z_max]
};

/// Throws ValidationError when the shock is invalid or the bounds do not
/// satisfy 0 < u_min < anchor < u- - deficit_min < u-, and Error when h
/// fails to be negative inside the tabulated range.
ProfileTable build_profile(const ShockData& shock, const FluxSpec& flux, const ProfileOptions& options = {});

double eval_profile(const ProfileTable& table, double z);

/// U_z = U g(U) and U_zz = U_z^2 / U + (f'(U) - s) U U_z at U = U(z).
ProfileDerivatives profile_derivatives(const ProfileTable& table, double z);

enum class Side { Left, Right };

struct RateReport {
    /// Right: exponent of U ~ z^p. Left: rate of u- - U ~ exp(rate z), or
    /// exponent of u- - U ~ |z|^p when the upstream state is degenerate.
    double fitted = 0.0;
    double predicted = 0.0;
    double relative_error = 0.0;
    int n_points = 0;
    bool exponential = false;
};

/// Least-squares tail fit against the asymptotic rate of the shock class.
/// Requires at least 20 table nodes inside the window.
RateReport decay_rate_check(const ProfileTable& table, Side side, double z_lo, double z_hi);

/// Default windows: right [50, 0.8 z_max], left [0.8 z_min, 0.2 z_min].
RateReport decay_rate_check(const ProfileTable& table, Side side);

/// Largest ratio |U_z| / U^2 (right) or |U_z| / (u- - U)^(1 + k-) (left)
/// over the tabulated nodes on that side of the anchor.
double derivative_bound_constant(const ProfileTable& table, Side side);

}  // namespace fdshock

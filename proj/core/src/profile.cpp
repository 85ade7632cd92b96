#include "fdshock/profile.hpp"

#include "fdshock/error.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fdshock {

namespace {

constexpr unsigned kMaxDepth = 18;
constexpr double kLinearScale = 0.05;

// int_a^b 1/h with h evaluated through `h_of`; h must stay negative.
template <typename H>
double integrate_reciprocal(H h_of, double a, double b, double tolerance) {
    bool bad = false;
    double bad_at = 0.0;
    auto integrand = [&](double y) {
        const double h = h_of(y);
        if (!(h < 0.0)) {
            bad = true;
            bad_at = y;
            return 0.0;
        }
        return 1.0 / h;
    };
    const double value = detail::adaptive_gk(integrand, a, b, tolerance, kMaxDepth);
    if (bad) {
        std::ostringstream os;
        os << "h(U) is not negative at quadrature point " << bad_at << "; the shock condition is violated";
        throw Error(os.str());
    }
    return value;
}

// n + 1 points from `from` down to `to`, uniform in ln(x) + x / scale:
// geometric toward `to`, roughly uniform near `from`.
std::vector<double> clustered(double from, double to, int n, double scale) {
    auto psi = [scale](double x) { return std::log(x) + x / scale; };
    const double p0 = psi(from);
    const double p1 = psi(to);
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    double l = std::log(from);
    for (int k = 0; k <= n; ++k) {
        const double target = p0 + (p1 - p0) * k / n;
        // psi is convex and increasing in ln x; Newton from above is monotone
        for (int it = 0; it < 100; ++it) {
            const double e = std::exp(l) / scale;
            const double step = (l + e - target) / (1.0 + e);
            l -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(l))) {
                break;
            }
        }
        out[static_cast<std::size_t>(k)] = std::exp(l);
    }
    out.front() = from;
    out.back() = to;
    return out;
}

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
};

Line least_squares(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    Line l;
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    return l;
}

}  // namespace

ProfileTable::ProfileTable(const ShockData& shock, const FluxSpec& flux)
    : shock_(shock), flux_(flux), g_(flux, shock) {}

ProfileTable build_profile(const ShockData& shock, const FluxSpec& flux, const ProfileOptions& options) {
    if (!shock.valid()) {
        throw ValidationError("cannot build a profile: the generalized shock condition fails");
    }
    const double um = shock.u_minus;
    const double anchor = options.anchor > 0.0 ? options.anchor : 0.5 * um;
    const double u_min = options.u_min > 0.0 ? options.u_min : 1e-4 * um;
    const double default_deficit = shock.k_minus == 0 ? 1e-20 * um : 1e-6 * um;
    const double d_min = options.deficit_min > 0.0 ? options.deficit_min : default_deficit;
    const double d_anchor = um - anchor;

    if (options.n_nodes < 64) {
        throw ValidationError("profile needs n_nodes >= 64");
    }
    if (!(u_min > 0.0 && u_min < anchor && anchor < um && d_min > 0.0 && d_min < d_anchor)) {
        std::ostringstream os;
        os << "profile bounds must satisfy 0 < u_min < anchor < u- - deficit_min < u-; got u_min=" << u_min
           << " anchor=" << anchor << " deficit_min=" << d_min << " u-=" << um;
        throw ValidationError(os.str());
    }

    ProfileTable t(shock, flux);
    t.tolerance_ = options.quadrature_tolerance;
    const ShockFunction& g = t.g_;

    const int n_right = (options.n_nodes - 1) / 2;
    const int n_left = options.n_nodes - 1 - n_right;

    // Left side, parametrized by deficit, integrated outward from the anchor.
    const std::vector<double> deficits = clustered(d_anchor, d_min, n_left, kLinearScale * d_anchor);
    std::vector<double> z_left(deficits.size());
    z_left[0] = 0.0;
    auto h_deficit = [&g](double e) { return g.h_at_deficit(e); };
    for (std::size_t k = 1; k < deficits.size(); ++k) {
        // dz = -de / h(u- - e)
        z_left[k] = z_left[k - 1] - integrate_reciprocal(h_deficit, deficits[k - 1], deficits[k], t.tolerance_);
    }

    const std::vector<double> values = clustered(anchor, u_min, n_right, kLinearScale * anchor);
    std::vector<double> z_right(values.size());
    z_right[0] = 0.0;
    auto h_value = [&g](double y) { return g.h(y); };
    for (std::size_t k = 1; k < values.size(); ++k) {
        z_right[k] = z_right[k - 1] + integrate_reciprocal(h_value, values[k - 1], values[k], t.tolerance_);
    }

    const std::size_t n = deficits.size() + values.size() - 1;
    t.z_.reserve(n);
    t.u_.reserve(n);
    t.deficit_.reserve(n);
    t.uz_.reserve(n);
    for (std::size_t k = deficits.size(); k-- > 1;) {
        t.z_.push_back(z_left[k]);
        t.deficit_.push_back(deficits[k]);
        t.u_.push_back(um - deficits[k]);
        t.uz_.push_back(g.h_at_deficit(deficits[k]));
    }
    t.anchor_index_ = t.z_.size();
    for (std::size_t k = 0; k < values.size(); ++k) {
        t.z_.push_back(z_right[k]);
        t.u_.push_back(values[k]);
        t.deficit_.push_back(k == 0 ? d_anchor : um - values[k]);
        t.uz_.push_back(k == 0 ? g.h_at_deficit(d_anchor) : g.h(values[k]));
    }
    for (std::size_t i = 1; i < t.z_.size(); ++i) {
        if (!(t.z_[i] > t.z_[i - 1])) {
            throw Error("profile nodes are not strictly increasing in z; tighten the grid");
        }
    }

    const std::size_t a = t.anchor_index_;
    std::vector<double> lz(t.z_.begin(), t.z_.begin() + static_cast<std::ptrdiff_t>(a) + 1);
    std::vector<double> ld(t.deficit_.begin(), t.deficit_.begin() + static_cast<std::ptrdiff_t>(a) + 1);
    std::vector<double> lm(a + 1);
    for (std::size_t i = 0; i <= a; ++i) {
        lm[i] = -t.uz_[i];
    }
    t.left_ = MonotoneHermite(std::move(lz), std::move(ld), std::move(lm));

    std::vector<double> rz(t.z_.begin() + static_cast<std::ptrdiff_t>(a), t.z_.end());
    std::vector<double> ru(t.u_.begin() + static_cast<std::ptrdiff_t>(a), t.u_.end());
    std::vector<double> rm(t.uz_.begin() + static_cast<std::ptrdiff_t>(a), t.uz_.end());
    t.right_ = MonotoneHermite(std::move(rz), std::move(ru), std::move(rm));
    return t;
}

double ProfileTable::clamp_to_open_interval(double u) const {
    const double um = shock_.u_minus;
    if (!(u < um)) {
        u = std::nextafter(um, 0.0);
    }
    if (!(u > 0.0)) {
        u = std::numeric_limits<double>::denorm_min();
    }
    return u;
}

double ProfileTable::right_tail(double z) const {
    // U^-(1+k+) is asymptotically linear in z; collocate at the last two nodes.
    const std::size_t n = z_.size();
    const double q = 1.0 + shock_.k_plus;
    const double a1 = std::pow(u_[n - 2], -q);
    const double a2 = std::pow(u_[n - 1], -q);
    const double slope = (a2 - a1) / (z_[n - 1] - z_[n - 2]);
    return std::pow(a2 + slope * (z - z_[n - 1]), -1.0 / q);
}

double ProfileTable::left_tail_deficit(double z) const {
    if (shock_.k_minus == 0) {
        // u- - U = C exp(lambda- z) matched at the outermost node.
        return deficit_[0] * std::exp(shock_.lambda_minus * (z - z_[0]));
    }
    // (u- - U)^-k- is asymptotically linear in z.
    const double k = static_cast<double>(shock_.k_minus);
    const double a0 = std::pow(deficit_[0], -k);
    const double a1 = std::pow(deficit_[1], -k);
    const double slope = (a1 - a0) / (z_[1] - z_[0]);
    return std::pow(a0 + slope * (z - z_[0]), -1.0 / k);
}

double ProfileTable::deficit_at(double z) const {
    if (z < z_.front()) {
        return left_tail_deficit(z);
    }
    if (z <= 0.0) {
        return left_(z);
    }
    return shock_.u_minus - eval(z);
}

double ProfileTable::eval(double z) const {
    if (z <= 0.0) {
        return clamp_to_open_interval(shock_.u_minus - deficit_at(z));
    }
    if (z <= z_.back()) {
        return clamp_to_open_interval(right_(z));
    }
    return clamp_to_open_interval(right_tail(z));
}

ProfileDerivatives ProfileTable::derivatives(double z) const {
    ProfileDerivatives d;
    double uz = 0.0;
    double dg = 0.0;
    if (z <= 0.0) {
        const double deficit = deficit_at(z);
        d.u = clamp_to_open_interval(shock_.u_minus - deficit);
        uz = g_.h_at_deficit(deficit);
        dg = g_.dg_at_deficit(deficit);
    } else {
        d.u = eval(z);
        uz = g_.h(d.u);
        dg = g_.dg(d.u);
    }
    d.u_z = uz;
    d.u_zz = uz * uz / d.u + dg * d.u * uz;
    return d;
}

double ProfileTable::coordinate_of(double u) const {
    const double um = shock_.u_minus;
    if (!(u > 0.0 && u < um)) {
        throw ValidationError("coordinate_of: U must lie in (0, u-)");
    }
    if (u > anchor()) {
        return coordinate_of_deficit(um - u);
    }
    const std::size_t a = anchor_index_;
    if (u < u_.back()) {
        throw ValidationError("coordinate_of: U below the tabulated range");
    }
    // Right part: u_ strictly decreasing from index a.
    auto first = u_.begin() + static_cast<std::ptrdiff_t>(a);
    auto it = std::lower_bound(first, u_.end(), u, [](double node, double value) { return node > value; });
    std::size_t k = static_cast<std::size_t>(it - u_.begin());
    if (k > a && (it == u_.end() || *it != u)) {
        --k;  // last node with u_[k] >= u
    }
    k = std::min(k, u_.size() - 1);
    auto h_value = [this](double y) { return g_.h(y); };
    return z_[k] + integrate_reciprocal(h_value, u_[k], u, tolerance_);
}

double ProfileTable::coordinate_of_deficit(double deficit) const {
    const std::size_t a = anchor_index_;
    if (!(deficit > 0.0) || deficit > deficit_[a]) {
        throw ValidationError("coordinate_of_deficit: deficit outside (0, u- - anchor]");
    }
    if (deficit < deficit_.front()) {
        throw ValidationError("coordinate_of_deficit: deficit below the tabulated range");
    }
    // Left part: deficit_ strictly increasing on [0, a].
    auto last = deficit_.begin() + static_cast<std::ptrdiff_t>(a) + 1;
    auto it = std::lower_bound(deficit_.begin(), last, deficit);
    std::size_t k = static_cast<std::size_t>(it - deficit_.begin());
    k = std::min(k, a);
    auto h_deficit = [this](double e) { return g_.h_at_deficit(e); };
    return z_[k] - integrate_reciprocal(h_deficit, deficit_[k], deficit, tolerance_);
}

double eval_profile(const ProfileTable& table, double z) { return table.eval(z); }

ProfileDerivatives profile_derivatives(const ProfileTable& table, double z) { return table.derivatives(z); }

RateReport decay_rate_check(const ProfileTable& table, Side side, double z_lo, double z_hi) {
    const ShockData& shock = table.shock();
    if (!shock.valid()) {
        throw ValidationError("decay_rate_check: invalid shock");
    }
    if (!(z_lo < z_hi)) {
        throw ValidationError("decay_rate_check: empty window");
    }
    if (side == Side::Right && z_lo <= 0.0) {
        throw ValidationError("decay_rate_check: right window must lie in z > 0");
    }
    if (side == Side::Left && z_hi >= 0.0) {
        throw ValidationError("decay_rate_check: left window must lie in z < 0");
    }
    if (z_lo < table.z_min() || z_hi > table.z_max()) {
        throw ValidationError("decay_rate_check: window exceeds the tabulated range");
    }

    std::vector<double> x;
    std::vector<double> y;
    const auto z = table.z();
    RateReport r;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] < z_lo || z[i] > z_hi) {
            continue;
        }
        if (side == Side::Right) {
            x.push_back(std::log(z[i]));
            y.push_back(std::log(table.u()[i]));
        } else if (shock.k_minus == 0) {
            x.push_back(z[i]);
            y.push_back(std::log(table.deficit()[i]));
        } else {
            x.push_back(std::log(-z[i]));
            y.push_back(std::log(table.deficit()[i]));
        }
    }
    if (x.size() < 20) {
        std::ostringstream os;
        os << "decay_rate_check: window [" << z_lo << ", " << z_hi << "] holds " << x.size()
           << " nodes, need at least 20";
        throw ValidationError(os.str());
    }
    r.n_points = static_cast<int>(x.size());
    r.fitted = least_squares(x, y).slope;
    if (side == Side::Right) {
        r.predicted = -1.0 / (1.0 + shock.k_plus);
    } else if (shock.k_minus == 0) {
        r.predicted = shock.lambda_minus;
        r.exponential = true;
    } else {
        r.predicted = -1.0 / shock.k_minus;
    }
    r.relative_error = std::abs(r.fitted - r.predicted) / std::abs(r.predicted);
    return r;
}

RateReport decay_rate_check(const ProfileTable& table, Side side) {
    if (side == Side::Right) {
        return decay_rate_check(table, side, 50.0, 0.8 * table.z_max());
    }
    return decay_rate_check(table, side, 0.8 * table.z_min(), 0.2 * table.z_min());
}

double derivative_bound_constant(const ProfileTable& table, Side side) {
    const std::size_t a = table.anchor_index();
    double c = 0.0;
    if (side == Side::Right) {
        for (std::size_t i = a; i < table.size(); ++i) {
            const double u = table.u()[i];
            c = std::max(c, std::abs(table.u_z()[i]) / (u * u));
        }
    } else {
        const double p = 1.0 + table.shock().k_minus;
        for (std::size_t i = 0; i <= a; ++i) {
            c = std::max(c, std::abs(table.u_z()[i]) / std::pow(table.deficit()[i], p));
        }
    }
    return c;
}

}  // namespace fdshock

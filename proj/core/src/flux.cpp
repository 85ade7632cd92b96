#include "fdshock/flux.hpp"

#include "fdshock/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fdshock {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using RationalPoly = std::vector<Rational>;  // constant term first

void trim(RationalPoly& p) {
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

Rational eval(const RationalPoly& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

RationalPoly derivative(const RationalPoly& p) {
    RationalPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) {
        d.push_back(p[i] * static_cast<int>(i));
    }
    trim(d);
    return d;
}

// Coefficients of p(center + e) in powers of e (repeated synthetic division).
RationalPoly taylor_shift(RationalPoly p, const Rational& center) {
    const std::size_t n = p.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = n - 1; i > k; --i) {
            p[i - 1] += center * p[i];
        }
    }
    return p;
}

// Divides p by (x - root) in place; returns the remainder p(root).
Rational deflate(RationalPoly& p, const Rational& root) {
    if (p.empty()) {
        return 0;
    }
    const std::size_t n = p.size();
    RationalPoly q(n - 1);
    Rational carry = 0;
    for (std::size_t i = n; i-- > 0;) {
        carry = carry * root + p[i];
        if (i > 0) {
            q[i - 1] = carry;
        }
    }
    p = std::move(q);
    return carry;
}

// Remainder of a / b (b nonzero).
RationalPoly remainder(RationalPoly a, const RationalPoly& b) {
    trim(a);
    const int db = static_cast<int>(b.size()) - 1;
    while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
        const int shift = static_cast<int>(a.size()) - 1 - db;
        const Rational factor = a.back() / b.back();
        for (int i = 0; i <= db; ++i) {
            a[i + shift] -= factor * b[i];
        }
        a.pop_back();
        trim(a);
    }
    return a;
}

int sign_changes(const std::vector<RationalPoly>& chain, const Rational& x) {
    int changes = 0;
    int last = 0;
    for (const auto& p : chain) {
        const Rational v = eval(p, x);
        const int sgn = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (sgn == 0) {
            continue;
        }
        if (last != 0 && sgn != last) {
            ++changes;
        }
        last = sgn;
    }
    return changes;
}

// Number of distinct real roots of p in (a, b]; requires p(a) != 0.
int sturm_count(const RationalPoly& p, const Rational& a, const Rational& b) {
    std::vector<RationalPoly> chain{p, derivative(p)};
    while (!chain.back().empty()) {
        RationalPoly r = remainder(chain[chain.size() - 2], chain.back());
        for (auto& c : r) {
            c = -c;
        }
        if (r.empty()) {
            break;
        }
        chain.push_back(std::move(r));
    }
    if (chain.back().empty()) {
        chain.pop_back();
    }
    return sign_changes(chain, a) - sign_changes(chain, b);
}

RationalPoly to_rational(std::span<const double> coefficients) {
    RationalPoly p;
    p.reserve(coefficients.size());
    for (double c : coefficients) {
        p.emplace_back(c);
    }
    trim(p);
    return p;
}

std::vector<double> to_double(const RationalPoly& p) {
    std::vector<double> out;
    out.reserve(p.size());
    for (const auto& c : p) {
        out.push_back(c.convert_to<double>());
    }
    return out;
}

Rational exact_speed(const FluxSpec& flux, double u_minus) {
    // (f(u-) - f(0)) / u- = sum_{j>=1} c_j u-^(j-1), no cancellation.
    const RationalPoly f = to_rational(flux.coefficients());
    const Rational um(u_minus);
    Rational s = 0;
    for (std::size_t j = f.size(); j-- > 1;) {
        s = s * um + f[j];
    }
    return s;
}

// g(u) = f(u) - f(0) - s u with exact coefficients.
RationalPoly exact_g(const FluxSpec& flux, const Rational& s) {
    RationalPoly g = to_rational(flux.coefficients());
    if (g.size() < 2) {
        g.resize(2, 0);
    }
    g[0] = 0;
    g[1] -= s;
    trim(g);
    return g;
}

// Maps a floating-point speed to the exact R-H speed when it is that
// speed's rounding; otherwise takes the double at face value.
Rational resolve_speed(const FluxSpec& flux, double s, double u_minus) {
    const Rational exact = exact_speed(flux, u_minus);
    if (exact.convert_to<double>() == s) {
        return exact;
    }
    return Rational(s);
}

void require_positive_state(double u_minus) {
    if (!(u_minus > 0.0) || !std::isfinite(u_minus)) {
        std::ostringstream os;
        os << "u_minus must be positive and finite, got " << u_minus;
        throw ValidationError(os.str());
    }
}

std::string format_rational(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    std::ostringstream os;
    os << num;
    if (den != 1) {
        os << '/' << den;
    }
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
    while (!coefficients_.empty() && coefficients_.back() == 0.0) {
        coefficients_.pop_back();
    }
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

double Polynomial::coefficient(int i) const {
    if (i < 0 || i > degree()) {
        return 0.0;
    }
    return coefficients_[static_cast<std::size_t>(i)];
}

double Polynomial::max_abs_coefficient() const {
    double m = 0.0;
    for (double c : coefficients_) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

Polynomial Polynomial::derivative() const {
    std::vector<double> d;
    for (std::size_t i = 1; i < coefficients_.size(); ++i) {
        d.push_back(coefficients_[i] * static_cast<double>(i));
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::taylor_shift(double center) const {
    return Polynomial(to_double(fdshock::taylor_shift(to_rational(coefficients_), Rational(center))));
}

// ------------------------------------------------------------------ FluxSpec

FluxSpec::FluxSpec(std::vector<double> coefficients) {
    for (double c : coefficients) {
        if (!std::isfinite(c)) {
            throw ValidationError("flux coefficients must be finite");
        }
    }
    poly_ = Polynomial(std::move(coefficients));
    if (poly_.degree() < 1) {
        throw ValidationError("flux must have degree >= 1");
    }
}

double FluxSpec::derivative_at(double u, int order) const {
    Polynomial p = poly_;
    for (int i = 0; i < order; ++i) {
        p = p.derivative();
    }
    return p(u);
}

std::string_view to_string(ShockClass c) {
    switch (c) {
        case ShockClass::Nondegenerate:
            return "Nondegenerate";
        case ShockClass::DegeneratePlus:
            return "DegeneratePlus";
        case ShockClass::DegenerateMinus:
            return "DegenerateMinus";
        case ShockClass::DegenerateBoth:
            return "DegenerateBoth";
        case ShockClass::Invalid:
            return "Invalid";
    }
    return "Invalid";
}

// ---------------------------------------------------------------- operations

double eval_flux(const FluxSpec& flux, double u) { return flux(u); }

double shock_speed(const FluxSpec& flux, double u_minus) {
    require_positive_state(u_minus);
    return exact_speed(flux, u_minus).convert_to<double>();
}

std::string shock_speed_exact(const FluxSpec& flux, double u_minus) {
    require_positive_state(u_minus);
    return format_rational(exact_speed(flux, u_minus));
}

double g_eval(const FluxSpec& flux, double s, double u_minus, double u) {
    (void)u_minus;
    // f(u) - f(0) = u * sum_{j>=1} c_j u^(j-1)
    const auto c = flux.coefficients();
    double slope = 0.0;
    for (std::size_t j = c.size(); j-- > 1;) {
        slope = slope * u + c[j];
    }
    return u * (slope - s);
}

bool check_shock_condition(const FluxSpec& flux, double s, double u_minus, int n_samples) {
    if (!(u_minus > 0.0) || !std::isfinite(s)) {
        return false;
    }
    n_samples = std::max(n_samples, 100);

    const Rational um(u_minus);
    RationalPoly q = exact_g(flux, resolve_speed(flux, s, u_minus));
    if (q.empty()) {
        return false;
    }
    // g = u (u - u-) q; both factors must divide exactly.
    if (deflate(q, 0) != 0 || deflate(q, um) != 0) {
        return false;
    }
    trim(q);
    if (q.empty()) {
        return false;
    }
    while (eval(q, 0) == 0) {
        deflate(q, 0);
    }
    // each extra factor (u - u-) is negative inside and flips the sign
    int flips = 0;
    while (eval(q, um) == 0) {
        deflate(q, um);
        ++flips;
    }
    // u (u - u-) < 0 inside, so g < 0 there iff q > 0 there.
    if (sturm_count(q, 0, um) != 0) {
        return false;
    }
    const Rational mid = eval(q, um / 2);
    if (flips % 2 == 0 ? mid <= 0 : mid >= 0) {
        return false;
    }

    for (int i = 1; i <= n_samples; ++i) {
        const double u = u_minus * static_cast<double>(i) / static_cast<double>(n_samples + 1);
        if (!(g_eval(flux, s, u_minus, u) < 0.0)) {
            return false;
        }
    }
    return true;
}

int degeneracy_order(const FluxSpec& flux, double s, double u_minus, Endpoint endpoint) {
    require_positive_state(u_minus);
    const RationalPoly g = exact_g(flux, resolve_speed(flux, s, u_minus));
    if (g.empty()) {
        throw ValidationError("g vanishes identically; the flux is linear with slope s");
    }
    const Rational center = endpoint == Endpoint::Plus ? Rational(0) : Rational(u_minus);
    // The j-th Taylor coefficient times j! is g^(j)(center).
    const RationalPoly shifted = taylor_shift(g, center);
    const double threshold = 1e-9 * (1.0 + flux.polynomial().max_abs_coefficient());
    Rational factorial = 1;
    for (std::size_t j = 1; j < shifted.size(); ++j) {
        factorial *= static_cast<int>(j);
        const double derivative = (shifted[j] * factorial).convert_to<double>();
        if (std::abs(derivative) >= threshold) {
            return static_cast<int>(j) - 1;
        }
    }
    throw ValidationError("all derivatives of g vanish at the end state");
}

ShockData analyze_shock(const FluxSpec& flux, double u_minus) {
    require_positive_state(u_minus);
    ShockData d;
    d.u_minus = u_minus;
    d.u_plus = 0.0;
    const Rational s = exact_speed(flux, u_minus);
    d.speed = s.convert_to<double>();
    d.speed_exact = format_rational(s);
    if (!check_shock_condition(flux, d.speed, u_minus)) {
        d.shock_class = ShockClass::Invalid;
        return d;
    }
    d.k_plus = degeneracy_order(flux, d.speed, u_minus, Endpoint::Plus);
    d.k_minus = degeneracy_order(flux, d.speed, u_minus, Endpoint::Minus);
    if (d.k_plus == 0 && d.k_minus == 0) {
        d.shock_class = ShockClass::Nondegenerate;
    } else if (d.k_minus == 0) {
        d.shock_class = ShockClass::DegeneratePlus;
    } else if (d.k_plus == 0) {
        d.shock_class = ShockClass::DegenerateMinus;
    } else {
        d.shock_class = ShockClass::DegenerateBoth;
    }
    if (d.k_minus == 0) {
        d.lambda_minus = u_minus * (flux.derivative_at(u_minus) - d.speed);
    }
    return d;
}

// ------------------------------------------------------------ ShockFunction

ShockFunction::ShockFunction(const FluxSpec& flux, const ShockData& shock)
    : u_minus_(shock.u_minus), speed_(shock.speed) {
    const Rational s = resolve_speed(flux, shock.speed, shock.u_minus);
    RationalPoly g = exact_g(flux, s);
    RationalPoly shifted = taylor_shift(g, Rational(shock.u_minus));
    // Exact R-H speed makes the constant term vanish; drop rounding residue.
    if (!shifted.empty()) {
        shifted[0] = 0;
    }
    trim(shifted);
    about_zero_ = Polynomial(to_double(g));
    about_minus_ = Polynomial(to_double(shifted));
    d_about_zero_ = about_zero_.derivative();
    d_about_minus_ = about_minus_.derivative();

    RationalPoly q = g;
    deflate(q, 0);
    deflate(q, Rational(shock.u_minus));
    trim(q);
    quotient_zero_ = Polynomial(to_double(q));
    quotient_minus_ = Polynomial(to_double(taylor_shift(q, Rational(shock.u_minus))));
}

double ShockFunction::quotient(double u) const {
    if (u > 0.5 * u_minus_) {
        return quotient_minus_(u - u_minus_);
    }
    return quotient_zero_(u);
}

double ShockFunction::g(double u) const {
    if (u > 0.5 * u_minus_) {
        return about_minus_(u - u_minus_);
    }
    return about_zero_(u);
}

double ShockFunction::g_at_deficit(double deficit) const {
    if (deficit < 0.5 * u_minus_) {
        return about_minus_(-deficit);
    }
    return about_zero_(u_minus_ - deficit);
}

double ShockFunction::h_at_deficit(double deficit) const {
    return (u_minus_ - deficit) * g_at_deficit(deficit);
}

double ShockFunction::dg(double u) const {
    if (u > 0.5 * u_minus_) {
        return d_about_minus_(u - u_minus_);
    }
    return d_about_zero_(u);
}

double ShockFunction::dg_at_deficit(double deficit) const {
    if (deficit < 0.5 * u_minus_) {
        return d_about_minus_(-deficit);
    }
    return d_about_zero_(u_minus_ - deficit);
}

}  // namespace fdshock

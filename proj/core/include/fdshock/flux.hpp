#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fdshock {

/// Dense real polynomial c0 + c1 x + ... + cd x^d.
///
/// Trailing zero coefficients are trimmed on construction so that
/// degree() always indexes the highest nonzero coefficient. The zero
/// polynomial has degree -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);

    double operator()(double x) const;

    int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
    bool is_zero() const { return coefficients_.empty(); }
    std::span<const double> coefficients() const { return coefficients_; }
    double coefficient(int i) const;
    double max_abs_coefficient() const;

    Polynomial derivative() const;

    /// Coefficients of p(center + e) as a polynomial in e.
    Polynomial taylor_shift(double center) const;

private:
    std::vector<double> coefficients_;
};

/// Polynomial flux f(u) = sum_i c_i u^i with degree >= 1.
class FluxSpec {
public:
    /// Coefficients are given constant term first. Throws ValidationError
    /// when the flux is constant or a coefficient is not finite.
    explicit FluxSpec(std::vector<double> coefficients);

    double operator()(double u) const { return poly_(u); }

    /// n-th derivative f^(n)(u), exact polynomial differentiation.
    double derivative_at(double u, int order = 1) const;

    Polynomial derivative() const { return poly_.derivative(); }
    const Polynomial& polynomial() const { return poly_; }
    int degree() const { return poly_.degree(); }
    std::span<const double> coefficients() const { return poly_.coefficients(); }

private:
    Polynomial poly_;
};

enum class ShockClass {
    Nondegenerate,    // f'(0) < s < f'(u-)
    DegeneratePlus,   // f'(0) = s
    DegenerateMinus,  // f'(u-) = s
    DegenerateBoth,   // both end states degenerate
    Invalid,          // generalized shock condition fails
};

std::string_view to_string(ShockClass c);

enum class Endpoint {
    Plus,   // the vanishing state u+ = 0
    Minus,  // the upstream state u-
};

/// End states, speed and degeneracy data of a shock connecting u- to u+ = 0.
struct ShockData {
    double u_minus = 0.0;
    double u_plus = 0.0;
    double speed = 0.0;
    /// Exact Rankine-Hugoniot speed as "p/q" (or "p" when integral),
    /// computed in rational arithmetic from the binary values of the
    /// flux coefficients and u-.
    std::string speed_exact;
    ShockClass shock_class = ShockClass::Invalid;
    int k_plus = 0;
    int k_minus = 0;
    /// u- (f'(u-) - s); zero when the upstream state is degenerate.
    double lambda_minus = 0.0;

    bool valid() const { return shock_class != ShockClass::Invalid; }
};

double eval_flux(const FluxSpec& flux, double u);

/// Rankine-Hugoniot speed (f(0) - f(u-)) / (0 - u-). Throws
/// ValidationError for u_minus <= 0.
double shock_speed(const FluxSpec& flux, double u_minus);

/// Same as shock_speed() but as an exact rational string.
std::string shock_speed_exact(const FluxSpec& flux, double u_minus);

/// g(u) = f(u) - f(0) - s u. Vanishes at both end states when s is the
/// Rankine-Hugoniot speed.
double g_eval(const FluxSpec& flux, double s, double u_minus, double u);

/// True iff g < 0 on (0, u-). Checks n_samples interior points and
/// confirms by exact Sturm root counting of g / (u (u - u-)) in rational
/// arithmetic. Returns false when s does not make g vanish at u-.
bool check_shock_condition(const FluxSpec& flux, double s, double u_minus, int n_samples = 1000);

/// Contact order k of g at an end state: g' = ... = g^(k) = 0 and
/// g^(k+1) != 0 there. A derivative counts as zero when its magnitude is
/// below 1e-9 (1 + max |c_i|). Throws ValidationError when g vanishes
/// identically.
int degeneracy_order(const FluxSpec& flux, double s, double u_minus, Endpoint endpoint);

/// Speed, shock condition, classification and lambda- in one pass.
ShockData analyze_shock(const FluxSpec& flux, double u_minus);

/// Accurate evaluation of g and h = U g near both end states.
///
/// g is held twice: expanded about 0 and about u-. Values in the upper
/// half of (0, u-) use the second expansion with the deficit u- - u, so
/// that g and h keep full relative precision on both tails. The deficit
/// entry points accept deficits far below the spacing of doubles near u-.
class ShockFunction {
public:
    ShockFunction(const FluxSpec& flux, const ShockData& shock);

    double g(double u) const;
    double g_at_deficit(double deficit) const;
    double h(double u) const { return u * g(u); }
    double h_at_deficit(double deficit) const;
    /// g'(u) = f'(u) - s.
    double dg(double u) const;
    double dg_at_deficit(double deficit) const;
    /// q(u) = g(u) / (u (u - u-)), the exact polynomial quotient. Positive
    /// inside (0, u-) for a valid shock.
    double quotient(double u) const;

    const Polynomial& about_zero() const { return about_zero_; }
    const Polynomial& about_minus() const { return about_minus_; }
    double u_minus() const { return u_minus_; }
    double speed() const { return speed_; }

private:
    Polynomial about_zero_;
    Polynomial about_minus_;
    Polynomial d_about_zero_;
    Polynomial d_about_minus_;
    Polynomial quotient_zero_;
    Polynomial quotient_minus_;
    double u_minus_;
    double speed_;
};

}  // namespace fdshock

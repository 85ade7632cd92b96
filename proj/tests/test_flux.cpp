#include "fdshock/error.hpp"
#include "fdshock/flux.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fdshock;

namespace {

const FluxSpec kCase1({0.0, 0.0, 0.5});
const FluxSpec kCase2({-1.0, 2.0, -2.0, 1.0});
const FluxSpec kCase3({0.0, -0.5, 2.0, -1.0});

// Direct evaluation of sum c_i u^i without Horner, as an independent reference.
double power_sum(const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        acc += c[i] * std::pow(u, static_cast<double>(i));
    }
    return acc;
}

}  // namespace

TEST(Flux, EvaluatesCaseThreeAtOne) {
    EXPECT_DOUBLE_EQ(eval_flux(kCase3, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(kCase1(2.0), 2.0);
}

TEST(Flux, HornerMatchesPowerSum) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    std::uniform_real_distribution<double> arg(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> c{coef(rng), coef(rng), coef(rng), coef(rng)};
        const FluxSpec f(c);
        const double u = arg(rng);
        EXPECT_NEAR(f(u), power_sum(c, u), 1e-12 * (1.0 + std::abs(power_sum(c, u))));
    }
}

TEST(Flux, RejectsConstantAndNonFiniteCoefficients) {
    EXPECT_THROW(FluxSpec({1.0}), ValidationError);
    EXPECT_THROW(FluxSpec({0.0, 0.0}), ValidationError);
    EXPECT_THROW(FluxSpec({0.0, NAN}), ValidationError);
    EXPECT_NO_THROW(FluxSpec({0.0, 1.0, 0.0}));
}

TEST(Flux, DerivativeIsExact) {
    const Polynomial d = kCase2.derivative();
    ASSERT_EQ(d.degree(), 2);
    EXPECT_EQ(d.coefficient(0), 2.0);
    EXPECT_EQ(d.coefficient(1), -4.0);
    EXPECT_EQ(d.coefficient(2), 3.0);
    EXPECT_EQ(kCase2.derivative_at(0.0, 1), 2.0);
    EXPECT_EQ(kCase2.derivative_at(1.0, 2), 2.0);
    EXPECT_EQ(kCase2.derivative_at(5.0, 3), 6.0);
    EXPECT_EQ(kCase2.derivative_at(5.0, 4), 0.0);
}

TEST(Flux, TaylorShiftReproducesPolynomial) {
    const Polynomial p(std::vector<double>{-1.0, 2.0, -2.0, 1.0});
    const Polynomial q = p.taylor_shift(2.0);
    for (double x : {-1.0, 0.0, 0.3, 2.0, 3.7}) {
        EXPECT_NEAR(q(x - 2.0), p(x), 1e-12);
    }
}

TEST(ShockSpeed, CasesAreExact) {
    EXPECT_EQ(shock_speed(kCase1, 2.0), 1.0);
    EXPECT_EQ(shock_speed(kCase2, 2.0), 2.0);
    EXPECT_EQ(shock_speed(kCase3, 1.0), 0.5);
    EXPECT_EQ(shock_speed_exact(kCase1, 2.0), "1");
    EXPECT_EQ(shock_speed_exact(kCase2, 2.0), "2");
    EXPECT_EQ(shock_speed_exact(kCase3, 1.0), "1/2");
}

TEST(ShockSpeed, MatchesChordSlope) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> state(0.1, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> c{coef(rng), coef(rng), coef(rng), coef(rng)};
        const double um = state(rng);
        const double chord = (power_sum(c, um) - power_sum(c, 0.0)) / um;
        EXPECT_NEAR(shock_speed(FluxSpec(c), um), chord, 1e-11 * (1.0 + std::abs(chord)));
    }
}

TEST(ShockSpeed, RejectsNonPositiveState) {
    EXPECT_THROW(shock_speed(kCase1, 0.0), ValidationError);
    EXPECT_THROW(shock_speed(kCase1, -1.0), ValidationError);
}

TEST(ShockFunctionG, VanishesAtEndStates) {
    EXPECT_EQ(g_eval(kCase1, 1.0, 2.0, 0.0), 0.0);
    EXPECT_EQ(g_eval(kCase1, 1.0, 2.0, 2.0), 0.0);
    EXPECT_EQ(g_eval(kCase2, 2.0, 2.0, 2.0), 0.0);
    EXPECT_EQ(g_eval(kCase3, 0.5, 1.0, 1.0), 0.0);
}

TEST(ShockFunctionG, MatchesFactoredForms) {
    for (double u : {0.1, 0.5, 1.0, 1.7}) {
        EXPECT_NEAR(g_eval(kCase1, 1.0, 2.0, u), 0.5 * u * u - u, 1e-14);
        EXPECT_NEAR(g_eval(kCase2, 2.0, 2.0, u), u * u * (u - 2.0), 1e-14);
    }
    for (double u : {0.1, 0.5, 0.9}) {
        EXPECT_NEAR(g_eval(kCase3, 0.5, 1.0, u), -u * (u - 1.0) * (u - 1.0), 1e-14);
    }
}

TEST(ShockCondition, HoldsForReferenceCases) {
    EXPECT_TRUE(check_shock_condition(kCase1, 1.0, 2.0));
    EXPECT_TRUE(check_shock_condition(kCase2, 2.0, 2.0));
    EXPECT_TRUE(check_shock_condition(kCase3, 0.5, 1.0));
}

TEST(ShockCondition, FailsForWrongSpeed) {
    EXPECT_FALSE(check_shock_condition(kCase1, 5.0, 2.0));
    EXPECT_FALSE(check_shock_condition(kCase1, 1.0 + 1e-3, 2.0));
}

TEST(ShockCondition, FailsForExpansiveJump) {
    // f = -u^2/2 gives g > 0 inside
    EXPECT_FALSE(check_shock_condition(FluxSpec({0.0, 0.0, -0.5}), -1.0, 2.0));
}

TEST(ShockCondition, FailsWhenGTouchesZeroInside) {
    // g(u) = u (u - 1)^2 (u - 2) = u^4 - 4u^3 + 5u^2 - 2u, s = 0
    const FluxSpec f({0.0, -2.0, 5.0, -4.0, 1.0});
    const double s = shock_speed(f, 2.0);
    EXPECT_NEAR(s, 0.0, 1e-15);
    EXPECT_FALSE(check_shock_condition(f, s, 2.0));
}

TEST(ShockCondition, InvalidInputsReturnFalse) {
    EXPECT_FALSE(check_shock_condition(kCase1, 1.0, 0.0));
    EXPECT_FALSE(check_shock_condition(kCase1, NAN, 2.0));
}

TEST(Degeneracy, ReferenceClassification) {
    const ShockData a = analyze_shock(kCase1, 2.0);
    EXPECT_EQ(a.shock_class, ShockClass::Nondegenerate);
    EXPECT_EQ(a.k_plus, 0);
    EXPECT_EQ(a.k_minus, 0);
    EXPECT_DOUBLE_EQ(a.lambda_minus, 2.0);  // u- (f'(u-) - s) = 2 (2 - 1)

    const ShockData b = analyze_shock(kCase2, 2.0);
    EXPECT_EQ(b.shock_class, ShockClass::DegeneratePlus);
    EXPECT_EQ(b.k_plus, 1);
    EXPECT_EQ(b.k_minus, 0);
    EXPECT_DOUBLE_EQ(b.lambda_minus, 8.0);  // 2 (6 - 2)
    EXPECT_EQ(kCase2.derivative_at(0.0), b.speed);

    const ShockData c = analyze_shock(kCase3, 1.0);
    EXPECT_EQ(c.shock_class, ShockClass::DegenerateMinus);
    EXPECT_EQ(c.k_plus, 0);
    EXPECT_EQ(c.k_minus, 1);
    EXPECT_EQ(kCase3.derivative_at(1.0), c.speed);
}

TEST(Degeneracy, OrderAtEachEndpoint) {
    EXPECT_EQ(degeneracy_order(kCase2, 2.0, 2.0, Endpoint::Plus), 1);
    EXPECT_EQ(degeneracy_order(kCase2, 2.0, 2.0, Endpoint::Minus), 0);
    EXPECT_EQ(degeneracy_order(kCase3, 0.5, 1.0, Endpoint::Minus), 1);
    // g = u^3 (u - 1): k+ = 2
    const FluxSpec f({0.0, 0.0, 0.0, -1.0, 1.0});
    EXPECT_EQ(degeneracy_order(f, shock_speed(f, 1.0), 1.0, Endpoint::Plus), 2);
}

TEST(Degeneracy, BothEndsDegenerate) {
    // g = -u^2 (u - 1)^2
    const FluxSpec f({0.0, 0.0, -1.0, 2.0, -1.0});
    const ShockData s = analyze_shock(f, 1.0);
    EXPECT_EQ(s.shock_class, ShockClass::DegenerateBoth);
    EXPECT_EQ(s.k_plus, 1);
    EXPECT_EQ(s.k_minus, 1);
}

TEST(Degeneracy, LinearFluxThrows) {
    EXPECT_THROW(degeneracy_order(FluxSpec({0.0, 3.0}), 3.0, 1.0, Endpoint::Plus), ValidationError);
}

TEST(Degeneracy, InvalidShockIsReported) {
    const ShockData s = analyze_shock(FluxSpec({0.0, 0.0, -0.5}), 2.0);
    EXPECT_EQ(s.shock_class, ShockClass::Invalid);
    EXPECT_FALSE(s.valid());
}

TEST(ShockFunction, ExpansionsAgree) {
    const ShockData s = analyze_shock(kCase2, 2.0);
    const ShockFunction g(kCase2, s);
    for (double u : {1e-6, 0.3, 0.99, 1.01, 1.7, 2.0 - 1e-9}) {
        EXPECT_NEAR(g.g(u), u * u * (u - 2.0), 1e-14);
        EXPECT_NEAR(g.g_at_deficit(2.0 - u), u * u * (u - 2.0), 1e-14);
        EXPECT_NEAR(g.dg(u), 3.0 * u * u - 4.0 * u, 1e-13);
        EXPECT_NEAR(g.quotient(u), u, 1e-13);
    }
    // relative precision deep in the left tail
    const double d = 1e-18;
    EXPECT_NEAR(g.g_at_deficit(d) / (-4.0 * d), 1.0, 1e-12);
}

// check_shock_condition implies f'(0) <= s <= f'(u-) on random cubics.
TEST(ShockProperties, LaxInequalitiesOnRandomCubics) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> state(0.2, 3.0);
    int valid = 0;
    int tried = 0;
    while (valid < 1000 && tried < 200000) {
        ++tried;
        const std::vector<double> c{coef(rng), coef(rng), coef(rng), coef(rng)};
        const FluxSpec f(c);
        const double um = state(rng);
        const double s = shock_speed(f, um);
        if (!check_shock_condition(f, s, um, 200)) {
            continue;
        }
        ++valid;
        const double tol = 1e-12 * (1.0 + f.polynomial().max_abs_coefficient());
        EXPECT_LE(f.derivative_at(0.0), s + tol);
        EXPECT_LE(s, f.derivative_at(um) + tol);
        // g(0) = g(u-) = 0
        EXPECT_NEAR(g_eval(f, s, um, 0.0), 0.0, tol);
        EXPECT_NEAR(g_eval(f, s, um, um), 0.0, 1e-10 * (1.0 + f.polynomial().max_abs_coefficient()));
    }
    EXPECT_EQ(valid, 1000);
}

// Adding a + b u or scaling by c > 0 leaves the class unchanged.
TEST(ShockProperties, ClassificationInvariance) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> scale(0.25, 4.0);
    const std::vector<std::pair<std::vector<double>, double>> bases{
        {{0.0, 0.0, 0.5}, 2.0}, {{-1.0, 2.0, -2.0, 1.0}, 2.0}, {{0.0, -0.5, 2.0, -1.0}, 1.0}};
    for (const auto& [c, um] : bases) {
        const ShockData ref = analyze_shock(FluxSpec(c), um);
        for (int trial = 0; trial < 50; ++trial) {
            const double a = coef(rng);
            const double b = coef(rng);
            const double k = scale(rng);
            std::vector<double> d = c;
            for (double& x : d) {
                x *= k;
            }
            d[0] += a;
            d[1] += b;
            const ShockData s = analyze_shock(FluxSpec(d), um);
            EXPECT_EQ(s.shock_class, ref.shock_class);
            EXPECT_EQ(s.k_plus, ref.k_plus);
            EXPECT_EQ(s.k_minus, ref.k_minus);
            EXPECT_NEAR(s.speed, k * ref.speed + b, 1e-12 * (1.0 + std::abs(s.speed)));
            EXPECT_NEAR(s.lambda_minus, k * ref.lambda_minus, 1e-10 * (1.0 + std::abs(s.lambda_minus)));
        }
    }
}

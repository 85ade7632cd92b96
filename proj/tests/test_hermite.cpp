#include "fdshock/hermite.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using fdshock::MonotoneHermite;

TEST(Hermite, ReproducesLinearData) {
    std::vector<double> x{0.0, 0.5, 1.7, 3.0, 4.2};
    std::vector<double> y;
    for (double v : x) {
        y.push_back(2.0 - 0.75 * v);
    }
    const MonotoneHermite h(x, y, std::vector<double>(x.size(), -0.75));
    for (double v = 0.0; v <= 4.2; v += 0.01) {
        EXPECT_NEAR(h(v), 2.0 - 0.75 * v, 1e-14);
        EXPECT_NEAR(h.derivative(v), -0.75, 1e-13);
    }
    EXPECT_EQ(h.limited_count(), 0);
}

TEST(Hermite, InterpolatesNodes) {
    const MonotoneHermite h({0.0, 1.0, 2.0}, {0.0, 1.0, 4.0}, {0.0, 2.0, 4.0});
    EXPECT_EQ(h(0.0), 0.0);
    EXPECT_EQ(h(1.0), 1.0);
    EXPECT_EQ(h(2.0), 4.0);
    EXPECT_NEAR(h(1.5), 2.25, 1e-14);  // cubic pieces reproduce x^2 with exact slopes
}

TEST(Hermite, LimitsOvershootingSlopes) {
    // step-like data with wild slopes
    const MonotoneHermite h({0.0, 1.0, 2.0, 3.0}, {0.0, 0.0, 1.0, 1.0}, {5.0, 5.0, 5.0, 5.0});
    EXPECT_GT(h.limited_count(), 0);
    double prev = h(0.0);
    for (double v = 0.0; v <= 3.0; v += 1e-3) {
        const double cur = h(v);
        EXPECT_GE(cur, -1e-15);
        EXPECT_LE(cur, 1.0 + 1e-15);
        EXPECT_GE(cur, prev - 1e-15);
        prev = cur;
    }
}

TEST(Hermite, RejectsBadAbscissae) {
    EXPECT_ANY_THROW(MonotoneHermite({0.0, 0.0, 1.0}, {0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}));
    EXPECT_ANY_THROW(MonotoneHermite({0.0, 1.0}, {0.0}, {1.0, 1.0}));
}

// Random monotone data with random nonnegative slopes: interpolant is
// monotone and stays inside every node rectangle.
TEST(HermiteProperties, RandomMonotoneData) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> step(0.01, 1.0);
    std::uniform_real_distribution<double> slope(0.0, 20.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + trial % 20;
        std::vector<double> x{0.0};
        std::vector<double> y{0.0};
        for (int i = 1; i < n; ++i) {
            x.push_back(x.back() + step(rng));
            y.push_back(y.back() + (trial % 3 == 0 && i % 2 == 0 ? 0.0 : step(rng)));
        }
        std::vector<double> m(n);
        for (double& v : m) {
            v = slope(rng);
        }
        const MonotoneHermite h(x, y, m);
        for (int i = 0; i + 1 < n; ++i) {
            double prev = y[i];
            for (int k = 1; k <= 50; ++k) {
                const double v = x[i] + (x[i + 1] - x[i]) * k / 50.0;
                const double cur = h(v);
                const double tol = 1e-12 * (1.0 + std::abs(y[i + 1]));
                EXPECT_GE(cur, prev - tol);
                EXPECT_GE(cur, y[i] - tol);
                EXPECT_LE(cur, y[i + 1] + tol);
                prev = cur;
            }
        }
    }
}

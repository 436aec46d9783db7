#include "nonlocal/errors.hpp"
#include "nonlocal/specfun.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace nonlocal;

TEST(FractionalOrder, RejectsClosedEnds)
{
    EXPECT_THROW(FractionalOrder(0.0), DomainError);
    EXPECT_THROW(FractionalOrder(1.0), DomainError);
    EXPECT_THROW(FractionalOrder(-0.3), DomainError);
    EXPECT_THROW(FractionalOrder(std::nan("")), DomainError);
    EXPECT_DOUBLE_EQ(FractionalOrder(0.4).value(), 0.4);
}

TEST(Gamma, SpotValues)
{
    EXPECT_NEAR(gamma_fn(1.0), 1.0, 1e-15);
    EXPECT_NEAR(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-15);
    // 50-digit reference
    EXPECT_NEAR(gamma_fn(1.75) / 0.91906252684888323385 - 1.0, 0.0, 1e-14);
    EXPECT_NEAR(gamma_fn(5.0), 24.0, 1e-12);
}

TEST(Gamma, RejectsNonpositive)
{
    EXPECT_THROW(gamma_fn(0.0), DomainError);
    EXPECT_THROW(gamma_fn(-1.5), DomainError);
}

TEST(Gamma, Recurrence)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.05, 20.0);
    for (int k = 0; k < 1000; ++k) {
        const double a = dist(rng);
        const double g1 = gamma_fn(a + 1.0);
        EXPECT_LE(std::abs(g1 - a * gamma_fn(a)) / g1, 1e-12) << "a=" << a;
    }
}

TEST(Gamma, Reflection)
{
    const double g = gamma_fn(0.5);
    EXPECT_NEAR(g * g / std::numbers::pi, 1.0, 1e-12);
}

TEST(Cns, SpotValues)
{
    EXPECT_NEAR(c_ns(1, FractionalOrder(0.5)), 1.0 / (2.0 * std::sqrt(std::numbers::pi)), 1e-14);
    EXPECT_NEAR(c_ns(1, FractionalOrder(0.5)), 0.2820947918, 1e-10);
    EXPECT_NEAR(c_ns(2, FractionalOrder(0.5)), 1.0 / std::numbers::pi, 1e-14);
    EXPECT_THROW(c_ns(4, FractionalOrder(0.5)), DomainError);
    EXPECT_THROW(c_ns(0, FractionalOrder(0.5)), DomainError);
}

TEST(Cns, VanishesAsOrderGoesToZero)
{
    double prev = c_ns(1, FractionalOrder(1e-2));
    for (double s : {1e-3, 1e-4, 1e-6}) {
        const double c = c_ns(1, FractionalOrder(s));
        EXPECT_LT(c, prev);
        prev = c;
    }
    EXPECT_LT(prev, 1e-5);
}

TEST(Cns, ClassicalAtHalf)
{
    // s 4^s Gamma(1) / (sqrt(pi) Gamma(1/2)) = 1/pi for n = 1, s = 1/2
    EXPECT_NEAR(c_ns_classical(1, FractionalOrder(0.5)), 1.0 / std::numbers::pi, 1e-14);
}

TEST(TailConstant, Table)
{
    const double pi = std::numbers::pi;
    EXPECT_EQ(TailConstant::for_dimension(1).k_n, 2.0);
    EXPECT_EQ(TailConstant::for_dimension(2).k_n, 2.0 * pi);
    EXPECT_EQ(TailConstant::for_dimension(3).k_n, 4.0 * pi);
    for (int n = 1; n <= 3; ++n) {
        const auto t = TailConstant::for_dimension(n);
        EXPECT_EQ(t.K_n, 4.0 * t.k_n);
    }
    EXPECT_THROW(TailConstant::for_dimension(5), DomainError);
}

TEST(TailConstant, Values)
{
    EXPECT_NEAR(tail_integral_constant(1, FractionalOrder(0.5), 1.0), 4.0, 1e-14);
    EXPECT_NEAR(tail_integral_constant(3, FractionalOrder(0.5), 1.0), 8.0 * std::numbers::pi, 1e-13);
    EXPECT_THROW(tail_integral_constant(1, FractionalOrder(0.5), 0.0), DomainError);
    EXPECT_THROW(tail_integral_constant(1, FractionalOrder(0.5), -2.0), DomainError);
}

TEST(TailConstant, Scaling)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> sd(0.01, 0.99), ld(0.05, 200.0);
    for (int k = 0; k < 200; ++k) {
        const FractionalOrder s(sd(rng));
        const double lam = ld(rng);
        const int n = 1 + k % 3;
        const double t = tail_integral_constant(n, s, lam);
        EXPECT_NEAR(t * s * std::pow(lam, 2.0 * s), TailConstant::for_dimension(n).k_n,
                    1e-13 * TailConstant::for_dimension(n).k_n);
        EXPECT_NEAR(tail_integral_constant(n, s, 2.0 * lam) / t, std::pow(2.0, -2.0 * s), 1e-13);
    }
}

TEST(TheoremBound, Values)
{
    const FractionalOrder s(0.5);
    // K_1 / (C1^2 s (lambda - I)^{2s}) = 8 / 0.5
    EXPECT_NEAR(theorem_bound(1, s, 2.0, 1.0, 1.0, 1.0), 16.0, 1e-14);
    EXPECT_EQ(theorem_bound(1, s, 2.0, 1.0, 0.0, 1.0), 0.0);
    EXPECT_THROW(theorem_bound(1, s, 1.0, 1.0, 1.0, 1.0), DomainError);
    EXPECT_THROW(theorem_bound(1, s, 0.5, 1.0, 1.0, 1.0), DomainError);
}

TEST(TheoremBound, PowerLawAndMonotone)
{
    const FractionalOrder s(0.4);
    const double I = 1.0;
    double prev = theorem_bound(1, s, 1.5, I, 2.0);
    for (double lam = 2.0; lam < 300.0; lam *= 1.7) {
        const double b = theorem_bound(1, s, lam, I, 2.0);
        EXPECT_LT(b, prev);
        prev = b;
    }
    const double l1 = 3.0, l2 = 11.0;
    EXPECT_NEAR(theorem_bound(1, s, l2, I, 1.0) / theorem_bound(1, s, l1, I, 1.0),
                std::pow((l1 - I) / (l2 - I), 2.0 * s), 1e-14);
}

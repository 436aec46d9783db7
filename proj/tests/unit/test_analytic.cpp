#include "nonlocal/analytic.hpp"
#include "nonlocal/errors.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>

using namespace nonlocal;

namespace {

// u for f = x on (-1, 1): x (1 - x^2)^s Gamma(3/2) / (4^s Gamma(1+s) Gamma(3/2+s))
double odd_closed_form(double x, double s)
{
    return x * std::pow(1.0 - x * x, s) * std::tgamma(1.5) /
           (std::pow(4.0, s) * std::tgamma(1.0 + s) * std::tgamma(1.5 + s));
}

} // namespace

TEST(ConstSource, Values)
{
    EXPECT_NEAR(exact_u_const_f(0.0, 1, FractionalOrder(0.5)), 1.0, 1e-15);
    // 30-digit references
    EXPECT_NEAR(exact_u_const_f(0.0, 1, FractionalOrder(0.75)), 0.75225277806367504926, 1e-14);
    EXPECT_NEAR(exact_u_const_f(0.0, 1, FractionalOrder(0.4)), 1.07367127403083432794, 1e-14);
    EXPECT_EQ(exact_u_const_f(1.0, 1, FractionalOrder(0.4)), 0.0);
    EXPECT_EQ(exact_u_const_f(-1.0, 1, FractionalOrder(0.4)), 0.0);
    EXPECT_EQ(exact_u_const_f(1.7, 1, FractionalOrder(0.4)), 0.0);
    for (double x = -0.99; x < 1.0; x += 0.03) {
        EXPECT_GT(exact_u_const_f(x, 1, FractionalOrder(0.3)), 0.0);
    }
    const std::array<double, 2> p{0.3, 0.4};
    EXPECT_NEAR(exact_u_const_f(p, 2, FractionalOrder(0.5)),
                0.5 * std::tgamma(1.0) / (std::tgamma(1.5) * std::tgamma(1.5)) * std::sqrt(0.75), 1e-14);
}

TEST(R0, Values)
{
    EXPECT_NEAR(r0(0.0, 0.5, 1.0), 3.0, 1e-15);
    EXPECT_EQ(r0(0.2, -0.7, 1.0), r0(-0.7, 0.2, 1.0));
    EXPECT_EQ(r0(0.2, 1.0, 1.0), 0.0);
    EXPECT_TRUE(std::isinf(r0(0.3, 0.3, 1.0)));
}

TEST(RadialIntegral, HalfOrderClosedForm)
{
    const QuadConfig q{4, 1e-12, 1e-15, 20000};
    EXPECT_NEAR(greens_radial_integral(3.0, 1, FractionalOrder(0.5), q), 2.63391579384963341725, 1e-10);
    for (double r : {1e-6, 0.01, 0.7, 20.0, 1e4}) {
        EXPECT_NEAR(greens_radial_integral(r, 1, FractionalOrder(0.5), q), 2.0 * std::asinh(std::sqrt(r)),
                    1e-9 * 2.0 * std::asinh(std::sqrt(r)));
    }
    EXPECT_EQ(greens_radial_integral(0.0, 1, FractionalOrder(0.5), q), 0.0);
}

TEST(Greens, SymmetryAndBoundary)
{
    const auto cfg = GreensConfig::printed(1, FractionalOrder(0.4));
    EXPECT_NEAR(greens_G(0.3, -0.6, cfg), greens_G(-0.6, 0.3, cfg), 1e-13);
    EXPECT_THROW(greens_G(0.1, 0.1, cfg), SingularityError);
    EXPECT_THROW(greens_G(0.1, 1.5, cfg), DomainError);
    double prev = greens_G(0.0, 0.9, cfg);
    for (double y : {0.99, 0.999, 0.99999}) {
        const double g = greens_G(0.0, y, cfg);
        EXPECT_LT(g, prev);
        prev = g;
    }
    EXPECT_LT(prev, 1e-2 * greens_G(0.0, 0.5, cfg));
}

TEST(Greens, CalibrationRatio)
{
    for (double s : {0.4, 0.5, 0.75}) {
        const auto cal = calibrate_greens(1, FractionalOrder(s));
        EXPECT_NEAR(cal.ratio, std::pow(s / 2.0, 2.0 * s), 1e-9) << "s=" << s;
        EXPECT_LE(cal.max_ratio_drift, 1e-6);
        EXPECT_EQ(cal.probes.size(), 6u);
    }
}

TEST(Greens, ConstantSourceThroughGreen)
{
    for (double s : {0.4, 0.75}) {
        const auto cfg = calibrated_greens_config(1, FractionalOrder(s));
        for (double x : {0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75}) {
            const double u = exact_u_via_green(x, [](double) { return 1.0; }, cfg);
            EXPECT_NEAR(u / exact_u_const_f(x, 1, FractionalOrder(s)), 1.0, 1e-6) << "s=" << s << " x=" << x;
        }
    }
}

TEST(Greens, OddSourceMatchesClosedForm)
{
    for (double s : {0.25, 0.4, 0.5, 0.75}) {
        const auto cfg = calibrated_greens_config(1, FractionalOrder(s));
        for (double x : {0.1, 0.5, 0.8}) {
            const double u = exact_u_via_green(x, [](double y) { return y; }, cfg);
            EXPECT_NEAR(u / odd_closed_form(x, s), 1.0, 1e-6) << "s=" << s << " x=" << x;
            EXPECT_NEAR(exact_u_via_green(-x, [](double y) { return y; }, cfg), -u, 1e-9);
        }
        EXPECT_NEAR(exact_u_via_green(0.0, [](double y) { return y; }, cfg), 0.0, 1e-12);
    }
}

TEST(Greens, OddSourceRegressionValue)
{
    // self-oracle at rel tol 1e-10, frozen
    const auto cfg = calibrated_greens_config(1, FractionalOrder(0.75));
    EXPECT_NEAR(exact_u_via_green(0.5, [](double y) { return y; }, cfg), 0.1212522324657, 1e-11);
}

TEST(Greens, EvenSourceIsEven)
{
    const auto cfg = calibrated_greens_config(1, FractionalOrder(0.4));
    auto f = [](double y) { return 1.0 + y * y; };
    for (double x : {0.2, 0.6}) {
        EXPECT_NEAR(exact_u_via_green(x, f, cfg), exact_u_via_green(-x, f, cfg), 1e-9);
    }
    EXPECT_EQ(exact_u_via_green(1.0, f, cfg), 0.0);
}

TEST(Greens, ConfigValidation)
{
    GreensConfig bad = GreensConfig::printed(1, FractionalOrder(0.5));
    bad.R = -1.0;
    EXPECT_THROW(bad.validate(), DomainError);
    EXPECT_THROW(greens_constant_printed(4, FractionalOrder(0.5)), DomainError);
    EXPECT_NEAR(greens_constant_printed(1, FractionalOrder(0.5)),
                std::pow(0.5, -1.0) * std::tgamma(0.5) / (std::sqrt(M_PI) * std::pow(std::tgamma(0.5), 2)), 1e-14);
}

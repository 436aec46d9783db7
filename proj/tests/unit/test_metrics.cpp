#include "nonlocal/errors.hpp"
#include "nonlocal/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace nonlocal;

namespace {

std::vector<double> random_free(int n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) {
        x = ud(rng);
    }
    return v;
}

} // namespace

TEST(L2Error, Values)
{
    const auto mesh = make_mesh(16, 0.5, 0.0);
    const auto z = FEFunction::zero(mesh);
    // squared integrand is 1 - x^2, integrated exactly
    EXPECT_NEAR(l2_error_omega(z, [](double x) { return std::sqrt(1.0 - x * x); }), std::sqrt(4.0 / 3.0), 1e-14);
    std::mt19937_64 rng(2);
    const auto f = FEFunction::from_free_dofs(mesh, random_free(15, rng));
    EXPECT_NEAR(l2_error_omega(f, [&](double x) { return f(x); }), 0.0, 1e-15);
}

TEST(L2Error, HomogeneityAndTriangle)
{
    const auto mesh = make_mesh(12, 1.0, 0.5);
    std::mt19937_64 rng(4);
    auto ref = [](double x) { return std::cos(x); };
    for (int t = 0; t < 20; ++t) {
        const auto a = FEFunction::from_free_dofs(mesh, random_free(11, rng));
        const auto b = FEFunction::from_free_dofs(mesh, random_free(11, rng));
        const auto c = FEFunction::from_free_dofs(mesh, random_free(11, rng));
        EXPECT_NEAR(l2_error_omega(a.scaled(2.0), [&](double x) { return 2.0 * ref(x); }),
                    2.0 * l2_error_omega(a, ref), 1e-13);
        const double ab = l2_difference(a, b), bc = l2_difference(b, c), ac = l2_difference(a, c);
        EXPECT_NEAR(ab, l2_difference(b, a), 1e-15);
        EXPECT_LE(ac, ab + bc + 1e-14);
        EXPECT_NEAR(ab, l2_error_omega(a, [&](double x) { return b(x); }), 1e-13);
    }
}

TEST(L2Difference, DifferentMeshes)
{
    const auto fine = make_mesh(8, 0.5, 0.0);
    const auto coarse = make_mesh(4, 0.5, 0.0);
    // both interpolate the same piecewise-linear tent on the coarse grid
    const auto a = FEFunction::from_free_dofs(coarse, std::vector<double>{0.5, 1.0, 0.5});
    const auto b = FEFunction::from_free_dofs(fine, std::vector<double>{0.25, 0.5, 0.75, 1.0, 0.75, 0.5, 0.25});
    EXPECT_NEAR(l2_difference(a, b), 0.0, 1e-15);
    const auto z = FEFunction::zero(fine);
    // integral of the tent squared: 2/3
    EXPECT_NEAR(l2_difference(a, z), std::sqrt(2.0 / 3.0), 1e-15);
}

TEST(EnergyError, QuadraticForm)
{
    const auto mesh = make_mesh(16, 1.0, 0.0);
    const KernelSpec spec(1, FractionalOrder(0.4), 1.0);
    const auto sys = assemble_system(mesh, spec, [](double) { return 1.0; }, QuadConfig{});
    std::mt19937_64 rng(6);
    EXPECT_EQ(energy_error(FEFunction::zero(mesh), sys), 0.0);
    for (int t = 0; t < 10; ++t) {
        const auto v = random_free(15, rng);
        const auto e = FEFunction::from_free_dofs(mesh, v);
        const Eigen::Map<const Eigen::VectorXd> ev(v.data(), 15);
        const double en = energy_error(e, sys);
        EXPECT_NEAR(en * en, ev.dot(sys.A * ev), 1e-13 * en * en);
        EXPECT_NEAR(energy_error(e.scaled(-3.0), sys), 3.0 * en, 1e-13 * en);
    }
}

TEST(EnergyError, MonotoneInRadius)
{
    const auto mesh = make_mesh(16, 2.0, 0.0);
    const auto f = [](double) { return 1.0; };
    const auto s1 = assemble_system(mesh, KernelSpec(1, FractionalOrder(0.75), 0.5), f, QuadConfig{});
    const auto s2 = assemble_system(mesh, KernelSpec(1, FractionalOrder(0.75), 2.0), f, QuadConfig{});
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        const auto e = FEFunction::from_free_dofs(mesh, random_free(15, rng));
        EXPECT_GE(energy_error(e, s2), energy_error(e, s1) * (1 - 1e-9));
    }
}

TEST(EnergyError, NegativeFormIsReported)
{
    const auto mesh = make_mesh(4, 0.5, 0.0);
    auto sys = assemble_system(mesh, KernelSpec(1, FractionalOrder(0.5), 0.5), [](double) { return 1.0; },
                               QuadConfig{});
    sys.A = -sys.A;
    const auto e = FEFunction::from_free_dofs(mesh, std::vector<double>{1.0, 0.5, 1.0});
    EXPECT_THROW(energy_error(e, sys), InternalConsistencyError);
}

TEST(ObservedRate, Examples)
{
    const std::vector<std::pair<double, double>> h{{0.125, 6.92e-2}, {0.0625, 4.74e-2}};
    EXPECT_NEAR(observed_rate(h)[0], 0.546, 5e-4);
    const std::vector<std::pair<double, double>> lam{{8.0, 1.11e-2}, {16.0, 3.90e-3}};
    EXPECT_NEAR(observed_rate(lam)[0], 1.509, 5e-4);

    std::vector<std::pair<double, double>> sq;
    for (int k = 0; k < 5; ++k) {
        const double hk = std::ldexp(1.0, -k);
        sq.emplace_back(hk, 3.7 * hk * hk);
    }
    for (double r : observed_rate(sq)) {
        EXPECT_NEAR(r, 2.0, 1e-13);
    }
}

TEST(ObservedRate, Undefined)
{
    const std::vector<std::pair<double, double>> one{{1.0, 1.0}};
    EXPECT_THROW(observed_rate(one), DomainError);
    const std::vector<std::pair<double, double>> zero{{1.0, 1.0}, {0.5, 0.0}};
    EXPECT_THROW(observed_rate(zero), DomainError);
    const std::vector<std::pair<double, double>> same{{1.0, 1.0}, {1.0, 0.5}};
    EXPECT_THROW(observed_rate(same), DomainError);
}

TEST(ObservedRate, AttachRates)
{
    std::vector<ErrorRecord> recs(3);
    recs[0] = {8.0, 1e-2, 2e-2, {}, {}};
    recs[1] = {16.0, 5e-3, 1e-2, {}, {}};
    recs[2] = {32.0, 2.5e-3, std::nullopt, {}, {}};
    attach_rates(recs);
    EXPECT_FALSE(recs[0].rate_l2.has_value());
    EXPECT_NEAR(*recs[1].rate_l2, 1.0, 1e-14);
    EXPECT_NEAR(*recs[1].rate_energy, 1.0, 1e-14);
    EXPECT_NEAR(*recs[2].rate_l2, 1.0, 1e-14);
    EXPECT_FALSE(recs[2].rate_energy.has_value());
}

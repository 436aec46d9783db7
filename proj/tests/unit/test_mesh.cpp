#include "nonlocal/errors.hpp"
#include "nonlocal/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

using namespace nonlocal;

TEST(Mesh, UniformSmall)
{
    const auto m = build_mesh(4, 1.0, 0.0);
    const std::vector<double> expect{-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2};
    ASSERT_EQ(m.num_nodes(), 9);
    for (int k = 0; k < 9; ++k) {
        EXPECT_NEAR(m.node(k), expect[static_cast<std::size_t>(k)], 1e-15);
    }
    EXPECT_EQ(m.K(), 2);
    EXPECT_EQ(m.num_free(), 3);
    EXPECT_EQ(m.node(m.left_boundary_node()), -1.0);
    EXPECT_EQ(m.node(m.right_boundary_node()), 1.0);
}

TEST(Mesh, CoarseningCounts)
{
    // N = 128; first block lambda = 4, second lambda = 8
    const double ps[] = {1.0, 0.5, 0.25, 0.125, 0.0};
    const int at4[] = {337, 447, 531, 583, 641};
    const int at8[] = {413, 643, 847, 985, 1153};
    for (int k = 0; k < 5; ++k) {
        EXPECT_EQ(build_mesh(128, 4.0, ps[k]).num_nodes(), at4[k]) << "p=" << ps[k];
        EXPECT_EQ(build_mesh(128, 8.0, ps[k]).num_nodes(), at8[k]) << "p=" << ps[k];
    }
}

TEST(Mesh, Invariants)
{
    for (double p : {0.0, 0.25, 0.6, 1.0, 1.5}) {
        for (double lam : {0.1, 1.0, 7.3, 64.0}) {
            const auto m = build_mesh(32, lam, p);
            EXPECT_EQ(m.domain_left(), -1.0 - lam);
            EXPECT_EQ(m.domain_right(), 1.0 + lam);
            EXPECT_EQ(m.node(m.K()), -1.0);
            EXPECT_EQ(m.node(m.K() + m.N()), 1.0);
            double total = 0.0;
            for (int e = 0; e < m.num_elements(); ++e) {
                EXPECT_GT(m.element_length(e), 0.0);
                total += m.element_length(e);
            }
            EXPECT_NEAR(total, 2.0 + 2.0 * lam, 1e-12 * (2.0 + 2.0 * lam));
            for (int i = 0; i < m.N(); ++i) {
                EXPECT_NEAR(m.element_length(m.K() + i), m.h_hat(), 1e-14);
            }
            for (int k = 0; k < m.num_nodes(); ++k) {
                EXPECT_EQ(m.node(k), -m.node(m.num_nodes() - 1 - k));
            }
            // outward growth, except possibly the snapped last element
            for (int e = m.K() + m.N(); e + 2 < m.num_elements(); ++e) {
                EXPECT_GE(m.element_length(e + 1), m.element_length(e) * (1 - 1e-12));
            }
            // the first exterior element always has length h_hat; growth shows from the second
            if (p == 0.0 || lam <= m.h_hat()) {
                EXPECT_NEAR(m.h_max(), m.h_hat(), 1e-12);
            } else if (lam >= 3.0 * m.h_hat()) {
                EXPECT_GT(m.h_max(), m.h_hat());
            } else {
                EXPECT_GE(m.h_max(), m.h_hat());
            }
        }
    }
}

TEST(Mesh, CoarserExponentFewerNodes)
{
    int prev = build_mesh(64, 16.0, 0.0).K();
    for (double p : {0.1, 0.3, 0.5, 0.9, 1.3}) {
        const int K = build_mesh(64, 16.0, p).K();
        EXPECT_LE(K, prev);
        prev = K;
    }
}

TEST(Mesh, BadArguments)
{
    EXPECT_THROW(build_mesh(1, 1.0, 0.0), DomainError);
    EXPECT_THROW(build_mesh(8, 0.0, 0.0), DomainError);
    EXPECT_THROW(build_mesh(8, 1.0, -0.5), DomainError);
}

TEST(Mesh, ElementContaining)
{
    const auto m = build_mesh(8, 0.5, 0.0);
    EXPECT_EQ(m.element_containing(m.domain_left()), 0);
    EXPECT_EQ(m.element_containing(m.domain_right()), m.num_elements() - 1);
    EXPECT_THROW((void)m.element_containing(2.0), DomainError);
    const int e = m.element_containing(0.1);
    EXPECT_LE(m.node(e), 0.1);
    EXPECT_GE(m.node(e + 1), 0.1);
}

TEST(Hat, CardinalAndLinear)
{
    const auto m = build_mesh(8, 1.0, 0.7);
    for (int j = 0; j < m.num_nodes(); ++j) {
        for (int k = 0; k < m.num_nodes(); ++k) {
            EXPECT_EQ(hat_eval(m, j, m.node(k)), j == k ? 1.0 : 0.0);
        }
        if (j + 1 < m.num_nodes()) {
            EXPECT_NEAR(hat_eval(m, j, 0.5 * (m.node(j) + m.node(j + 1))), 0.5, 1e-14);
        }
    }
    EXPECT_THROW(hat_eval(m, -1, 0.0), std::out_of_range);
    EXPECT_THROW(hat_eval(m, m.num_nodes(), 0.0), std::out_of_range);
}

TEST(FEFunction, Evaluation)
{
    const auto mesh = make_mesh(8, 1.0, 0.0);
    const auto z = FEFunction::zero(mesh);
    EXPECT_EQ(fe_eval(z, 0.3), 0.0);
    EXPECT_TRUE(z.satisfies_volume_constraint());

    std::vector<double> lin(mesh->nodes().begin(), mesh->nodes().end());
    const auto g = FEFunction::from_nodal_values(mesh, lin);
    EXPECT_FALSE(g.satisfies_volume_constraint());
    for (double x : {-1.93, -1.0, -0.41, 0.0, 0.333, 1.77, 2.0}) {
        EXPECT_NEAR(fe_eval(g, x), x, 1e-15);
    }
    EXPECT_THROW(fe_eval(g, 2.5), DomainError);

    for (int j : {0, 5, 10}) {
        std::vector<double> e(static_cast<std::size_t>(mesh->num_nodes()), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        const auto ej = FEFunction::from_nodal_values(mesh, e);
        for (double x : {-1.6, -0.2, 0.05, 0.9}) {
            EXPECT_NEAR(fe_eval(ej, x), hat_eval(*mesh, j, x), 1e-15);
        }
    }
}

TEST(FEFunction, FreeDofsAndArithmetic)
{
    const auto mesh = make_mesh(6, 0.5, 0.0);
    const std::vector<double> a{1, 2, 3, 4, 5}, b{-1, 0, 1, 0, 2};
    const auto fa = FEFunction::from_free_dofs(mesh, a);
    const auto fb = FEFunction::from_free_dofs(mesh, b);
    EXPECT_TRUE(fa.satisfies_volume_constraint());
    EXPECT_EQ(fa.free_dofs(), a);
    const auto sum = fa + fb, diff = fa - fb, sc = fa.scaled(-2.0);
    for (int d = 0; d < 5; ++d) {
        EXPECT_EQ(sum.free_dofs()[d], a[d] + b[d]);
        EXPECT_EQ(diff.free_dofs()[d], a[d] - b[d]);
        EXPECT_EQ(sc.free_dofs()[d], -2.0 * a[d]);
    }
    EXPECT_THROW(FEFunction::from_free_dofs(mesh, std::vector<double>{1, 2}), std::invalid_argument);
    const auto other = make_mesh(6, 0.5, 0.0);
    EXPECT_NO_THROW((void)(fa - FEFunction::zero(other)));
    EXPECT_THROW((void)(fa - FEFunction::zero(make_mesh(8, 0.5, 0.0))), MeshMismatchError);
}

TEST(FEFunction, TransferKeepsInteriorValues)
{
    const auto coarse = make_mesh(16, 4.0, 1.0);
    const auto fine = make_mesh(16, 4.0, 0.0);
    std::vector<double> v(15);
    std::iota(v.begin(), v.end(), 1.0);
    const auto f = FEFunction::from_free_dofs(coarse, v);
    const auto g = f.transfer_to(fine);
    EXPECT_EQ(g.free_dofs(), v);
    EXPECT_EQ(g.mesh().num_nodes(), fine->num_nodes());
    EXPECT_THROW((void)f.transfer_to(make_mesh(8, 4.0, 0.0)), MeshMismatchError);
}

TEST(Mesh, CsvDump)
{
    const auto m = build_mesh(4, 0.3, 0.0);
    std::ostringstream os;
    write_mesh_csv(m, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "x");
    int count = 0;
    while (std::getline(is, line)) {
        EXPECT_EQ(std::stod(line), m.node(count));
        ++count;
    }
    EXPECT_EQ(count, m.num_nodes());
}

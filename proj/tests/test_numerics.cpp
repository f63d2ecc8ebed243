// test_numerics.cpp — Gauss/Filon quadrature against closed forms

#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "qtt/numerics.hpp"

using namespace qtt::numerics;
using Complex = std::complex<double>;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    for (std::size_t n : {4u, 12u, 24u}) {
        const auto g = gauss_legendre(n);
        for (std::size_t k = 0; k < 2 * n; ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += g.weights[i] * std::pow(g.nodes[i], static_cast<double>(k));
            const double exact = (k % 2 == 1) ? 0.0 : 2.0 / static_cast<double>(k + 1);
            EXPECT_NEAR(sum, exact, 1e-13) << "n=" << n << " k=" << k;
        }
    }
}

TEST(SphericalBessel, MatchesStandardLibrary) {
    for (double x : {1e-3, 0.3, 1.0, 7.5, 40.0, 250.0}) {
        std::vector<double> j(20);
        spherical_bessel_sequence(x, j);
        for (unsigned k = 0; k < j.size(); ++k) {
            const double ref = std::sph_bessel(k, x);
            EXPECT_NEAR(j[k], ref, 1e-12 * std::max(1.0, std::abs(ref))) << "x=" << x << " k=" << k;
        }
    }
}

TEST(LegendreSequence, RecurrenceValues) {
    const auto p = legendre_sequence(0.3, 5);
    EXPECT_DOUBLE_EQ(p[0], 1.0);
    EXPECT_DOUBLE_EQ(p[1], 0.3);
    EXPECT_NEAR(p[2], 0.5 * (3 * 0.09 - 1), 1e-15);
    EXPECT_NEAR(p[3], 0.5 * (5 * 0.027 - 3 * 0.3), 1e-15);
}

TEST(PanelGrid, IntegrateExponential) {
    const auto grid = PanelGrid::from_widths(0.0, std::vector<double>(40, 0.5), 16);
    std::vector<double> f;
    for (double t : grid.nodes()) f.push_back(std::exp(-t));
    EXPECT_NEAR(grid.integrate<double>(f), 1.0 - std::exp(-20.0), 1e-13);
}

// ∫₀^L e^{iωt} e^{-t} dt = (e^{(iω-1)L} - 1)/(iω - 1)
TEST(PanelGrid, FilonTransformAtLowAndHighFrequency) {
    const double L = 30.0;
    const auto grid = PanelGrid::from_widths(0.0, std::vector<double>(60, 0.5), 20);
    std::vector<double> f;
    for (double t : grid.nodes()) f.push_back(std::exp(-t));
    for (double w : {0.0, 0.7, -3.0, 50.0, 2000.0}) {
        const Complex a{-1.0, w};
        const Complex exact = (std::exp(a * L) - 1.0) / a;
        const Complex got = grid.fourier<double>(w, f);
        EXPECT_NEAR(std::abs(got - exact), 0.0, 1e-12 * std::max(1.0, std::abs(exact))) << "omega=" << w;
    }
}

TEST(PanelGrid, FourierManyMatchesSingle) {
    const auto grid = PanelGrid::from_widths(0.0, {0.1, 0.2, 0.4, 0.8, 1.6}, 12);
    std::vector<Complex> a, b;
    for (double t : grid.nodes()) {
        a.push_back({std::cos(t), t});
        b.push_back({std::exp(-t), 0.0});
    }
    std::vector<std::span<const Complex>> spans{a, b};
    std::vector<Complex> out(2);
    grid.fourier_many<Complex>(1.3, spans, out);
    EXPECT_EQ(out[0], grid.fourier<Complex>(1.3, a));
    EXPECT_EQ(out[1], grid.fourier<Complex>(1.3, b));
}

TEST(PanelGrid, RejectsMismatchedSamples) {
    const auto grid = PanelGrid::from_widths(0.0, {1.0, 1.0}, 8);
    std::vector<double> f(5, 1.0);
    EXPECT_THROW(grid.integrate<double>(f), std::invalid_argument);
}

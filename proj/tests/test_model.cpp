// test_model.cpp — Spectra, occupations and polaron-frame quantities

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qtt/model.hpp"

using namespace qtt;

namespace {
BathParams bath(double T, double c, double wc = 10.0) { return {BathLabel::middle, T, c, wc}; }
}

TEST(Spectrum, OddAndClosedForm) {
    const auto b = bath(1.0, 0.3);
    for (double x : {0.1, 1.0, 7.0, 30.0}) {
        EXPECT_DOUBLE_EQ(spectral_density(b, -x), -spectral_density(b, x));
        EXPECT_NEAR(spectral_density(b, x), std::numbers::pi * 0.3 * x * x * x / 100.0 * std::exp(-x / 10.0), 1e-14);
    }
    EXPECT_EQ(spectral_density(b, 0.0), 0.0);
}

TEST(Spectrum, BoseReflectionIdentity) {
    for (double T : {0.4, 1.2, 2.0})
        for (double w : {0.05, 0.6, 3.0}) EXPECT_NEAR(bose_occupation(-w, T), -(1.0 + bose_occupation(w, T)), 1e-12);
    EXPECT_THROW(bose_occupation(0.0, 1.0), NumericsError);
}

TEST(Spectrum, ThermalWeightsObeyDetailedBalance) {
    const auto b = bath(0.7, 0.2);
    for (double x : {0.1, 0.6, 1.0, 4.0}) {
        const double up = thermal_weight(b, x), down = emission_weight(b, x);
        EXPECT_NEAR(up, spectral_density(b, x) * bose_occupation(x, 0.7), 1e-14);
        EXPECT_NEAR(down / up, std::exp(x / 0.7), 1e-10 * std::exp(x / 0.7));
    }
    EXPECT_EQ(thermal_weight(b, 0.0), 0.0);
    EXPECT_EQ(thermal_weight(b, 1e6), 0.0);
}

TEST(Spectrum, OnePhononDensityLimitAtZero) {
    const auto b = bath(1.5, 0.4);
    EXPECT_NEAR(one_phonon_density(b, 0.0), std::numbers::pi * 0.4 * 1.5 / 100.0, 1e-14);
    EXPECT_NEAR(one_phonon_density(b, 1e-7), one_phonon_density(b, 0.0), 1e-9);
    EXPECT_NEAR(one_phonon_density(b, 2.0), emission_weight(b, 2.0) / 4.0, 1e-14);
}

TEST(Polaron, ReorganizationEnergyClosedForm) {
    for (double a : {0.001, 0.3, 1.0, 4.0, 10.0})
        for (double wc : {5.0, 10.0}) EXPECT_NEAR(reorganization_energy(bath(1.2, a, wc)), a * wc / 2.0, 1e-10);
}

TEST(Polaron, RenormalizationZeroTemperatureLimit) {
    for (double a : {0.01, 0.5, 4.0}) {
        const auto r = renormalization_factor(bath(1e-4, a));
        EXPECT_NEAR(r.eta, std::exp(-a / 2.0), 1e-8);
        EXPECT_NEAR(r.eta_u, std::pow(r.eta, 0.25), 1e-14);
    }
}

TEST(Polaron, RenormalizationDecreasesWithTemperature) {
    double prev = 1.0;
    for (double T : {0.2, 0.8, 1.6, 3.2}) {
        const double eta = renormalization_factor(bath(T, 1.0)).eta;
        EXPECT_LT(eta, prev);
        prev = eta;
    }
}

TEST(Polaron, FrameEnergiesFromDiagonalisation) {
    SystemParams s;
    const auto m = bath(1.2, 0.5);
    const auto f = polaron_frame(s, m);
    const double lam = 0.5 * 0.5 * 10.0;
    EXPECT_NEAR(f.lambda_reorg, lam, 1e-10);
    EXPECT_NEAR(f.e_l_loc, 1.0 - lam, 1e-10);
    EXPECT_NEAR(f.e_r_loc, 0.6 - lam, 1e-10);
    // eigenvalues of [[ε_l-λ, ηΔ], [ηΔ, ε_r-λ]]
    const double a = f.e_l_loc, d = f.e_r_loc, t = f.eta * 0.6;
    const double tr = a + d, det = a * d - t * t;
    const double disc = std::sqrt(tr * tr / 4 - det);
    EXPECT_NEAR(f.e_plus, tr / 2 + disc, 1e-12);
    EXPECT_NEAR(f.e_minus, tr / 2 - disc, 1e-12);
    EXPECT_NEAR(std::tan(f.theta), t / 0.2, 1e-10);
}

TEST(Polaron, BareLimit) {
    SystemParams s;
    const auto f = polaron_frame(s, bath(1.2, 0.0));
    EXPECT_EQ(f.eta, 1.0);
    EXPECT_EQ(f.lambda_reorg, 0.0);
    EXPECT_NEAR(f.gap(), 2.0 * std::hypot(0.2, 0.6), 1e-14);
}

TEST(Validation, NamesOffendingKey) {
    BathSet b;
    b.middle.temperature = -1.0;
    try {
        b.validate();
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.key, "T_m");
    }
    b = BathSet{};
    b.left.coupling = -2.0;
    try {
        b.validate();
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.key, "gamma_l");
    }
    SystemParams s;
    s.delta = -0.1;
    EXPECT_THROW(s.validate(), ValidationError);
}

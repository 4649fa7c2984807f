// Copyright 2026 The phasemeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "phasemeas/errors.hpp"
#include "phasemeas/fock.hpp"
#include "phasemeas/kick.hpp"
#include "phasemeas/povm.hpp"
#include "phasemeas/quadrature.hpp"

namespace {

using namespace phasemeas;
constexpr double kPi = std::numbers::pi;

KickDistribution gaussian_table(double sigma, int n, double r_max) {
    std::vector<double> r(n), g(n);
    for (int i = 0; i < n; ++i) {
        r[i] = r_max * i / (n - 1);
        g[i] = std::exp(-r[i] * r[i] / (sigma * sigma)) / (kPi * sigma * sigma);
    }
    return KickDistribution::tabulated(r, g);
}

TEST(Quadrature, GaussLegendrePolynomialExact) {
    const quad::Rule rule = quad::gauss_legendre(-1.0, 2.0, 3);
    double acc = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        acc += rule.w[i] * std::pow(rule.x[i], 9);
        mass += rule.w[i];
    }
    EXPECT_NEAR(mass, 3.0, 1e-13);
    EXPECT_NEAR(acc, (std::pow(2.0, 10) - 1.0) / 10.0, 1e-10);
    for (std::size_t i = 1; i < rule.size(); ++i) EXPECT_LT(rule.x[i - 1], rule.x[i]);
}

TEST(Quadrature, PolarGaussianMass) {
    const quad::PolarRule rule = quad::polar_rule(8.0, 6, 32);
    double mass = 0.0;
    for (std::size_t j = 0; j < rule.r.size(); ++j)
        for (int k = 0; k < rule.n_angles; ++k) mass += rule.weight(j) * std::exp(-std::norm(rule.node(j, k))) / kPi;
    EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(ChiG, OriginIsOne) {
    EXPECT_NEAR(KickDistribution::gaussian(0.5).chi(0.0), 1.0, 1e-15);
    EXPECT_NEAR(gaussian_table(0.7, 201, 6.0).chi(0.0), 1.0, 1e-10);
}

TEST(ChiG, GaussianClosedFormAndBruteForce) {
    const KickDistribution g = KickDistribution::gaussian(0.5);
    EXPECT_NEAR(g.chi(6.0), std::exp(-9.0), 1e-18);
    EXPECT_NEAR(g.chi(6.0), 1.2341e-4, 1e-8);
    // chi_g(eta) = int g(|alpha|) exp(alpha* eta - eta* alpha) d^2 alpha
    for (const double r : {0.5, 2.0, 6.0}) {
        const Complex eta(0.0, r);
        const Complex ref = oracle::plane_integral(
            [&](Complex a) { return g(std::abs(a)) * std::exp(std::conj(a) * eta - std::conj(eta) * a); }, 3.5, 701);
        EXPECT_NEAR(ref.real(), g.chi(r), 1e-9) << r;
        EXPECT_NEAR(ref.imag(), 0.0, 1e-12);
    }
}

TEST(ChiG, TableMatchesGaussian) {
    const KickDistribution t = gaussian_table(0.5, 201, 4.0);
    const KickDistribution g = KickDistribution::gaussian(0.5);
    double worst = 0.0;
    for (double r = 0.0; r <= 8.0; r += 0.05) worst = std::max(worst, std::abs(t.chi(r) - g.chi(r)));
    EXPECT_LT(worst, 1e-6);
    EXPECT_NEAR(t.second_moment(), 0.25, 1e-6);
}

TEST(ChiG, RealAndBounded) {
    const KickDistribution t = gaussian_table(1.3, 101, 9.0);
    for (double r = 0.0; r <= 10.0; r += 0.1) EXPECT_LE(std::abs(t.chi(r)), 1.0 + 1e-10);
}

TEST(Kick, MassNormalized) {
    const KickDistribution g = KickDistribution::gaussian(0.8);
    const quad::Rule rule = quad::gauss_legendre(0.0, 10.0, 8);
    double mass = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) mass += rule.w[i] * g.radial_density(rule.x[i]);
    EXPECT_NEAR(mass, 1.0, 1e-8);
    // a table given with the wrong overall scale is normalized
    std::vector<double> r(101), d(101);
    for (int i = 0; i < 101; ++i) {
        r[i] = 0.05 * i;
        d[i] = 7.0 * std::exp(-r[i] * r[i]);
    }
    const KickDistribution t = KickDistribution::tabulated(r, d);
    EXPECT_NEAR(t.raw_mass(), 7.0 * kPi * (1.0 - std::exp(-25.0)), 1e-5);
    EXPECT_NEAR(t(0.0), 1.0 / kPi, 1e-6);
}

TEST(Kick, TableValidation) {
    EXPECT_THROW(KickDistribution::tabulated({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}), InvalidArgument);
    EXPECT_THROW(KickDistribution::tabulated({0.1, 1.0, 2.0, 3.0}, {1.0, 1.0, 1.0, 1.0}), InvalidArgument);
    EXPECT_THROW(KickDistribution::tabulated({0.0, 1.0, 1.0, 3.0}, {1.0, 1.0, 1.0, 1.0}), InvalidArgument);
    EXPECT_THROW(KickDistribution::tabulated({0.0, 1.0, 2.0, 3.0}, {0.0, 0.0, 0.0, 0.0}), InvalidArgument);
    EXPECT_THROW(KickDistribution::tabulated({0.0, 1.0, 2.0, 3.0}, {1.0, -1.0, 1.0, 0.0}), InvalidArgument);
    EXPECT_THROW(KickDistribution::gaussian(0.0), InvalidArgument);
}

TEST(Kick, SamplerMoments) {
    for (const KickDistribution& g : {KickDistribution::gaussian(0.5), gaussian_table(0.5, 401, 4.0)}) {
        std::mt19937_64 rng(99);
        const int n = 200000;
        double m2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = g.sample_radius(rng);
            m2 += r * r;
        }
        m2 /= n;
        // E r^2 = sigma^2, Var r^2 = sigma^4 for this density
        EXPECT_NEAR(m2, 0.25, 3.0 * 0.25 / std::sqrt(double(n)) + 1e-6);
    }
}

TEST(KickQuadrature, WeightsResolveChi) {
    const KickDistribution g = KickDistribution::gaussian(0.5);
    const KickQuadrature q = make_kick_quadrature(g, 64);
    double sum = 0.0;
    for (double w : q.weights) sum += w;
    EXPECT_NEAR(sum, 1.0, 1e-14);
    EXPECT_NEAR(q.raw_weight, 1.0, 1e-8);
    EXPECT_EQ(q.n_angles, 128);
    for (double r : {0.0, 1.0, 3.0, 6.0}) EXPECT_NEAR(q.chi(r), g.chi(r), 1e-9) << r;
}

TEST(Apparatus, VacuumGivesUnitGaussian) {
    const ApparatusState psi = ApparatusState::pure(fock::fock_state(0, 24));
    const KickDistribution g = kick_distribution_from_apparatus(psi, 24);
    for (double r : {0.0, 0.3, 1.0, 2.0, 3.5}) {
        EXPECT_NEAR(g.chi(r), std::exp(-r * r), 1e-6) << r;
        EXPECT_NEAR(g(r), std::exp(-r * r) / kPi, 1e-6) << r;
    }
}

TEST(Apparatus, ThermalIsRadialAndNormalized) {
    const ApparatusState psi(fock::thermal_state(1.0, 40));
    const KickDistribution g = kick_distribution_from_apparatus(psi, 40);
    EXPECT_NEAR(g.chi(0.0), 1.0, 1e-10);
    for (double r = 0.0; r < 5.0; r += 0.25) EXPECT_LE(std::abs(g.chi(r)), 1.0 + 1e-10);
}

TEST(Apparatus, AsymmetricRejected) {
    FockVector v = FockVector::Zero(16);
    v(0) = 1.0 / std::sqrt(2.0);
    v(1) = 1.0 / std::sqrt(2.0);
    EXPECT_THROW(kick_distribution_from_apparatus(ApparatusState::pure(v), 16), UnsupportedApparatus);
}

// |Tr[D(alpha) |beta><beta|]|^2 = e^{-|alpha|^2}: the phase drops out, so a
// coherent projector yields the same g as the vacuum
TEST(Apparatus, CoherentProjectorIsRadial) {
    const ApparatusState psi = ApparatusState::pure(fock::coherent_state(Complex(0.8, 0.4), 40));
    const KickDistribution g = kick_distribution_from_apparatus(psi, 40);
    for (double r : {0.5, 1.5}) EXPECT_NEAR(g.chi(r), std::exp(-r * r), 1e-6);
}

TEST(Apparatus, InvalidStateRejected) {
    FockMatrix bad = FockMatrix::Zero(4, 4);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    EXPECT_THROW(ApparatusState{bad}, InvalidState);
    FockMatrix not_unit = FockMatrix::Identity(4, 4);
    EXPECT_THROW(ApparatusState{not_unit}, InvalidState);
}

} // namespace

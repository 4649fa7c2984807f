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
#include "phasemeas/lindblad.hpp"
#include "phasemeas/propagator.hpp"
#include "phasemeas/unravelling.hpp"

namespace {

using namespace phasemeas;
const Complex kCatAlpha(0.0, 3.0);

MeasurementModel model(double gamma, double omega, double sigma) {
    MeasurementModel m;
    m.gamma = gamma;
    m.omega = omega;
    m.g = KickDistribution::gaussian(sigma);
    return m;
}

std::vector<Complex> test_points() {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<Complex> pts{0.0, Complex(0.0, 6.0), Complex(7.5, -0.5)};
    for (int k = 0; k < 25; ++k) pts.emplace_back(u(rng), u(rng));
    return pts;
}

TEST(Propagator, ZeroTimeUnchanged) {
    const CharSource src = CharSource::from_state(fock::density(fock::cat_state(kCatAlpha, 72)));
    const CharSource ev = evolve(src, model(1.0, 10.0, 0.5), 0.0);
    for (Complex eta : test_points()) EXPECT_EQ(ev(eta), src(eta));
}

TEST(Propagator, FockStateStationaryWithoutMeasurement) {
    const CharSource src = CharSource::from_state(fock::density(fock::fock_state(3, 40)));
    const CharSource ev = evolve(src, model(0.0, 2.3, 0.5), 1.7);
    for (Complex eta : {Complex(0.5, 0.1), Complex(-1.0, 2.0)}) EXPECT_LT(std::abs(ev(eta) - src(eta)), 1e-12);
}

TEST(Propagator, CatOuterPeakDamping) {
    const MeasurementModel m = model(1.0, 10.0, 0.5);
    const CharSource src = CharSource::from_state(fock::density(fock::cat_state(kCatAlpha, 72)));
    const CharSource ev = evolve(src, m, 1.0);
    const Complex peak(0.0, 6.0);
    // follow the peak in the frame rotating with omega
    const double ratio = std::abs(ev(peak * std::polar(1.0, -m.omega))) / std::abs(src(peak));
    EXPECT_NEAR(ratio, std::exp(-(1.0 - std::exp(-9.0))), 1e-6);
    EXPECT_NEAR(ratio, 0.367925, 1e-6);
    // closed-form cat chi as the independent initial condition
    EXPECT_NEAR(std::abs(src(peak)), std::abs(oracle::cat_chi(kCatAlpha, peak)), 1e-10);
}

TEST(Propagator, NormalizationPreserved) {
    const CharSource src = CharSource::from_state(fock::thermal_state(0.6, 40));
    for (double t : {0.0, 0.3, 1.0, 5.0}) EXPECT_NEAR(std::abs(evolve(src, model(1.3, 4.0, 0.7), t)(0.0) - 1.0), 0.0, 1e-10);
}

TEST(Propagator, DampingEnvelope) {
    const MeasurementModel m = model(0.8, 3.0, 0.5);
    const CharSource src = CharSource::from_state(fock::density(fock::cat_state(kCatAlpha, 72)));
    for (double t : {0.1, 0.5, 2.0}) {
        const CharSource ev = evolve(src, m, t);
        for (Complex eta : test_points()) {
            EXPECT_LE(std::abs(ev(eta)), std::abs(src(eta * std::polar(1.0, m.omega * t))) + 1e-15);
        }
    }
}

TEST(Propagator, LargeEtaAsymptote) {
    const MeasurementModel m = model(0.9, 0.0, 0.5);
    for (double t : {0.5, 1.0, 2.0}) EXPECT_NEAR(damping_factor(m, 20.0, t), std::exp(-m.gamma * t), 1e-14);
}

TEST(Propagator, Semigroup) {
    const MeasurementModel m = model(1.1, 6.0, 0.5);
    const CharSource src = CharSource::from_state(fock::density(fock::cat_state(kCatAlpha, 72)));
    for (auto [t1, t2] : {std::pair{0.2, 0.5}, std::pair{0.7, 0.3}, std::pair{1.0, 1.0}}) {
        const CharSource two_step = evolve(evolve(src, m, t1), m, t2);
        const CharSource one_step = evolve(src, m, t1 + t2);
        for (Complex eta : test_points()) EXPECT_LT(std::abs(two_step(eta) - one_step(eta)), 1e-12);
    }
}

TEST(Propagator, GridSourceIsInterpolatedAndBounded) {
    const FockMatrix rho = fock::density(fock::coherent_state(Complex(0.5, 0.5), 32));
    const PhaseGrid chi0 = char_grid(rho, GridSpec{6.0, 128});
    const PhaseGrid out = evolve_char(chi0, model(0.5, 1.0, 0.5), 0.0);
    EXPECT_TRUE(out.interpolated);
    const CharSource g = CharSource::from_grid(chi0);
    for (Complex eta : {Complex(0.33, -0.71), Complex(1.9, 2.2)}) {
        EXPECT_LT(std::abs(g(eta) - oracle::coherent_chi(Complex(0.5, 0.5), eta)), 1e-4);
    }
    EXPECT_THROW(g(Complex(6.5, 0.0)), OutOfRange);
    // rotation pushes the corner of the grid outside the source
    EXPECT_THROW(evolve_char(chi0, model(0.5, 1.0, 0.5), 0.5), OutOfRange);
    const PhaseGrid exact = evolve_char(CharSource::from_state(rho), model(0.5, 1.0, 0.5), 0.5, GridSpec{4.0, 32});
    EXPECT_FALSE(exact.interpolated);
}

TEST(Propagator, RejectsNegativeTime) {
    const CharSource src = CharSource::from_state(fock::density(fock::fock_state(0, 8)));
    EXPECT_THROW(evolve(src, model(1.0, 0.0, 0.5), -0.1), InvalidArgument);
    EXPECT_THROW(model(-1.0, 0.0, 0.5).validate(), InvalidArgument);
}

TEST(MonteCarlo, UnitaryWithoutMeasurement) {
    const int dim = 32;
    const FockMatrix rho0 = fock::density(fock::coherent_state(Complex(1.0, 0.5), dim));
    const double omega = 2.0, t = 0.8;
    const FockMatrix mc = monte_carlo_unravelling(rho0, model(0.0, omega, 0.5), t, 3, 1);
    const FockMatrix ref = oracle::unitary_evolve(omega * fock::number(dim), rho0, t);
    EXPECT_LT((mc - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MonteCarlo, VacuumWithinThreeSE) {
    const MeasurementModel m = model(1.0, 0.0, 0.5);
    UnravellingOptions opts;
    opts.n_traj = 2000;
    opts.seed = 7;
    opts.probes = {1.0, Complex(0.0, 0.5), Complex(-0.7, 0.7), Complex(0.4, -1.2), Complex(1.5, 1.5)};
    const FockMatrix rho0 = fock::density(fock::fock_state(0, 32));
    const UnravellingResult r = monte_carlo_unravelling(rho0, m, {1.0}, opts);
    for (std::size_t p = 0; p < opts.probes.size(); ++p) {
        const Complex eta = opts.probes[p];
        const Complex ref = oracle::coherent_chi(0.0, eta) * std::exp(-(1.0 - std::exp(-0.25 * std::norm(eta))));
        const Complex d = r.chi_mean[0][p] - ref, se = r.chi_stderr[0][p];
        EXPECT_LE(std::abs(d.real()), 3.0 * se.real() + 1e-9) << eta;
        EXPECT_LE(std::abs(d.imag()), 3.0 * se.imag() + 1e-9) << eta;
    }
}

TEST(MonteCarlo, CatWithinThreeSE) {
    const MeasurementModel m = model(1.0, 10.0, 0.5);
    UnravellingOptions opts;
    opts.n_traj = 1000;
    opts.seed = 5;
    opts.probes = {1.0, Complex(0.0, 6.0), Complex(0.3, 0.3), Complex(-0.5, 5.8), Complex(0.0, 1.0)};
    const FockMatrix rho0 = fock::density(fock::cat_state(kCatAlpha, 72));
    const UnravellingResult r = monte_carlo_unravelling(rho0, m, {0.5, 1.0}, opts);
    const CharSource src = CharSource::from_state(rho0);
    for (std::size_t ti = 0; ti < 2; ++ti) {
        const CharSource ev = evolve(src, m, r.times[ti]);
        for (std::size_t p = 0; p < opts.probes.size(); ++p) {
            const Complex d = r.chi_mean[ti][p] - ev(opts.probes[p]), se = r.chi_stderr[ti][p];
            EXPECT_LE(std::abs(d.real()), 3.0 * se.real() + 1e-9);
            EXPECT_LE(std::abs(d.imag()), 3.0 * se.imag() + 1e-9);
        }
    }
}

TEST(MonteCarlo, SeedDeterminism) {
    const MeasurementModel m = model(2.0, 1.0, 0.5);
    const FockMatrix rho0 = fock::density(fock::fock_state(1, 24));
    const FockMatrix a = monte_carlo_unravelling(rho0, m, 0.7, 200, 9);
    const FockMatrix b = monte_carlo_unravelling(rho0, m, 0.7, 200, 9);
    EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_GT((a - monte_carlo_unravelling(rho0, m, 0.7, 200, 10)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(MonteCarlo, PurityDecreasesMonotonically) {
    const MeasurementModel m = model(1.0, 2.0, 0.5);
    const FockMatrix rho0 = fock::density(fock::coherent_state(Complex(1.0, 0.0), 40));
    const std::vector<double> times{0.2, 0.4, 0.6, 0.8, 1.0};
    UnravellingOptions opts;
    opts.n_traj = 2000;
    opts.seed = 77;
    const UnravellingResult r = monte_carlo_unravelling(rho0, m, times, opts);
    // oracle: the master equation
    const KickMap kicks(make_kick_quadrature(m.g, 40), 40);
    IntegratorConfig ic;
    ic.dt = 2e-3;
    ic.audit = false;
    const Trajectory traj =
        integrate(rho0, [&](const FockMatrix& rho) { return measurement_me_rhs(rho, m, kicks); }, times, ic);
    double prev_mc = 1.0, prev_me = 1.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double p_mc = fock::purity(r.rho[i]), p_me = traj.records[i].purity;
        EXPECT_LT(p_me, prev_me);
        EXPECT_LT(p_mc, prev_mc);
        EXPECT_NEAR(p_mc, p_me, 0.02);
        prev_mc = p_mc;
        prev_me = p_me;
    }
}

TEST(MonteCarlo, KickOutsideSpaceRaises) {
    const FockMatrix rho0 = fock::density(fock::fock_state(0, 6));
    EXPECT_THROW(monte_carlo_unravelling(rho0, model(20.0, 0.0, 2.0), 1.0, 20, 1), TruncationError);
}

} // namespace

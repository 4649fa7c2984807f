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
#include "phasemeas/hamiltonian.hpp"

namespace {

using namespace phasemeas;
using namespace phasemeas::hamiltonian;

QuadraticLadder ladder(double z1, Complex z2, Complex z3) {
    QuadraticLadder h;
    h.z1 = z1;
    h.z2 = z2;
    h.z3 = z3;
    return h;
}

TEST(NormalForm, SqueezedExample) {
    const NormalForm nf = diagonalize(ladder(2.0, 0.6, 0.0));
    EXPECT_NEAR(nf.z0, 1.6, 1e-14);
    EXPECT_NEAR(nf.U, std::sqrt(1.125), 1e-14);
    EXPECT_NEAR(nf.U, 1.060660, 1e-6);
    EXPECT_NEAR(nf.V, std::sqrt(0.125), 1e-14);
    EXPECT_NEAR(nf.V, 0.353553, 1e-6);
    EXPECT_NEAR(nf.U * nf.U - nf.V * nf.V, 1.0, 1e-14);
}

TEST(NormalForm, DisplacedExample) {
    const NormalForm nf = diagonalize(ladder(2.0, 0.6, 1.0));
    EXPECT_NEAR(std::abs(nf.delta - Complex(-0.3125, 0.0)), 0.0, 1e-14);
    EXPECT_NEAR(nf.c, -0.5125, 1e-14);
}

TEST(NormalForm, RejectsUnstableAndDegenerate) {
    try {
        diagonalize(ladder(2.0, 1.001, 0.0));
        FAIL() << "expected InstabilityError";
    } catch (const InstabilityError& e) {
        EXPECT_FALSE(e.degenerate());
    }
    try {
        diagonalize(ladder(2.0, 1.0, 0.0));
        FAIL() << "expected InstabilityError";
    } catch (const InstabilityError& e) {
        EXPECT_TRUE(e.degenerate());
    }
    EXPECT_THROW(spectral_check(ladder(2.0, 1.001, 0.0), NormalForm{}, 40, 3), InstabilityError);
}

TEST(NormalForm, ZeroSqueezingHasNoNu) {
    const NormalForm nf = diagonalize(ladder(1.5, 0.0, Complex(0.2, -0.4)));
    EXPECT_EQ(nf.phi, 0.0);
    EXPECT_EQ(std::abs(nf.nu), 0.0);
    EXPECT_NEAR(nf.z0, 1.5, 1e-15);
}

TEST(NormalForm, ResidualsAndSymplecticRandom) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const Complex z2(u(rng), u(rng)), z3(2 * u(rng), 2 * u(rng));
        const double z1 = 2.0 * std::abs(z2) + 0.05 + std::abs(u(rng)) * 3.0;
        const QuadraticLadder h = ladder(z1, z2, z3);
        const NormalForm nf = diagonalize(h);
        for (const Complex r : diagonalization_residuals(h, nf)) EXPECT_LT(std::abs(r), 1e-10);
        EXPECT_LT(std::abs(symplectic_residual(nf)), 1e-12);
    }
}

// b = mu a + nu a^dag + delta turns H into z0 a^dag a + c; checked as matrices
TEST(NormalForm, OperatorIdentity) {
    const int dim = 40;
    for (const QuadraticLadder& h :
         {ladder(2.0, 0.6, 1.0), ladder(3.0, Complex(0.4, -0.9), Complex(-0.5, 0.7)), ladder(1.0, Complex(0.0, 0.3), 0.0)}) {
        const NormalForm nf = diagonalize(h);
        const oracle::Mat a = oracle::annihilation(dim);
        const oracle::Mat id = oracle::Mat::Identity(dim, dim);
        const oracle::Mat b = nf.mu * a + nf.nu * a.adjoint() + nf.delta * id;
        const oracle::Mat bd = b.adjoint();
        const oracle::Mat hb = h.z1 * bd * b + h.z2 * b * b + std::conj(h.z2) * bd * bd + h.z3 * b + std::conj(h.z3) * bd;
        const oracle::Mat target = nf.z0 * a.adjoint() * a + nf.c * id;
        const int safe = dim - 2;  // two ladder steps from the edge are exact
        EXPECT_LT((hb - target).topLeftCorner(safe, safe).cwiseAbs().maxCoeff(), 1e-10);
        // b keeps the canonical commutator on the safe block
        const oracle::Mat comm = (b * bd - bd * b).topLeftCorner(safe, safe);
        EXPECT_LT((comm - oracle::Mat::Identity(safe, safe)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Spectral, HarmonicExact) {
    const QuadraticLadder h = ladder(1.7, 0.0, 0.0);
    EXPECT_LT(spectral_check(h, diagonalize(h), 20, 6).max_error, 1e-12);
}

TEST(Spectral, Squeezed) {
    const QuadraticLadder h = ladder(2.0, 0.6, 0.0);
    EXPECT_LT(spectral_check(h, diagonalize(h), 120, 5).max_error, 1e-6);
}

TEST(Spectral, ComplexCoefficients) {
    const QuadraticLadder h = ladder(2.5, std::polar(0.8, 1.1), Complex(0.3, 0.9));
    const SpectralReport r = spectral_check(h, diagonalize(h), 150, 5);
    EXPECT_LT(r.max_error, 1e-6);
    for (int n = 1; n < 5; ++n) EXPECT_NEAR(r.eigenvalues[n] - r.eigenvalues[n - 1], diagonalize(h).z0, 1e-6);
}

TEST(Spectral, UnderresolvedDimensionRaises) {
    const QuadraticLadder h = ladder(2.0, 0.95, 3.0);
    EXPECT_THROW(spectral_check(h, diagonalize(h), 12, 5), ConvergenceError);
}

TEST(Conversion, QPMatrixMatchesLadder) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int dim = 30;
    for (int k = 0; k < 20; ++k) {
        QuadraticQP qp;
        qp.c1 = u(rng) * 2;
        qp.c2 = u(rng) * 2;
        qp.c3 = u(rng);
        qp.c4 = u(rng);
        qp.c5 = u(rng);
        qp.lambda = 0.5 + std::abs(u(rng));
        qp.hbar = 0.3 + std::abs(u(rng));
        const LadderForm lf = to_ladder(qp);
        const FockMatrix direct = qp_matrix(qp, dim);
        const FockMatrix via = ladder_matrix(lf.h, dim) + lf.constant * FockMatrix::Identity(dim, dim);
        const int safe = dim - 2;
        EXPECT_LT((direct - via).topLeftCorner(safe, safe).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Conversion, HarmonicOscillator) {
    QuadraticQP qp;  // (Q^2 + P^2)/2 with lambda = hbar = 1
    qp.c1 = 0.5;
    qp.c2 = 0.5;
    const LadderForm lf = to_ladder(qp);
    EXPECT_NEAR(lf.h.z1, 1.0, 1e-15);
    EXPECT_NEAR(std::abs(lf.h.z2), 0.0, 1e-15);
    EXPECT_NEAR(lf.constant, 0.5, 1e-15);
}

TEST(Conversion, RejectsBadScales) {
    QuadraticQP qp;
    qp.lambda = 0.0;
    EXPECT_THROW(to_ladder(qp), InvalidArgument);
}

TEST(Json, BothBases) {
    const auto lad = hamiltonian_from_json(nlohmann::json::parse(R"({"basis":"ladder","z1":2,"z2":[0.6,0],"z3":1})"));
    EXPECT_NEAR(as_ladder(lad).z1, 2.0, 0);
    EXPECT_NEAR(std::abs(as_ladder(lad).z3 - 1.0), 0.0, 0);
    const auto qp = hamiltonian_from_json(nlohmann::json::parse(R"({"basis":"qp","c1":1,"c2":1,"hbar":2})"));
    EXPECT_EQ(hbar_of(qp), 2.0);
    EXPECT_THROW(hamiltonian_from_json(nlohmann::json::parse(R"({"basis":"xyz"})")), ConfigError);
    EXPECT_THROW(hamiltonian_from_json(nlohmann::json::parse(R"({"basis":"ladder","z1":"a"})")), ConfigError);
    const auto inferred = hamiltonian_from_json(nlohmann::json::parse(R"({"z1":2,"z2":0.6})"));
    EXPECT_NEAR(diagonalize(as_ladder(inferred)).z0, 1.6, 1e-14);
}

} // namespace

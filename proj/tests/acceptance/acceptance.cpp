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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "phasemeas/errors.hpp"
#include "phasemeas/fock.hpp"
#include "phasemeas/hamiltonian.hpp"
#include "phasemeas/lindblad.hpp"
#include "phasemeas/povm.hpp"
#include "phasemeas/propagator.hpp"
#include "phasemeas/unravelling.hpp"

namespace {

using namespace phasemeas;
constexpr double kPi = std::numbers::pi;
const Complex kCatAlpha(0.0, 3.0);

struct Check {
    std::string what;
    bool pass;
};

struct Criterion {
    int id;
    std::string title;
    std::vector<Check> checks;
    std::string error;

    void add(const std::string& what, bool pass) { checks.push_back({what, pass}); }
    bool pass() const {
        if (!error.empty()) return false;
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

MeasurementModel figure_model(double sigma = 0.5) {
    MeasurementModel m;
    m.gamma = 1.0;
    m.omega = 10.0;
    m.g = KickDistribution::gaussian(sigma);
    return m;
}

IntegratorConfig strict_integrator() {
    IntegratorConfig ic;
    ic.dt = 2.5e-4;
    ic.audit = true;
    return ic;
}

// shared by criteria 1 and 2
struct CatRun {
    FockMatrix rho0;
    Trajectory traj;
};

CatRun cat_measurement_run() {
    const int dim = 64;
    const MeasurementModel m = figure_model();
    CatRun run{fock::density(fock::cat_state(kCatAlpha, dim)), {}};
    const KickMap kicks(make_kick_quadrature(m.g, dim), dim);
    run.traj = integrate(run.rho0, [&](const FockMatrix& r) { return measurement_me_rhs(r, m, kicks); }, {0.0, 1.0},
                         strict_integrator());
    return run;
}

void criterion1(Criterion& c, const CatRun& run) {
    const MeasurementModel m = figure_model();
    const GridSpec spec{8.0, 64};
    // closed-form initial condition, independent of the Fock-space path
    const PhaseGrid exact = sample_grid(
        [&](Complex eta) {
            return oracle::cat_chi(kCatAlpha, eta * std::polar(1.0, m.omega)) * damping_factor(m, std::abs(eta), 1.0);
        },
        spec, GridKind::characteristic);
    const PhaseGrid propagated = evolve_char(CharSource::from_state(run.rho0), m, 1.0, spec);
    const PhaseGrid rk4 = char_grid(run.traj.states.back(), spec);
    const double dev = (exact.values - rk4.values).cwiseAbs().maxCoeff();
    const double dev_prop = (exact.values - propagated.values).cwiseAbs().maxCoeff();
    c.add(fmt("max |chi_closed - chi_rk4| = %.3e (tol 1e-3)", dev), dev <= 1e-3);
    c.add(fmt("max |chi_closed - chi_propagator| = %.3e (tol 1e-10)", dev_prop), dev_prop <= 1e-10);
    c.add(fmt("step-halving audit change = %.3e (tol 1e-6)", run.traj.audit_change),
          run.traj.audited && run.traj.audit_change <= 1e-6);
}

void criterion2(Criterion& c, const CatRun& run) {
    const MeasurementModel m = figure_model();
    const double expected = std::exp(-(1.0 - std::exp(-9.0)));
    const Complex peak(0.0, 6.0);
    const Complex followed = peak * std::polar(1.0, -m.omega * 1.0);
    const CharSource src = CharSource::from_state(run.rho0);
    const double chi0 = std::abs(src(peak));
    const double prop = std::abs(evolve(src, m, 1.0)(followed)) / chi0;
    const double rk4 = std::abs(char_function(run.traj.states.back(), followed)) / chi0;
    c.add(fmt("propagator ratio %.9f vs %.9f (tol 1e-6)", prop, expected), std::abs(prop - expected) <= 1e-6);
    c.add(fmt("rk4 ratio %.9f vs %.9f (tol 1e-3)", rk4, expected), std::abs(rk4 - expected) <= 1e-3);
    c.add(fmt("expected value %.6f == 0.367925", expected), std::abs(expected - 0.367925) < 5e-7);
}

void wigner_path(Criterion& c, const std::string& name, const PhaseGrid& w) {
    const int o = w.origin_index();
    const double w0 = w.values(o, o).real();
    c.add(name + fmt(": W(0) = %.9f vs 2/pi = %.9f (tol 1e-5)", w0, 2.0 / kPi), std::abs(w0 - 2.0 / kPi) <= 1e-5);
    const WignerGridCheck chk = check_wigner(w);
    const Complex at = w.point(chk.min_i, chk.min_j);
    const double ref = oracle::cat_wigner(kCatAlpha, at);
    c.add(name + fmt(": grid minimum %.6f at (%.4f, %.4f)", chk.min_value, at.real(), at.imag()) + " is negative",
          chk.min_value < 0.0);
    c.add(name + fmt(": |W_min - closed form| = %.3e (tol 1e-4)", std::abs(chk.min_value - ref)),
          std::abs(chk.min_value - ref) <= 1e-4);
}

void criterion3(Criterion& c) {
    const double ref = oracle::cat_wigner(kCatAlpha, kPi / 12.0);
    c.add(fmt("closed form at xi = pi/12: %.6f (about -0.555)", ref), std::abs(ref + 0.555) < 1e-3);
    // Fourier path on the default chi grid
    const FockMatrix rho = fock::density(fock::cat_state(kCatAlpha, fock::default_dimension(3.0)));
    const PhaseGrid w_fft = wigner_grid_via_fft(char_grid(rho, default_grid_spec(3.0)));
    wigner_path(c, "fft", w_fft);
    // parity path on the same xi lattice (spacing pi/24), larger dim for the displaced parity
    const FockMatrix rho_big = fock::density(fock::cat_state(kCatAlpha, 160));
    const double dxi = w_fft.spacing();
    const PhaseGrid w_par = wigner_grid_via_parity(rho_big, GridSpec{16 * dxi, 32});
    wigner_path(c, "parity", w_par);
}

void criterion4(Criterion& c) {
    hamiltonian::QuadraticLadder h;
    h.z1 = 2.0;
    h.z2 = 0.6;
    h.z3 = 1.0;
    const auto nf = hamiltonian::diagonalize(h);
    const auto rep = hamiltonian::spectral_check(h, nf, 120, 5);
    c.add(fmt("z0 = %.12f, c = %.12f", nf.z0, nf.c), std::abs(nf.z0 - 1.6) < 1e-12 && std::abs(nf.c + 0.5125) < 1e-12);
    c.add(fmt("max |E_n - (z0 n + c)| = %.3e (tol 1e-6)", rep.max_error), rep.max_error <= 1e-6);
    const double sym = std::abs(hamiltonian::symplectic_residual(nf));
    c.add(fmt("| |mu|^2 - |nu|^2 - 1 | = %.3e (tol 1e-12)", sym), sym <= 1e-12);
}

void criterion5(Criterion& c) {
    const int dim = 16;
    const FockMatrix vac = fock::density(fock::fock_state(0, dim));
    const ApparatusState psi = ApparatusState::pure(fock::fock_state(0, dim));
    const PovmMoments m = povm_moments(vac, psi);
    c.add(fmt("quadrature var_x = %.12f (0.5 +- 1e-6)", m.var_x()), std::abs(m.var_x() - 0.5) <= 1e-6);
    const std::size_t n = 100000;
    const auto xs = sample_outcomes(vac, psi, n, 20240601);
    double mean = 0.0;
    for (auto z : xs) mean += z.real();
    mean /= double(n);
    double m2 = 0.0, m4 = 0.0;
    for (auto z : xs) {
        const double d = z.real() - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double var = m2 / double(n - 1);
    const double se = std::sqrt((m4 / double(n) - var * var) / double(n));
    c.add(fmt("sampled var_x = %.6f, |var - 0.5| = %.2f SE (tol 3 SE)", var, std::abs(var - 0.5) / se),
          std::abs(var - 0.5) <= 3.0 * se);
}

void criterion6(Criterion& c) {
    const int dim = 64;
    const FockMatrix rho0 = fock::density(fock::cat_state(kCatAlpha, dim));
    const GridSpec spec{8.0, 64};
    std::vector<double> dev;
    for (double sigma : {0.1, 0.05}) {
        const MeasurementModel m = figure_model(sigma);
        const double kappa = matched_diffusion_kappa(m);
        const Trajectory traj = integrate(
            rho0, [&](const FockMatrix& r) { return diffusion_me_rhs(r, m.omega, kappa); }, {0.0, 1.0},
            strict_integrator());
        const PhaseGrid exact = evolve_char(CharSource::from_state(rho0), m, 1.0, spec);
        const PhaseGrid diff = char_grid(traj.states.back(), spec);
        const double d = (exact.values - diff.values).cwiseAbs().maxCoeff() / exact.values.cwiseAbs().maxCoeff();
        dev.push_back(d);
        c.add(fmt("sigma = %.2f: kappa = %.5f, relative chi deviation %.3e", sigma, kappa, d), true);
    }
    c.add(fmt("reduction factor %.2f (need >= 3)", dev[0] / dev[1]), dev[0] / dev[1] >= 3.0);
}

void criterion7(Criterion& c) {
    const MeasurementModel m = figure_model();
    const FockMatrix rho0 = fock::density(fock::cat_state(kCatAlpha, 72));
    const CharSource src = CharSource::from_state(rho0);
    std::vector<Complex> pts;
    for (int i = -6; i <= 6; ++i)
        for (int j = -6; j <= 6; ++j) pts.emplace_back(0.6 * i, 0.6 * j + 0.05);

    double norm_dev = 0.0, envelope_excess = 0.0, semigroup = 0.0;
    for (double t : {0.0, 0.3, 1.0, 2.5}) {
        const CharSource ev = evolve(src, m, t);
        norm_dev = std::max(norm_dev, std::abs(ev(0.0) - 1.0));
        for (Complex eta : pts) {
            envelope_excess =
                std::max(envelope_excess, std::abs(ev(eta)) - std::abs(src(eta * std::polar(1.0, m.omega * t))));
            const CharSource two = evolve(evolve(src, m, 0.4 * t), m, 0.6 * t);
            semigroup = std::max(semigroup, std::abs(two(eta) - ev(eta)));
        }
    }
    c.add(fmt("normalization |chi(0,t) - 1| = %.3e (tol 1e-10)", norm_dev), norm_dev <= 1e-10);
    c.add(fmt("damping envelope max excess = %.3e (must be <= 0)", envelope_excess), envelope_excess <= 0.0);
    c.add(fmt("semigroup composition = %.3e (tol 1e-12)", semigroup), semigroup <= 1e-12);

    // integrator drifts on the measurement equation
    {
        const int dim = 48;
        const MeasurementModel mm = figure_model();
        const KickMap kicks(make_kick_quadrature(mm.g, dim), dim);
        IntegratorConfig ic;
        ic.dt = 1e-3;
        ic.audit = false;
        const Trajectory traj = integrate(fock::density(fock::cat_state(Complex(0.0, 2.0), dim)),
                                          [&](const FockMatrix& r) { return measurement_me_rhs(r, mm, kicks); },
                                          {0.0, 0.25, 0.5, 0.75, 1.0}, ic);
        double tr = 0.0, herm = 0.0;
        for (const auto& r : traj.records) {
            tr = std::max(tr, std::abs(r.trace - 1.0));
            herm = std::max(herm, r.hermiticity);
        }
        c.add(fmt("trace drift %.3e, hermiticity drift %.3e (tol 1e-8)", tr, herm), tr <= 1e-8 && herm <= 1e-8);
    }

    // Kraus completeness on the resolved block
    {
        const int dim = 24, block = 10;
        const ApparatusState psi(fock::thermal_state(0.5, dim));
        const FockMatrix total = povm_completeness(psi, quad::polar_rule(14.0, 20, 2 * dim + 6));
        const double dev =
            (total.topLeftCorner(block, block) - FockMatrix::Identity(block, block)).cwiseAbs().maxCoeff();
        c.add(fmt("Kraus completeness on %gx%g block: %.3e (tol 1e-6)", block, block, dev), dev <= 1e-6);
    }

    // Monte-Carlo unravelling at 5 probes
    {
        UnravellingOptions opts;
        opts.n_traj = 2000;
        opts.seed = 424242;
        opts.probes = {1.0, Complex(0.0, 0.5), Complex(-0.7, 0.7), Complex(0.4, -1.2), Complex(1.5, 1.5)};
        MeasurementModel mv = figure_model();
        mv.omega = 2.0;
        const FockMatrix vac = fock::density(fock::fock_state(0, 32));
        const UnravellingResult r = monte_carlo_unravelling(vac, mv, {1.0}, opts);
        double worst = 0.0;
        for (std::size_t p = 0; p < opts.probes.size(); ++p) {
            const Complex eta = opts.probes[p];
            const Complex ref = oracle::coherent_chi(0.0, eta) * damping_factor(mv, std::abs(eta), 1.0);
            const Complex d = r.chi_mean[0][p] - ref, se = r.chi_stderr[0][p];
            worst = std::max({worst, std::abs(d.real()) / se.real(), std::abs(d.imag()) / se.imag()});
        }
        c.add(fmt("Monte-Carlo worst deviation %.2f SE over 5 probes (tol 3 SE)", worst), worst <= 3.0);
    }
}

} // namespace

int main() {
    std::vector<Criterion> crits{{1, "exact propagator vs RK4 measurement master equation", {}, {}},
                                 {2, "outer-peak damping ratio", {}, {}},
                                 {3, "cat Wigner function, both numerical paths", {}, {}},
                                 {4, "Bogoliubov spectral check", {}, {}},
                                 {5, "POVM moment law", {}, {}},
                                 {6, "diffusion-limit convergence", {}, {}},
                                 {7, "property suites", {}, {}}};

    CatRun run;
    std::string run_error;
    try {
        run = cat_measurement_run();
    } catch (const std::exception& e) {
        run_error = e.what();
    }

    const std::vector<std::function<void(Criterion&)>> bodies{
        [&](Criterion& c) {
            if (!run_error.empty()) throw Error(run_error);
            criterion1(c, run);
        },
        [&](Criterion& c) {
            if (!run_error.empty()) throw Error(run_error);
            criterion2(c, run);
        },
        criterion3, criterion4, criterion5, criterion6, criterion7};

    int failures = 0;
    for (std::size_t i = 0; i < crits.size(); ++i) {
        try {
            bodies[i](crits[i]);
        } catch (const std::exception& e) {
            crits[i].error = e.what();
        }
        const Criterion& c = crits[i];
        for (const auto& chk : c.checks) std::printf("    [%s] %s\n", chk.pass ? "ok" : "xx", chk.what.c_str());
        if (!c.error.empty()) std::printf("    [xx] error: %s\n", c.error.c_str());
        std::printf("criterion %d: %s: %s\n", c.id, c.title.c_str(), c.pass() ? "PASS" : "FAIL");
        std::fflush(stdout);
        failures += c.pass() ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}

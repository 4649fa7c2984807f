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

#include "phasemeas/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "phasemeas/errors.hpp"
#include "phasemeas/grid_io.hpp"
#include "phasemeas/hamiltonian.hpp"
#include "phasemeas/lindblad.hpp"
#include "phasemeas/povm.hpp"
#include "phasemeas/unravelling.hpp"

#ifndef PHASEMEAS_VERSION
#define PHASEMEAS_VERSION "0.0.0"
#endif

namespace phasemeas::app {

namespace {

using nlohmann::json;

constexpr const char* kUnits =
    "dimensionless: amplitudes in the ladder basis, gamma and omega in a common rate unit, times in its inverse";
constexpr double kOracleTolerance = 1e-3;    // RK4 vs closed form, gamma > 0
constexpr double kUnitaryTolerance = 1e-8;   // RK4 vs closed form, gamma = 0
constexpr double kStandardErrors = 3.0;      // Monte-Carlo comparisons
constexpr double kSpectralTolerance = 1e-6;
constexpr double kSymplecticTolerance = 1e-12;
constexpr double kResidualTolerance = 1e-10;
constexpr int kMaxPeaks = 8;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string stem_for(const char* prefix, std::size_t index) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s_t%03zu", prefix, index);
    return buf;
}

struct Peak {
    int i = 0;
    int j = 0;
    Complex eta;
    double magnitude = 0.0;
};

std::vector<Peak> find_peaks(const PhaseGrid& grid) {
    const int n = grid.n_points;
    const double top = grid.values.cwiseAbs().maxCoeff();
    std::vector<Peak> peaks;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = std::abs(grid.values(i, j));
            if (v < 1e-3 * top) continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const int a = i + di, b = j + dj;
                    if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= n || b >= n) continue;
                    if (std::abs(grid.values(a, b)) > v) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) peaks.push_back({i, j, grid.point(i, j), v});
        }
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.magnitude > b.magnitude; });
    if (peaks.size() > static_cast<std::size_t>(kMaxPeaks)) peaks.resize(kMaxPeaks);
    return peaks;
}

json peaks_json(const std::vector<Peak>& peaks) {
    json out = json::array();
    for (const auto& p : peaks) out.push_back({{"eta", complex_json(p.eta)}, {"magnitude", p.magnitude}});
    return out;
}

json provenance(const config::RunConfig* cfg, const json& raw, const Options& opts, std::uint64_t seed) {
    json p;
    p["config_hash"] = config::config_hash(raw);
    p["version"] = PHASEMEAS_VERSION;
    p["seed"] = seed;
    p["command"] = opts.command;
    p["tolerance_profile"] = to_string(opts.profile);
    if (cfg) p["scenario"] = cfg->scenario;
    return p;
}

std::vector<Complex> default_probes() { return {{1.0, 0.0}, {0.0, 0.5}, {-0.7, 0.7}, {0.4, -1.2}, {1.5, 1.5}}; }

void finish(Result& res) {
    json table = json::array();
    bool ok = true;
    for (const auto& c : res.comparisons) {
        table.push_back(c.to_json());
        ok = ok && c.pass;
    }
    res.report["comparisons"] = table;
    res.report["status"] = ok ? "pass" : "fail";
    if (!ok && res.exit_code == kOk) res.exit_code = kToleranceFailure;
}

void write_json(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

IntegratorConfig integrator_for(const config::RunConfig& cfg, const Options& opts, const GridSpec& probe_grid) {
    IntegratorConfig ic;
    ic.dt = cfg.integrator.dt;
    ic.audit = cfg.integrator.audit && opts.profile == Profile::strict;
    // audit on a coarse subset of the output grid
    const int n = probe_grid.n_points;
    const double h = 2.0 * probe_grid.extent / n;
    for (int i = 0; i < n; i += std::max(1, n / 8)) {
        for (int j = 0; j < n; j += std::max(1, n / 8)) ic.audit_probes.emplace_back(-probe_grid.extent + i * h, -probe_grid.extent + j * h);
    }
    return ic;
}

Trajectory rk4_oracle(const config::RunConfig& cfg, const Options& opts, const MeasurementModel& model,
                      const FockMatrix& rho0) {
    const int dim = static_cast<int>(rho0.rows());
    const KickMap kicks(make_kick_quadrature(model.g, dim), dim, KickMap::Mode::covariant);
    auto rhs = [&](const FockMatrix& rho) { return measurement_me_rhs(rho, model, kicks); };
    return integrate(rho0, rhs, cfg.times, integrator_for(cfg, opts, cfg.grid));
}

} // namespace

Profile profile_from_string(const std::string& name) {
    if (name == "strict") return Profile::strict;
    if (name == "fast") return Profile::fast;
    throw ConfigError("tolerance profile must be 'strict' or 'fast', got '" + name + "'");
}

std::string to_string(Profile p) { return p == Profile::strict ? "strict" : "fast"; }

json Comparison::to_json() const {
    return {{"pair", pair},           {"metric", metric},       {"time", time}, {"max_deviation", max_deviation},
            {"mean_deviation", mean_deviation}, {"tolerance", tolerance}, {"pass", pass}};
}

Result run(const config::RunConfig& cfg, const Options& opts) {
    const std::uint64_t seed = opts.seed.value_or(cfg.seed);
    const MeasurementModel model = cfg.model();
    const FockMatrix rho0 = cfg.state.build();
    const CharSource chi0 = CharSource::from_state(rho0);
    std::filesystem::create_directories(opts.out);

    Result res;
    res.report["format"] = "phasemeas-report";
    res.report["version"] = 1;
    res.report["units"] = kUnits;
    res.report["provenance"] = provenance(&cfg, cfg.raw, opts, seed);
    res.report["model"] = {{"gamma", model.gamma},
                           {"omega", model.omega},
                           {"kick", cfg.kick.kind},
                           {"kick_second_moment", model.g.second_moment()},
                           {"dim", rho0.rows()}};
    if (cfg.hamiltonian) {
        res.report["normal_form"] = hamiltonian::to_json(hamiltonian::diagonalize(hamiltonian::as_ladder(*cfg.hamiltonian)));
    }

    const PhaseGrid ref = evolve_char(chi0, model, 0.0, cfg.grid);
    const std::vector<Peak> ref_peaks = find_peaks(ref);
    res.report["reference_peaks"] = peaks_json(ref_peaks);

    const GridSpec wspec = cfg.wigner_grid.value_or(default_grid_spec(cfg.state.max_abs_alpha()));
    json summaries = json::array();
    for (std::size_t ti = 0; ti < cfg.times.size(); ++ti) {
        const double t = cfg.times[ti];
        const CharSource evolved = evolve(chi0, model, t);
        const PhaseGrid chi = evolve_char(chi0, model, t, cfg.grid);
        validate_grid(chi);
        const std::string chi_stem = stem_for("chi", ti);
        io::write_grid(chi, opts.out / chi_stem);

        json s;
        s["t"] = t;
        s["chi_grid"] = chi_stem;
        s["interpolated"] = chi.interpolated;
        s["peaks"] = peaks_json(find_peaks(chi));
        // damping of each reference peak, followed in the frame rotating with omega
        json ratios = json::array();
        const Complex back = std::polar(1.0, -model.omega * t);
        for (const auto& p : ref_peaks) {
            const double now = std::abs(evolved(p.eta * back));
            ratios.push_back({{"eta", complex_json(p.eta)},
                              {"ratio", now / p.magnitude},
                              {"expected", damping_factor(model, std::abs(p.eta), t)}});
        }
        s["damping_ratios"] = ratios;
        if (cfg.wigner) {
            const PhaseGrid chi_wide = evolve_char(chi0, model, t, wspec);
            const PhaseGrid w = wigner_grid_via_fft(chi_wide);
            validate_grid(w);
            const std::string w_stem = stem_for("wigner", ti);
            io::write_grid(w, opts.out / w_stem);
            const WignerGridCheck wc = check_wigner(w);
            s["wigner_grid"] = w_stem;
            s["wigner_min"] = wc.min_value;
            s["wigner_integral"] = wc.integral;
            s["purity"] = grid_purity(chi_wide);
        } else {
            s["purity"] = grid_purity(chi);
        }
        summaries.push_back(s);
    }
    res.report["times"] = summaries;

    if (opts.compare_oracle) {
        const Trajectory traj = rk4_oracle(cfg, opts, model, rho0);
        write_json(opts.out / "trajectory.json", trajectory_json(traj));
        const double tol = model.gamma == 0.0 ? kUnitaryTolerance : kOracleTolerance;
        for (std::size_t ti = 0; ti < cfg.times.size(); ++ti) {
            const PhaseGrid exact = evolve_char(chi0, model, cfg.times[ti], cfg.grid);
            const PhaseGrid rk4 = char_grid(traj.states[ti], cfg.grid);
            const Eigen::ArrayXXd diff = (exact.values - rk4.values).cwiseAbs().array();
            res.comparisons.push_back({"exact vs rk4", "chi grid |difference|", cfg.times[ti], diff.maxCoeff(),
                                       diff.mean(), tol, diff.maxCoeff() <= tol});
        }
        if (traj.audited) {
            res.comparisons.push_back({"rk4 dt vs dt/2", "chi at audit probes", cfg.times.back(), traj.audit_change,
                                       traj.audit_change, 1e-6, traj.audit_change <= 1e-6});
        }
    }
    finish(res);
    write_json(opts.out / "report.json", res.report);
    return res;
}

Result compare(const config::RunConfig& cfg, const Options& opts) {
    const std::uint64_t seed = opts.seed.value_or(cfg.seed);
    const MeasurementModel model = cfg.model();
    const FockMatrix rho0 = cfg.state.build();
    const CharSource chi0 = CharSource::from_state(rho0);
    std::filesystem::create_directories(opts.out);

    Result res;
    res.report["format"] = "phasemeas-report";
    res.report["version"] = 1;
    res.report["units"] = kUnits;
    res.report["provenance"] = provenance(&cfg, cfg.raw, opts, seed);

    const Trajectory traj = rk4_oracle(cfg, opts, model, rho0);
    write_json(opts.out / "trajectory.json", trajectory_json(traj));

    UnravellingOptions mc;
    mc.n_traj = opts.profile == Profile::fast ? std::max<std::size_t>(2, cfg.monte_carlo.n_traj / 4) : cfg.monte_carlo.n_traj;
    mc.seed = seed;
    mc.probes = cfg.monte_carlo.probes.empty() ? default_probes() : cfg.monte_carlo.probes;
    const UnravellingResult unr = monte_carlo_unravelling(rho0, model, cfg.times, mc);

    const double tol = model.gamma == 0.0 ? kUnitaryTolerance : kOracleTolerance;
    for (std::size_t ti = 0; ti < cfg.times.size(); ++ti) {
        const double t = cfg.times[ti];
        const CharSource evolved = evolve(chi0, model, t);
        const PhaseGrid exact = evolve_char(chi0, model, t, cfg.grid);
        const PhaseGrid rk4 = char_grid(traj.states[ti], cfg.grid);
        const Eigen::ArrayXXd diff = (exact.values - rk4.values).cwiseAbs().array();
        res.comparisons.push_back(
            {"exact vs rk4", "chi grid |difference|", t, diff.maxCoeff(), diff.mean(), tol, diff.maxCoeff() <= tol});

        // Monte-Carlo: deviation in standard errors, per component
        for (const bool against_exact : {true, false}) {
            double worst = 0.0, sum = 0.0;
            for (std::size_t p = 0; p < mc.probes.size(); ++p) {
                const Complex ref = against_exact ? evolved(mc.probes[p]) : char_function(traj.states[ti], mc.probes[p]);
                const Complex d = unr.chi_mean[ti][p] - ref;
                const Complex se = unr.chi_stderr[ti][p];
                const double zr = std::abs(d.real()) <= 1e-9 ? 0.0 : std::abs(d.real()) / std::max(se.real(), 1e-300);
                const double zi = std::abs(d.imag()) <= 1e-9 ? 0.0 : std::abs(d.imag()) / std::max(se.imag(), 1e-300);
                worst = std::max({worst, zr, zi});
                sum += 0.5 * (zr + zi);
            }
            res.comparisons.push_back({against_exact ? "exact vs monte-carlo" : "rk4 vs monte-carlo",
                                       "chi at probes (standard errors)", t, worst,
                                       sum / static_cast<double>(mc.probes.size()), kStandardErrors,
                                       worst <= kStandardErrors});
        }
    }
    if (traj.audited) {
        res.comparisons.push_back({"rk4 dt vs dt/2", "chi at audit probes", cfg.times.back(), traj.audit_change,
                                   traj.audit_change, 1e-6, traj.audit_change <= 1e-6});
    }
    res.report["monte_carlo"] = {{"n_traj", unr.n_traj}, {"total_jumps", unr.total_jumps}};
    finish(res);
    write_json(opts.out / "report.json", res.report);
    return res;
}

Result diagonalize(const json& input, const Options& opts) {
    const json& hj = input.contains("hamiltonian") ? input.at("hamiltonian") : input;
    const auto spec = hamiltonian::hamiltonian_from_json(hj);
    const hamiltonian::QuadraticLadder h = hamiltonian::as_ladder(spec);
    const hamiltonian::NormalForm nf = hamiltonian::diagonalize(h);
    int dim = 120, levels = 5;
    try {
        dim = input.value("dim", hj.value("dim", 120));
        levels = input.value("levels", hj.value("levels", 5));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed diagonalize input: ") + e.what());
    }
    if (dim < 2 || levels < 1 || levels > dim) throw ConfigError("diagonalize needs dim >= 2 and 1 <= levels <= dim");

    Result res;
    res.report["format"] = "phasemeas-report";
    res.report["version"] = 1;
    res.report["units"] = kUnits;
    res.report["provenance"] = provenance(nullptr, input, opts, opts.seed.value_or(0));
    res.report["ladder"] = {{"z1", h.z1}, {"z2", complex_json(h.z2)}, {"z3", complex_json(h.z3)}};
    if (const auto* qp = std::get_if<hamiltonian::QuadraticQP>(&spec)) {
        res.report["ladder"]["constant"] = hamiltonian::to_ladder(*qp).constant;
    }
    res.report["normal_form"] = hamiltonian::to_json(nf);

    const auto resid = hamiltonian::diagonalization_residuals(h, nf);
    const double worst = std::max({std::abs(resid[0]), std::abs(resid[1]), std::abs(resid[2])});
    res.comparisons.push_back({"normal form", "diagonalization residual", 0.0, worst, worst, kResidualTolerance,
                               worst <= kResidualTolerance});
    const double sym = std::abs(hamiltonian::symplectic_residual(nf));
    res.comparisons.push_back({"normal form", "|mu|^2 - |nu|^2 - 1", 0.0, sym, sym, kSymplecticTolerance,
                               sym <= kSymplecticTolerance});
    const auto spectral = hamiltonian::spectral_check(h, nf, dim, levels);
    res.report["eigenvalues"] = spectral.eigenvalues;
    res.comparisons.push_back({"normal form vs matrix", "lowest levels |E_n - (z0 n + c)|", 0.0, spectral.max_error,
                               spectral.max_error, kSpectralTolerance, spectral.max_error <= kSpectralTolerance});
    finish(res);
    write_json(opts.out / "diagonalize.json", res.report);
    return res;
}

Result sample(const config::RunConfig& cfg, const Options& opts) {
    const std::uint64_t seed = opts.seed.value_or(cfg.seed);
    const FockMatrix rho = cfg.state.build();
    config::StateSpec app = cfg.raw.contains("apparatus") ? config::StateSpec{} : config::StateSpec{};
    if (cfg.raw.contains("apparatus")) {
        const json& a = cfg.raw.at("apparatus");
        app.kind = a.value("kind", std::string("vacuum"));
        if (a.contains("alpha")) app.alpha = config::complex_from_json(a.at("alpha"));
        app.n = a.value("n", 0);
        app.mean = a.value("mean", 0.0);
    }
    app.dim = static_cast<int>(rho.rows());
    const ApparatusState psi(app.build());
    std::filesystem::create_directories(opts.out);

    const std::vector<Complex> xs = sample_outcomes(rho, psi, cfg.n_samples, seed);
    {
        std::ofstream csv(opts.out / "samples.csv", std::ios::binary);
        if (!csv) throw Error("cannot write samples.csv");
        csv << "x,y\n";
        for (const Complex z : xs) csv << io::format_double(z.real()) << ',' << io::format_double(z.imag()) << '\n';
    }
    const PovmMoments mom = povm_moments(rho, psi);

    Result res;
    res.report["format"] = "phasemeas-report";
    res.report["version"] = 1;
    res.report["units"] = kUnits;
    res.report["provenance"] = provenance(&cfg, cfg.raw, opts, seed);
    const double n = static_cast<double>(xs.size());
    for (const bool axis_x : {true, false}) {
        double mean = 0.0;
        for (const Complex z : xs) mean += axis_x ? z.real() : z.imag();
        mean /= n;
        double m2 = 0.0, m4 = 0.0;
        for (const Complex z : xs) {
            const double d = (axis_x ? z.real() : z.imag()) - mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        const double var = m2 / (n - 1.0);
        m4 /= n;
        const double se_mean = std::sqrt(var / n);
        const double se_var = std::sqrt(std::max(0.0, m4 - var * var) / n);
        const double q_mean = axis_x ? mom.mean_x() : mom.mean_y();
        const double q_var = axis_x ? mom.var_x() : mom.var_y();
        const std::string ax = axis_x ? "alpha_x" : "alpha_y";
        res.report["empirical"][ax] = {{"mean", mean}, {"variance", var}, {"se_mean", se_mean}, {"se_variance", se_var}};
        res.report["quadrature"][ax] = {{"mean", q_mean}, {"variance", q_var}};
        const double zm = std::abs(mean - q_mean) / se_mean;
        const double zv = std::abs(var - q_var) / se_var;
        res.comparisons.push_back({"samples vs quadrature", "mean of " + ax + " (standard errors)", 0.0, zm, zm,
                                   kStandardErrors, zm <= kStandardErrors});
        res.comparisons.push_back({"samples vs quadrature", "variance of " + ax + " (standard errors)", 0.0, zv, zv,
                                   kStandardErrors, zv <= kStandardErrors});
    }
    res.report["n_samples"] = xs.size();
    finish(res);
    write_json(opts.out / "report.json", res.report);
    return res;
}

json figure1_config_json() {
    return {{"scenario", "figure1"},
            {"state", {{"kind", "cat"}, {"alpha", json::array({0.0, 3.0})}, {"dim", 64}}},
            {"model", {{"gamma", 1.0}, {"omega", 10.0}, {"kick", {{"gaussian", {{"sigma", 0.5}}}}}}},
            {"times", json::array({0.0, 1.0})},
            {"grid", {{"extent", 8.0}, {"n", 64}}},
            {"integrator", {{"dt", 2.5e-4}, {"audit", true}}},
            {"seed", 0}};
}

int main_entry(const Options& opts, std::ostream& out, std::ostream& err) {
    auto fail = [&](int code, const char* kind, const std::string& message) {
        err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
        return code;
    };
    try {
        Result res;
        if (opts.command == "figure1") {
            const config::RunConfig cfg = config::parse_run_config(figure1_config_json());
            res = run(cfg, opts);
            const auto& last = res.report["times"].back();
            for (const auto& r : last["damping_ratios"]) {
                const auto eta = r["eta"];
                if (std::abs(eta[0].get<double>()) < 1e-12 && std::abs(eta[1].get<double>() - 6.0) < 1e-12) {
                    const double expected = std::exp(-(1.0 - std::exp(-9.0)));
                    const double got = r["ratio"].get<double>();
                    res.comparisons.push_back({"propagator vs closed form", "outer-peak damping ratio at eta = 6i",
                                               1.0, std::abs(got - expected), std::abs(got - expected), 1e-6,
                                               std::abs(got - expected) <= 1e-6});
                    res.report["outer_peak_ratio"] = got;
                }
            }
            finish(res);
            write_json(opts.out / "report.json", res.report);
        } else if (opts.command == "diagonalize") {
            std::ifstream in(opts.config);
            if (!in) throw ConfigError("cannot open config " + opts.config.string());
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
            res = diagonalize(j, opts);
        } else {
            if (opts.config.empty()) throw ConfigError("--config is required for '" + opts.command + "'");
            const config::RunConfig cfg = config::load_run_config(opts.config);
            if (opts.command == "run") {
                res = run(cfg, opts);
            } else if (opts.command == "compare") {
                res = compare(cfg, opts);
            } else if (opts.command == "sample") {
                res = sample(cfg, opts);
            } else {
                throw ConfigError("unknown command '" + opts.command + "'");
            }
        }
        out << res.report.dump(2) << '\n';
        return res.exit_code;
    } catch (const ConfigError& e) {
        return fail(kConfigError, "config", e.what());
    } catch (const InstabilityError& e) {
        return fail(kConfigError, "instability", e.what());
    } catch (const InvalidArgument& e) {
        return fail(kConfigError, "invalid-argument", e.what());
    } catch (const ConvergenceError& e) {
        return fail(kToleranceFailure, "convergence", e.what());
    } catch (const Error& e) {
        return fail(kNumericalAbort, "numerical", e.what());
    } catch (const std::exception& e) {
        return fail(kNumericalAbort, "internal", e.what());
    }
}

} // namespace phasemeas::app

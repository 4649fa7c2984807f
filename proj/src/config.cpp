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

#include "phasemeas/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "phasemeas/errors.hpp"
#include "phasemeas/povm.hpp"

namespace phasemeas::config {

namespace {

using nlohmann::json;

StateSpec parse_state(const json& j, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
    StateSpec s;
    s.kind = j.value("kind", std::string("vacuum"));
    if (j.contains("alpha")) s.alpha = complex_from_json(j.at("alpha"));
    s.n = j.value("n", 0);
    s.mean = j.value("mean", 0.0);
    s.dim = j.value("dim", 0);
    static const char* kinds[] = {"vacuum", "coherent", "cat", "fock", "thermal"};
    if (std::find(std::begin(kinds), std::end(kinds), s.kind) == std::end(kinds)) {
        throw ConfigError(std::string(where) + ": unknown state kind '" + s.kind + "'");
    }
    if (s.kind == "fock" && s.n < 0) throw ConfigError(std::string(where) + ": n must be >= 0");
    if (s.kind == "thermal" && !(s.mean >= 0.0)) throw ConfigError(std::string(where) + ": mean must be >= 0");
    if (s.dim != 0 && s.dim < 2) throw ConfigError(std::string(where) + ": dim must be >= 2");
    return s;
}

GridSpec parse_grid(const json& j, const char* where) {
    GridSpec g;
    g.extent = j.value("extent", g.extent);
    g.n_points = j.value("n", j.value("n_points", g.n_points));
    try {
        g.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string(where) + ": " + e.what());
    }
    return g;
}

} // namespace

Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw ConfigError("expected a number or [re, im], got " + j.dump());
}

int StateSpec::resolved_dim() const {
    if (dim > 0) return dim;
    if (kind == "coherent" || kind == "cat") return fock::default_dimension(std::abs(alpha));
    if (kind == "fock") return std::max(32, 2 * n + 16);
    if (kind == "thermal") {
        if (mean <= 0.0) return 32;
        const int tail = static_cast<int>(std::ceil(std::log(1e-12) / std::log(mean / (1.0 + mean))));
        return std::max(32, tail + 1);
    }
    return 32;
}

FockMatrix StateSpec::build() const {
    const int d = resolved_dim();
    if (kind == "vacuum") return fock::density(fock::fock_state(0, d));
    if (kind == "coherent") return fock::density(fock::coherent_state(alpha, d));
    if (kind == "cat") return fock::density(fock::cat_state(alpha, d));
    if (kind == "fock") {
        if (n >= d) throw ConfigError("fock state n = " + std::to_string(n) + " does not fit in dim " + std::to_string(d));
        return fock::density(fock::fock_state(n, d));
    }
    return fock::thermal_state(mean, d);
}

double StateSpec::max_abs_alpha() const {
    return (kind == "coherent" || kind == "cat") ? std::abs(alpha) : 0.0;
}

KickDistribution KickSpec::build(int dim) const {
    if (kind == "gaussian") return KickDistribution::gaussian(sigma);
    if (kind == "table") return load_kick_table(table);
    ApparatusState psi(apparatus.build());
    return kick_distribution_from_apparatus(psi, std::max(dim, psi.dim()));
}

KickDistribution load_kick_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open kick table " + path.string());
    std::vector<double> radii, density;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        double r = 0.0, g = 0.0;
        char comma = 0;
        std::istringstream row(line);
        if (!(row >> r >> comma >> g) || comma != ',') {
            if (radii.empty()) continue;  // header
            throw ConfigError("malformed kick table row '" + line + "' in " + path.string());
        }
        radii.push_back(r);
        density.push_back(g);
    }
    try {
        return KickDistribution::tabulated(std::move(radii), std::move(density));
    } catch (const InvalidArgument& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

double RunConfig::resolved_omega() const {
    std::optional<double> from_h;
    if (hamiltonian) {
        const auto nf = hamiltonian::diagonalize(hamiltonian::as_ladder(*hamiltonian));
        from_h = nf.z0 / hamiltonian::hbar_of(*hamiltonian);
    }
    if (omega && from_h && std::abs(*omega - *from_h) > 1e-12 * std::max(1.0, std::abs(*omega))) {
        throw ConfigError("model.omega = " + std::to_string(*omega) + " disagrees with the Hamiltonian normal form (" +
                          std::to_string(*from_h) + ")");
    }
    if (omega) return *omega;
    if (from_h) return *from_h;
    return 0.0;
}

MeasurementModel RunConfig::model() const {
    MeasurementModel m;
    m.gamma = gamma;
    m.omega = resolved_omega();
    m.g = kick.build(state.resolved_dim());
    m.validate();
    return m;
}

RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    c.raw = j;
    c.base_dir = base_dir;
    try {
        c.scenario = j.value("scenario", c.scenario);
        if (j.contains("state")) c.state = parse_state(j.at("state"), "state");
        if (j.contains("hamiltonian")) c.hamiltonian = hamiltonian::hamiltonian_from_json(j.at("hamiltonian"));

        const json model = j.value("model", json::object());
        c.gamma = model.value("gamma", 0.0);
        if (!(c.gamma >= 0.0)) throw ConfigError("model.gamma must be >= 0");
        if (model.contains("omega")) c.omega = model.at("omega").get<double>();
        if (model.contains("kick")) {
            const json& k = model.at("kick");
            if (k.contains("gaussian")) {
                c.kick.kind = "gaussian";
                c.kick.sigma = k.at("gaussian").at("sigma").get<double>();
                if (!(c.kick.sigma > 0.0)) throw ConfigError("kick sigma must be positive");
            } else if (k.contains("table")) {
                c.kick.kind = "table";
                std::filesystem::path p = k.at("table").get<std::string>();
                c.kick.table = p.is_absolute() ? p : base_dir / p;
                if (!std::filesystem::exists(c.kick.table)) {
                    throw ConfigError("kick table " + c.kick.table.string() + " does not exist");
                }
            } else if (k.contains("apparatus")) {
                c.kick.kind = "apparatus";
                c.kick.apparatus = parse_state(k.at("apparatus"), "model.kick.apparatus");
            } else {
                throw ConfigError("model.kick needs one of 'gaussian', 'table', 'apparatus'");
            }
        }

        if (!j.contains("times")) throw ConfigError("'times' is required");
        c.times = j.at("times").get<std::vector<double>>();
        if (c.times.empty()) throw ConfigError("'times' must not be empty");
        for (std::size_t i = 0; i < c.times.size(); ++i) {
            if (!(c.times[i] >= 0.0) || (i > 0 && c.times[i] <= c.times[i - 1])) {
                throw ConfigError("'times' must be nonnegative and strictly ascending");
            }
        }

        c.grid = j.contains("grid") ? parse_grid(j.at("grid"), "grid") : default_grid_spec(c.state.max_abs_alpha());
        if (j.contains("wigner")) {
            const json& w = j.at("wigner");
            if (w.is_boolean()) {
                c.wigner = w.get<bool>();
            } else {
                c.wigner = w.value("enabled", true);
                if (w.contains("extent") || w.contains("n")) c.wigner_grid = parse_grid(w, "wigner");
            }
        }
        c.seed = j.value("seed", static_cast<std::uint64_t>(0));

        if (j.contains("integrator")) {
            const json& in = j.at("integrator");
            c.integrator.dt = in.value("dt", c.integrator.dt);
            c.integrator.audit = in.value("audit", c.integrator.audit);
            if (!(c.integrator.dt > 0.0)) throw ConfigError("integrator.dt must be positive");
        }
        if (j.contains("monte_carlo")) {
            const json& mc = j.at("monte_carlo");
            c.monte_carlo.n_traj = mc.value("n_traj", c.monte_carlo.n_traj);
            if (c.monte_carlo.n_traj < 2) throw ConfigError("monte_carlo.n_traj must be >= 2");
            if (mc.contains("probes")) {
                for (const auto& p : mc.at("probes")) c.monte_carlo.probes.push_back(complex_from_json(p));
            }
        }
        c.n_samples = j.value("n_samples", c.n_samples);
        if (c.n_samples < 1) throw ConfigError("n_samples must be >= 1");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_run_config(j, path.parent_path());
}

std::string config_hash(const json& j) {
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace phasemeas::config

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

// config.hpp: the JSON run configuration. All quantities are dimensionless:
// times in the same unit as 1/gamma and 1/omega, amplitudes in the ladder basis.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "phasemeas/hamiltonian.hpp"
#include "phasemeas/lindblad.hpp"
#include "phasemeas/phase_space.hpp"
#include "phasemeas/propagator.hpp"

namespace phasemeas::config {

/// {"kind": "coherent"|"cat"|"fock"|"thermal"|"vacuum", "alpha", "n", "mean", "dim"}
struct StateSpec {
    std::string kind = "vacuum";
    Complex alpha{0.0, 0.0};
    int n = 0;
    double mean = 0.0;
    int dim = 0;  // 0: picked from the state

    int resolved_dim() const;
    FockMatrix build() const;
    /// Largest coherent amplitude involved (0 for Fock and thermal).
    double max_abs_alpha() const;
};

/// {"gaussian": {"sigma"}} | {"table": "file.csv"} | {"apparatus": StateSpec}
struct KickSpec {
    std::string kind = "gaussian";
    double sigma = 0.5;
    std::filesystem::path table;
    StateSpec apparatus;

    KickDistribution build(int dim) const;
};

struct IntegratorSettings {
    double dt = 2.5e-4;
    bool audit = true;
};

struct MonteCarloSettings {
    std::size_t n_traj = 2000;
    std::vector<Complex> probes;  // empty: five fixed probe points
};

struct RunConfig {
    std::string scenario = "scenario";
    StateSpec state;
    std::optional<hamiltonian::HamiltonianSpec> hamiltonian;
    double gamma = 0.0;
    std::optional<double> omega;  // may come from the Hamiltonian normal form
    KickSpec kick;
    std::vector<double> times;
    GridSpec grid;
    std::optional<GridSpec> wigner_grid;  // chi grid feeding the Wigner FFT
    bool wigner = true;
    std::uint64_t seed = 0;
    IntegratorSettings integrator;
    MonteCarloSettings monte_carlo;
    std::size_t n_samples = 100000;  // sample subcommand
    std::filesystem::path base_dir;  // relative paths resolve here
    nlohmann::json raw;

    /// omega from the config or z0 / hbar of the Hamiltonian (mismatch is an error).
    double resolved_omega() const;
    MeasurementModel model() const;
};

/// Throws ConfigError on any malformed or inconsistent field.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Reads a two-column "r,g" CSV (header line optional).
KickDistribution load_kick_table(const std::filesystem::path& path);

/// "fnv1a64:<16 hex digits>" over the compact dump of the config.
std::string config_hash(const nlohmann::json& j);

/// Parses a complex from a number or [re, im].
Complex complex_from_json(const nlohmann::json& j);

} // namespace phasemeas::config

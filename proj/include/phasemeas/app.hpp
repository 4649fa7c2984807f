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

// app.hpp: subcommands behind the command-line tool. Each returns a report
// (written to <out>/report.json) and an exit code.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "phasemeas/config.hpp"

namespace phasemeas::app {

enum ExitCode : int { kOk = 0, kConfigError = 2, kToleranceFailure = 3, kNumericalAbort = 4 };

enum class Profile { strict, fast };
Profile profile_from_string(const std::string& name);
std::string to_string(Profile p);

struct Options {
    std::string command = "run";
    std::filesystem::path config;
    std::filesystem::path out = "phasemeas-out";
    std::optional<std::uint64_t> seed;
    bool compare_oracle = false;
    Profile profile = Profile::strict;
};

/// One row of the oracle-comparison table.
struct Comparison {
    std::string pair;
    std::string metric;
    double time = 0.0;
    double max_deviation = 0.0;
    double mean_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    nlohmann::json to_json() const;
};

struct Result {
    nlohmann::json report;
    std::vector<Comparison> comparisons;
    int exit_code = kOk;
};

Result run(const config::RunConfig& cfg, const Options& opts);
Result compare(const config::RunConfig& cfg, const Options& opts);
/// Accepts a bare Hamiltonian object or a config with a "hamiltonian" key;
/// optional "dim" (default 120) and "levels" (default 5) drive the spectral check.
Result diagonalize(const nlohmann::json& input, const Options& opts);
Result sample(const config::RunConfig& cfg, const Options& opts);

/// Cat alpha = 3i, gaussian sigma = 0.5, gamma = 1, omega = 10, times {0, 1},
/// chi grid extent 8 with 64 points, dim 64.
nlohmann::json figure1_config_json();

/// Dispatch, error mapping and report writing. Machine-readable errors go to `err`.
int main_entry(const Options& opts, std::ostream& out, std::ostream& err);

} // namespace phasemeas::app

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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "phasemeas/app.hpp"
#include "phasemeas/errors.hpp"

int main(int argc, char** argv) {
    using namespace phasemeas;
    CLI::App cli{"phasemeas: phase-space dynamics under continuous imprecise quadrature measurement"};
    cli.require_subcommand(1);

    app::Options opts;
    std::string config, out = "phasemeas-out", profile = "strict";
    std::uint64_t seed = 0;
    bool compare_oracle = false;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", config, "JSON config file");
        if (needs_config) c->required();
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "overrides the config seed");
        sub->add_flag("--compare-oracle", compare_oracle, "also integrate the master equation and compare");
        sub->add_option("--tolerance-profile", profile, "strict or fast")->check(CLI::IsMember({"strict", "fast"}));
    };
    add_common(cli.add_subcommand("run", "exact propagator: chi and Wigner grids per time"), true);
    add_common(cli.add_subcommand("compare", "exact vs RK4 vs Monte-Carlo"), true);
    add_common(cli.add_subcommand("diagonalize", "normal form of a quadratic Hamiltonian"), true);
    add_common(cli.add_subcommand("sample", "draw measurement outcomes"), true);
    add_common(cli.add_subcommand("figure1", "canned cat-state scenario"), false);

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : app::kConfigError;
    }

    opts.command = cli.get_subcommands().front()->get_name();
    opts.config = config;
    opts.out = out;
    if (cli.get_subcommands().front()->count("--seed") > 0) opts.seed = seed;
    opts.compare_oracle = compare_oracle;
    opts.profile = app::profile_from_string(profile);
    return app::main_entry(opts, std::cout, std::cerr);
}

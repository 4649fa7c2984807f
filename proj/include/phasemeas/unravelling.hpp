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

// unravelling.hpp: compound-Poisson trajectories of the measured oscillator.
//
// Each trajectory: jump times at rate gamma, a kick D(alpha) per jump with
// |alpha| drawn from 2 pi r g(r) and a uniform angle, free rotation
// exp(-i omega N dt) in between. Trajectory k draws from its own generator
// seeded with (seed, k), so results do not depend on scheduling.

#pragma once

#include <cstdint>
#include <vector>

#include "phasemeas/propagator.hpp"

namespace phasemeas {

struct UnravellingOptions {
    std::size_t n_traj = 1000;
    std::uint64_t seed = 0;
    std::vector<Complex> probes;  // chi estimated here with standard errors
    double norm_tolerance = 1e-8; // norm a kick may push out of the truncated space
};

struct UnravellingResult {
    std::vector<double> times;
    std::vector<FockMatrix> rho;                  // trajectory average per time
    std::vector<std::vector<Complex>> chi_mean;   // [time][probe]
    std::vector<std::vector<Complex>> chi_stderr; // (stderr of Re, stderr of Im)
    std::size_t n_traj = 0;
    std::size_t total_jumps = 0;
};

/// times must be nonnegative and ascending. Throws TruncationError when a kick
/// leaves the resolved space.
UnravellingResult monte_carlo_unravelling(const FockMatrix& rho0, const MeasurementModel& model,
                                          const std::vector<double>& times, const UnravellingOptions& opts);

FockMatrix monte_carlo_unravelling(const FockMatrix& rho0, const MeasurementModel& model, double t,
                                   std::size_t n_traj, std::uint64_t seed);

} // namespace phasemeas

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

// propagator.hpp: closed-form evolution of chi under repeated unsharp
// measurement plus free rotation H = omega a^dag a:
//
//   chi(eta, t) = chi0(eta e^{i omega t}) * exp(-gamma t (1 - chi_g(|eta|)))

#pragma once

#include <memory>

#include "phasemeas/kick.hpp"
#include "phasemeas/phase_space.hpp"

namespace phasemeas {

struct MeasurementModel {
    double gamma = 0.0;  // measurement rate
    double omega = 0.0;  // oscillator frequency
    KickDistribution g = KickDistribution::gaussian(1.0);

    void validate() const;
};

/// exp(-gamma t (1 - chi_g(r))).
double damping_factor(const MeasurementModel& model, double r, double t);

/// Catmull-Rom bicubic lookup in a sampled grid. Throws OutOfRange outside the
/// sampled square.
Complex bicubic_lookup(const PhaseGrid& grid, Complex eta);

/// Something chi can be evaluated from: a state (exact), a sampled grid
/// (bicubic, flagged) or an already evolved source.
class CharSource {
public:
    static CharSource from_state(FockMatrix rho);
    static CharSource from_grid(PhaseGrid grid);
    static CharSource from_function(PhaseFunction f, bool interpolated);

    Complex operator()(Complex eta) const { return f_(eta); }
    bool interpolated() const { return interpolated_; }
    /// The underlying state when the source is exact and unevolved.
    const FockMatrix* state() const { return state_.get(); }

private:
    PhaseFunction f_;
    bool interpolated_ = false;
    std::shared_ptr<const FockMatrix> state_;
    std::shared_ptr<const PhaseGrid> grid_;
};

/// The evolved chi(., t) as a new source; evolving twice composes exactly.
CharSource evolve(const CharSource& chi0, const MeasurementModel& model, double t);

/// chi(., t) sampled on `spec`; the interpolated flag follows the source.
PhaseGrid evolve_char(const CharSource& chi0, const MeasurementModel& model, double t, const GridSpec& spec);
/// Grid in, grid out on the same spec (interpolation fallback).
PhaseGrid evolve_char(const PhaseGrid& chi0, const MeasurementModel& model, double t);

} // namespace phasemeas

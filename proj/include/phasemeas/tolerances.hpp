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

#pragma once

namespace phasemeas {

/// Numerical tolerances shared by every module. One record so that a run
/// report can state exactly which thresholds a result was checked against.
struct Tolerances {
    double norm = 1e-10;               // state normalization
    double hermiticity = 1e-12;        // density matrices
    double trace = 1e-10;              // density matrices
    double min_eigenvalue = -1e-8;     // density positivity floor
    double unitarity = 1e-10;          // on the well-resolved block
    double coherent_tail = 1e-12;      // Poisson mass beyond the truncation
    double chi_origin = 1e-10;         // chi(0) == 1
    double chi_symmetry = 1e-10;       // chi(-eta) == conj(chi(eta))
    double wigner_imag = 1e-8;         // imaginary residue of W
    double wigner_truncation = 1e-9;   // mass displaced out of the truncated space
    double wigner_integral = 1e-3;     // grid integral of W
    double aliasing = 1e-6;            // boundary RMS of |chi| relative to peak
    double symplectic = 1e-12;         // |mu|^2 - |nu|^2 == 1
    double apparatus_asymmetry = 1e-6; // radial symmetry of the kick density
    double sqrt_floor = -1e-10;        // eigenvalue clip for Psi^{1/2}
    double kick_tail = 1e-10;          // radial mass beyond the quadrature cut
    double trace_drift = 1e-8;         // integrator monitoring
    double hermiticity_drift = 1e-8;
    double positivity_drift = -1e-6;
    double convergence = 1e-6;         // step-halving audit on chi values
};

/// The library-wide default tolerance record.
inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

} // namespace phasemeas
